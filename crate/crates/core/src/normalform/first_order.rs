//! First-order components `B1` and the linear operator they must annihilate.

use super::jmatrix::JEntries;
use crate::dalembert::{DAlembertSeries, FrequencyPair};
use crate::taylor::QuadraticCoefficients;

/// How the `J23` and `J24` terms of `B1^{0,1}` are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum B1Reading {
    /// `J23 √(2I1) ω1 cos φ1 + J24 √(2I2) ω2 sin φ2`, as typeset.
    Printed,
    /// `J23 √(2ω1 I1) cos φ1 + J24 √(2ω2 I2) cos φ2`, following `P_i`.
    #[default]
    Corrected,
}

/// `(B1^{1,0}, B1^{0,1})` from the entries of `J`.
pub fn first_order_components(
    j: &JEntries,
    w: &FrequencyPair,
    reading: B1Reading,
) -> (DAlembertSeries, DAlembertSeries) {
    let (o1, o2) = (w.omega1, w.omega2);
    let mut bx = DAlembertSeries::zero();
    bx.add_term(1, 0, 1, 0, j.j13 * (2.0 * o1).sqrt(), 0.0);
    bx.add_term(0, 1, 0, 1, j.j14 * (2.0 * o2).sqrt(), 0.0);

    let mut by = DAlembertSeries::zero();
    by.add_term(1, 0, 1, 0, 0.0, j.j21 * (2.0 / o1).sqrt());
    by.add_term(0, 1, 0, 1, 0.0, j.j22 * (2.0 / o2).sqrt());
    match reading {
        B1Reading::Printed => {
            by.add_term(1, 0, 1, 0, j.j23 * 2f64.sqrt() * o1, 0.0);
            by.add_term(0, 1, 0, 1, 0.0, j.j24 * 2f64.sqrt() * o2);
        }
        B1Reading::Corrected => {
            by.add_term(1, 0, 1, 0, j.j23 * (2.0 * o1).sqrt(), 0.0);
            by.add_term(0, 1, 0, 1, j.j24 * (2.0 * o2).sqrt(), 0.0);
        }
    }
    (bx, by)
}

/// Left sides of the linearized equations
/// `D²x − 2nDy + (2E − n²)x + Gy` and `D²y + 2nDx + (2F − n²)y + Gx`.
pub fn linear_operator(
    x: &DAlembertSeries,
    y: &DAlembertSeries,
    efg: &QuadraticCoefficients,
    n: f64,
    w: &FrequencyPair,
) -> (DAlembertSeries, DAlembertSeries) {
    let n2 = n * n;
    let (dx, dy) = (x.apply_d(w), y.apply_d(w));
    let (ddx, ddy) = (dx.apply_d(w), dy.apply_d(w));
    let lx = &(&(&ddx - &dy.scale(2.0 * n)) + &x.scale(2.0 * efg.e - n2)) + &y.scale(efg.g);
    let ly = &(&(&ddy + &dx.scale(2.0 * n)) + &y.scale(2.0 * efg.f - n2)) + &x.scale(efg.g);
    (lx, ly)
}

/// Largest coefficient left after applying the linear operator.
pub fn linear_residual(
    x: &DAlembertSeries,
    y: &DAlembertSeries,
    efg: &QuadraticCoefficients,
    n: f64,
    w: &FrequencyPair,
) -> f64 {
    let (a, b) = linear_operator(x, y, efg, n, w);
    a.max_abs().max(b.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_of_each_reading() {
        let j = JEntries {
            j13: 1.0,
            j14: 2.0,
            j21: 3.0,
            j22: 4.0,
            j23: 5.0,
            j24: 6.0,
        };
        let w = FrequencyPair::new(0.9, 0.3).unwrap();
        let (bx, by) = first_order_components(&j, &w, B1Reading::Corrected);
        assert!(bx.terms().all(|(_, &(_, s))| s == 0.0));
        assert_eq!(bx.len(), 2);
        assert!(by.validate_parity().is_ok());
        assert_eq!(by.coeff(0, 1, 0, 1), (6.0 * 0.6f64.sqrt(), 4.0 * (2.0f64 / 0.3).sqrt()));
        let (_, printed) = first_order_components(&j, &w, B1Reading::Printed);
        assert_eq!(printed.coeff(0, 1, 0, 1).0, 0.0);
        assert_eq!(printed.coeff(1, 0, 1, 0).0, 5.0 * 2f64.sqrt() * 0.9);
    }
}
