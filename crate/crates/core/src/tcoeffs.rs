//! Closed-form cubic coefficients `T1`–`T5` of the expanded Lagrangian and
//! their reconciliation with the Taylor oracle.

use crate::equilibria::OriginShift;
use crate::params::ModelParams;
use crate::poly::{Monomial, TruncatedPoly, Var};
use crate::report::{Check, StageReport};

const SQ3: f64 = 1.732_050_807_568_877_2;

/// How the first factor inside the braces of the drag cubic is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum T5Reading {
    /// `3(ax + by)`, exactly as typeset; produces a degree-2 term.
    AsPrinted,
    /// `3(ax + by)²`, the homogeneous cubic the expansion actually yields.
    #[default]
    Squared,
}

/// Which cubic slice drives the second-order stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum L3Source {
    #[default]
    Oracle,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct H3CoefficientsClosedForm {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub t5: TruncatedPoly,
}

/// `T1`–`T4` at L4 for drag strength `w = nW1`.
pub fn t_values(g: f64, e: f64, a2: f64, w: f64) -> [f64; 4] {
    let t1 = 3.0 / 16.0
        * (16.0 / 3.0 * e + 6.0 * a2 - 979.0 / 18.0 * a2 * e
            + (143.0 + 9.0 * g) / (6.0 * SQ3) * w
            + (459.0 + 376.0 * g) / (27.0 * SQ3) * w * e
            + g * (14.0 + 4.0 * e / 3.0 + 25.0 * a2 - 1507.0 / 18.0 * a2 * e
                - (215.0 + 29.0 * g) / (6.0 * SQ3) * w
                - 2.0 * (1174.0 + 169.0 * g) / (27.0 * SQ3) * w * e));
    let t2 = 3.0 * SQ3 / 16.0
        * (14.0 - 16.0 / 3.0 * e + a2 / 3.0 - 367.0 / 18.0 * a2 * e
            + 115.0 * (1.0 + g) / (18.0 * SQ3) * w
            - (959.0 - 136.0 * g) / (27.0 * SQ3) * w * e
            + g * (32.0 * e / 3.0 + 40.0 * a2 - 382.0 / 9.0 * a2 * e
                + (511.0 + 53.0 * g) / (6.0 * SQ3) * w
                - (2519.0 - 24.0 * g) / (27.0 * SQ3) * w * e));
    let t3 = -9.0 / 16.0
        * (8.0 / 3.0 * e + 203.0 * a2 / 6.0 - 625.0 / 54.0 * a2 * e
            - (105.0 + 15.0 * g) / (18.0 * SQ3) * w
            - (403.0 - 114.0 * g) / (81.0 * SQ3) * w * e
            + g * (2.0 - 4.0 * e / 9.0 + 55.0 * a2 / 2.0 - 797.0 / 54.0 * a2 * e
                + (197.0 + 23.0 * g) / (18.0 * SQ3) * w
                - (211.0 - 32.0 * g) / (81.0 * SQ3) * w * e));
    let t4 = -9.0 * SQ3 / 16.0
        * (2.0 - 8.0 / 3.0 * e + 23.0 * a2 / 3.0 - 44.0 * a2 * e
            - (37.0 + g) / (18.0 * SQ3) * w
            - (219.0 + 253.0 * g) / (81.0 * SQ3) * w * e
            + g * (4.0 * e + 88.0 / 27.0 * a2 * e + (241.0 + 45.0 * g) / (18.0 * SQ3) * w
                - (1558.0 - 126.0 * g) / (81.0 * SQ3) * w * e));
    [t1, t2, t3, t4]
}

/// The velocity-dependent drag cubic built from the shift `(a, b)`.
pub fn t5_poly(w1: f64, a: f64, b: f64, reading: T5Reading) -> TruncatedPoly {
    let cap = 3;
    let x = TruncatedPoly::var(Var::Xi, cap);
    let y = TruncatedPoly::var(Var::Eta, cap);
    let xd = TruncatedPoly::var(Var::XiDot, cap);
    let yd = TruncatedPoly::var(Var::EtaDot, cap);
    let rho2 = a * a + b * b;
    let axby = &x.scale(a) + &y.scale(b);
    let bxay = &x.scale(b) - &y.scale(a);
    let vel = &xd.scale(a) + &yd.scale(b);
    let first = match reading {
        T5Reading::AsPrinted => axby.scale(3.0),
        T5Reading::Squared => (&axby * &axby).scale(3.0),
    };
    let brace = &first - &(&bxay * &bxay);
    let radial = &(&x * &xd) + &(&y * &yd);
    let second = (&radial * &axby).scale(2.0 * rho2);
    (&(&vel * &brace) - &second).scale(w1 / (2.0 * rho2.powi(3)))
}

/// Evaluates the printed `T1`–`T4` and assembles `T5`. For a shift below
/// the primaries' axis the L5 mirror is applied (`nW1 → −nW1`, odd powers
/// of `η` change sign).
pub fn t_coefficients_closed_form(
    p: &ModelParams,
    shift: &OriginShift,
    reading: T5Reading,
) -> H3CoefficientsClosedForm {
    let s = if shift.b < 0.0 { -1.0 } else { 1.0 };
    let [t1, t2, t3, t4] = t_values(p.gamma(), p.epsilon(), p.a2(), s * p.n_w1());
    H3CoefficientsClosedForm {
        t1,
        t2: s * t2,
        t3,
        t4: s * t4,
        t5: t5_poly(p.w1(), shift.a, shift.b, reading),
    }
}

/// `L3 = (x³T1 + 3x²yT2 + 3xy²T3 + y³T4 + 6T5)/6`.
pub fn closed_form_l3(c: &H3CoefficientsClosedForm) -> TruncatedPoly {
    let mut l3 = TruncatedPoly::from_terms(
        [
            (Monomial([3, 0, 0, 0]), c.t1 / 6.0),
            (Monomial([2, 1, 0, 0]), c.t2 / 2.0),
            (Monomial([1, 2, 0, 0]), c.t3 / 2.0),
            (Monomial([0, 3, 0, 0]), c.t4 / 6.0),
        ],
        3,
    );
    l3 = &l3 + &c.t5;
    l3
}

/// `T1`–`T4` implied by an oracle cubic slice.
pub fn t_from_oracle(l3: &TruncatedPoly) -> [f64; 4] {
    [
        6.0 * l3.coeff([3, 0, 0, 0]),
        2.0 * l3.coeff([2, 1, 0, 0]),
        2.0 * l3.coeff([1, 2, 0, 0]),
        6.0 * l3.coeff([0, 3, 0, 0]),
    ]
}

/// Coefficient-wise reconciliation of the closed-form cubic against the
/// oracle. Entries are informational; nothing here gates.
pub fn compare_h3(oracle: &TruncatedPoly, closed: &H3CoefficientsClosedForm, p: &ModelParams) -> StageReport {
    let l3 = oracle.slice(3);
    let from_oracle = t_from_oracle(&l3);
    let printed = [closed.t1, closed.t2, closed.t3, closed.t4];
    let bound = 10.0 * p.perturbation_size().powi(2);
    let mut stage = StageReport::new("taylor");
    for (i, (o, c)) in from_oracle.iter().zip(printed).enumerate() {
        let rel = (c - o).abs() / o.abs().max(1.0);
        stage.push(Check::info(format!("T{}_discrepancy", i + 1), rel, bound.max(1e-10)));
    }
    let velocity_oracle = l3.filter(|m| m.velocity_degree() > 0);
    let d = velocity_oracle.max_abs_diff(&closed.t5);
    let scale = velocity_oracle.max_abs().max(1e-300);
    stage.push(Check::info(
        "T5_discrepancy",
        if velocity_oracle.is_empty() && closed.t5.is_empty() { 0.0 } else { d / scale.max(p.w1()) },
        bound.max(1e-10),
    ));
    stage
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{solve_triangular_numeric, Branch};
    use crate::taylor::taylor_lagrangian;

    fn oracle_l3(p: &ModelParams) -> (TruncatedPoly, OriginShift) {
        let q = solve_triangular_numeric(p, Branch::L4).unwrap();
        let s = OriginShift::from_point(&q, p);
        (taylor_lagrangian(p, &s, 3).unwrap().slice(3), s)
    }

    #[test]
    fn zero_perturbation_constants() {
        let [t1, t2, _, _] = t_values(0.0, 0.0, 0.0, 0.0);
        assert_eq!(t1, 0.0);
        assert!((t2 - 21.0 * SQ3 / 8.0).abs() < 1e-14);
        let [t1, _, t3, t4] = t_values(0.7, 0.0, 0.0, 0.0);
        assert!((t1 - 21.0 * 0.7 / 8.0).abs() < 1e-14);
        assert!((t3 + 9.0 * 0.7 / 8.0).abs() < 1e-14);
        assert!((t4 + 9.0 * SQ3 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn t5_vanishes_without_drag() {
        let p = ModelParams::with_drag_strength(0.1, 0.99, 1e-3, 0.0).unwrap();
        let s = OriginShift { a: 0.5, b: 0.86 };
        assert!(t_coefficients_closed_form(&p, &s, T5Reading::Squared).t5.is_empty());
    }

    #[test]
    fn squared_t5_is_the_oracle_velocity_cubic() {
        let p = ModelParams::with_drag_strength(0.05, 1.0, 0.0, 1e-3).unwrap();
        let (l3, s) = oracle_l3(&p);
        let closed = t5_poly(p.w1(), s.a, s.b, T5Reading::Squared);
        let vel = l3.filter(|m| m.velocity_degree() > 0);
        assert!(vel.max_abs_diff(&closed) < 1e-15, "{}", vel.max_abs_diff(&closed));
        let printed = t5_poly(p.w1(), s.a, s.b, T5Reading::AsPrinted);
        assert!(printed.slice(2).max_abs() > 0.0);
    }

    #[test]
    fn classical_oracle_cubic() {
        let mu = 0.1;
        let g = 1.0 - 2.0 * mu;
        let p = ModelParams::classical(mu).unwrap();
        let (l3, _) = oracle_l3(&p);
        let t = t_from_oracle(&l3);
        // independently differentiated classical third derivatives
        let expect = [21.0 * g / 8.0, -3.0 * SQ3 / 8.0, -33.0 * g / 8.0, -9.0 * SQ3 / 8.0];
        for (a, b) in t.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{t:?}");
        }
    }

    #[test]
    fn comparison_flags_the_mixed_cubics() {
        let p = ModelParams::classical(0.1).unwrap();
        let (l3, s) = oracle_l3(&p);
        let c = t_coefficients_closed_form(&p, &s, T5Reading::Squared);
        let r = compare_h3(&l3, &c, &p);
        let v: Vec<f64> = r.checks.iter().map(|c| c.value).collect();
        assert!(v[0] < 1e-12 && v[3] < 1e-12);
        assert!(v[1] > 1.0 && v[2] > 0.1);
        assert_eq!(v[4], 0.0);
    }

    #[test]
    fn l5_closed_form_mirrors() {
        let p = ModelParams::from_epsilon(0.1, 1e-3, 1e-3, 0.0).unwrap();
        let l4 = t_coefficients_closed_form(&p, &OriginShift { a: 0.5, b: 0.8 }, T5Reading::Squared);
        let l5 = t_coefficients_closed_form(&p, &OriginShift { a: 0.5, b: -0.8 }, T5Reading::Squared);
        assert_eq!((l4.t1, l4.t3), (l5.t1, l5.t3));
        assert_eq!((l4.t2, l4.t4), (-l5.t2, -l5.t4));
    }
}
