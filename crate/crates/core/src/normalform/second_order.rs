//! Second-order forcing and its harmonic-by-harmonic solution.

use super::first_order::linear_operator;
use crate::dalembert::{invert_delta, DAlembertSeries, FrequencyPair};
use crate::error::{Error, Result};
use crate::poly::{TruncatedPoly, Var};
use crate::taylor::QuadraticCoefficients;

/// Amplitude above which a critical harmonic in the forcing is an error.
pub const CRITICAL_AMPLITUDE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderSolution {
    pub b2x: DAlembertSeries,
    pub b2y: DAlembertSeries,
    /// Coefficient-wise residual of the coupled linear system.
    pub residual: f64,
    /// Largest forcing coefficient, the scale for `residual`.
    pub scale: f64,
}

/// Right sides `∂L3/∂ξ − D(∂L3/∂ξ̇)` and the `η` analogue on `B1`.
pub fn forcing_x2y2(
    l3: &TruncatedPoly,
    b1x: &DAlembertSeries,
    b1y: &DAlembertSeries,
    w: &FrequencyPair,
) -> (DAlembertSeries, DAlembertSeries) {
    let (vx, vy) = (b1x.apply_d(w), b1y.apply_d(w));
    let with = [b1x, b1y, &vx, &vy];
    let side = |q: Var, v: Var| {
        let pos = DAlembertSeries::from_poly(&l3.derivative(q), with, 2);
        let vel = DAlembertSeries::from_poly(&l3.derivative(v), with, 2);
        (&pos - &vel.apply_d(w)).normalize()
    };
    (side(Var::Xi, Var::XiDot), side(Var::Eta, Var::EtaDot))
}

fn strip_critical(s: &DAlembertSeries) -> Result<DAlembertSeries> {
    let mut out = DAlembertSeries::zero();
    for (&(j, m, p, q), &(c, sn)) in s.terms() {
        if matches!((p, q), (1, 0) | (0, 1) | (0, -1)) {
            let amplitude = c.abs().max(sn.abs());
            if amplitude > CRITICAL_AMPLITUDE {
                return Err(Error::CriticalTerm { p, q, amplitude });
            }
            continue;
        }
        out.add_term(j, m, p, q, c, sn);
    }
    Ok(out)
}

/// `Φ2 = (D² + 2F − n²)X2 + (2nD − G)Y2`, `Ψ2 = (2nD + G)X2 − (D² + 2E − n²)Y2`.
pub fn phi_psi(
    x2: &DAlembertSeries,
    y2: &DAlembertSeries,
    efg: &QuadraticCoefficients,
    n: f64,
    w: &FrequencyPair,
) -> (DAlembertSeries, DAlembertSeries) {
    let n2 = n * n;
    let (dx, dy) = (x2.apply_d(w), y2.apply_d(w));
    let (ddx, ddy) = (dx.apply_d(w), dy.apply_d(w));
    let phi = &(&(&ddx + &x2.scale(2.0 * efg.f - n2)) + &dy.scale(2.0 * n)) - &y2.scale(efg.g);
    let psi = &(&(&dx.scale(2.0 * n) + &x2.scale(efg.g)) - &ddy) - &y2.scale(2.0 * efg.e - n2);
    (phi, psi)
}

/// Solves `Δ1Δ2 B2^{1,0} = Φ2`, `Δ1Δ2 B2^{0,1} = −Ψ2`.
pub fn solve_second_order_oracle(
    efg: &QuadraticCoefficients,
    n: f64,
    w: &FrequencyPair,
    x2: &DAlembertSeries,
    y2: &DAlembertSeries,
) -> Result<SecondOrderSolution> {
    let x2 = strip_critical(x2)?;
    let y2 = strip_critical(y2)?;
    let (phi, psi) = phi_psi(&x2, &y2, efg, n, w);
    let b2x = invert_delta(&phi, w)?.normalize();
    let b2y = invert_delta(&psi.scale(-1.0), w)?.normalize();
    let (lx, ly) = linear_operator(&b2x, &b2y, efg, n, w);
    let residual = (&lx - &x2).max_abs().max((&ly - &y2).max_abs());
    let scale = x2.max_abs().max(y2.max_abs());
    Ok(SecondOrderSolution {
        b2x,
        b2y,
        residual,
        scale,
    })
}

/// Residual of `(B2^{1,0}, B2^{0,1})` against the coupled system written
/// with gyroscopic coefficient `gyro` in place of `2n`.
#[allow(clippy::too_many_arguments)]
pub fn residual_with_gyro(
    b2x: &DAlembertSeries,
    b2y: &DAlembertSeries,
    x2: &DAlembertSeries,
    y2: &DAlembertSeries,
    efg: &QuadraticCoefficients,
    n: f64,
    gyro: f64,
    w: &FrequencyPair,
) -> f64 {
    let n2 = n * n;
    let (dx, dy) = (b2x.apply_d(w), b2y.apply_d(w));
    let (ddx, ddy) = (dx.apply_d(w), dy.apply_d(w));
    let lx = &(&(&ddx - &dy.scale(gyro)) + &b2x.scale(2.0 * efg.e - n2)) + &b2y.scale(efg.g);
    let ly = &(&(&ddy + &dx.scale(gyro)) + &b2y.scale(2.0 * efg.f - n2)) + &b2x.scale(efg.g);
    (&lx - x2).max_abs().max((&ly - y2).max_abs())
}
