//! Basic frequencies from the quadratic part.

use crate::dalembert::FrequencyPair;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::taylor::QuadraticCoefficients;

/// Relative gap below which the two frequencies are reported as near-equal.
pub const NEAR_EQUAL_WARN: f64 = 1e-3;

/// `(B, c0)` of the characteristic polynomial `ω⁴ − Bω² + c0`.
pub fn characteristic(p: &ModelParams, efg: &QuadraticCoefficients) -> (f64, f64) {
    let n2 = p.n() * p.n();
    let b = 2.0 * efg.e + 2.0 * efg.f + 2.0 * n2;
    let c0 = (2.0 * efg.e - n2) * (2.0 * efg.f - n2) - efg.g * efg.g;
    (b, c0)
}

fn layout(b: f64, c0: f64) -> String {
    let disc = b * b - 4.0 * c0;
    if disc < 0.0 {
        format!("complex quartet (B = {b}, c0 = {c0}, discriminant {disc:e})")
    } else {
        let r1 = (b + disc.sqrt()) / 2.0;
        let r2 = (b - disc.sqrt()) / 2.0;
        format!("lambda^2 in {{{}, {}}} (B = {b}, c0 = {c0})", -r1, -r2)
    }
}

/// Positive frequencies `ω1 > ω2` of the linearized Euler–Lagrange system.
pub fn frequencies(p: &ModelParams, efg: &QuadraticCoefficients) -> Result<FrequencyPair> {
    let (b, c0) = characteristic(p, efg);
    let disc = b * b - 4.0 * c0;
    if !(disc > 0.0 && c0 > 0.0 && b > 0.0) {
        return Err(Error::StabilityDomain {
            layout: layout(b, c0),
        });
    }
    let s = disc.sqrt();
    let big = (b + s) / 2.0;
    // c0 / big avoids cancellation in the smaller root
    let small = c0 / big;
    let (w1, w2) = (big.sqrt(), small.sqrt());
    if w1 - w2 < NEAR_EQUAL_WARN * w1 {
        log::warn!("near-equal frequencies w1 = {w1}, w2 = {w2}");
    }
    FrequencyPair::new(w1, w2).map_err(|_| Error::StabilityDomain {
        layout: format!("equal frequencies w1 = w2 = {w1}"),
    })
}

/// Classical critical mass ratio, the smaller root of `1 − 27μ(1−μ) = 0`.
pub fn critical_mass() -> f64 {
    (1.0 - (23.0f64 / 27.0).sqrt()) / 2.0
}
