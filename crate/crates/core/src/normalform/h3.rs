//! Third-order terms of the energy on the second-order solution.
//!
//! The energy `Σ ẋ ∂L/∂ẋ − L` is conserved along the flow, so evaluated on
//! `x = B1 + B2`, `ẋ = D(B1 + B2)` its degree-3 slice must be angle-free.
//! Parity forbids an angle-free harmonic at odd degree, so the coefficient
//! of every `I1^{j/2} I2^{m/2}` with `j + m = 3` has to vanish outright.

use crate::dalembert::{DAlembertSeries, FrequencyPair};
use crate::poly::TruncatedPoly;

/// Action-power pairs `(j, m)` of the four coefficients.
pub const H3_POWERS: [(u32, u32); 4] = [(3, 0), (2, 1), (1, 2), (0, 3)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3NormalCoefficients {
    pub a30: f64,
    pub a21: f64,
    pub a12: f64,
    pub a03: f64,
    /// Largest intermediate coefficient entering the cancellation.
    pub scale: f64,
}

impl H3NormalCoefficients {
    pub fn as_array(&self) -> [f64; 4] {
        [self.a30, self.a21, self.a12, self.a03]
    }

    pub fn max_abs(&self) -> f64 {
        self.as_array().iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub const NAMES: [&'static str; 4] = ["A30", "A21", "A12", "A03"];
}

fn energy_on(e: &TruncatedPoly, x: &DAlembertSeries, y: &DAlembertSeries, w: &FrequencyPair) -> DAlembertSeries {
    let (vx, vy) = (x.apply_d(w), y.apply_d(w));
    DAlembertSeries::from_poly(e, [x, y, &vx, &vy], 3).degree_slice(3)
}

/// Coefficients of the degree-3 energy on `B1 + B2`.
///
/// `energy` holds the quadratic and cubic parts of the energy function in
/// the shifted variables; higher slices are ignored.
pub fn h3_normal_coefficients(
    energy: &TruncatedPoly,
    b1: (&DAlembertSeries, &DAlembertSeries),
    b2: (&DAlembertSeries, &DAlembertSeries),
    w: &FrequencyPair,
) -> H3NormalCoefficients {
    let e2 = energy.slice(2);
    let e3 = energy.slice(3);
    let x = b1.0 + b2.0;
    let y = b1.1 + b2.1;
    let quad = energy_on(&e2, &x, &y, w);
    let cubic = energy_on(&e3, b1.0, b1.1, w);
    let total = (&quad + &cubic).normalize();
    let a = H3_POWERS.map(|(j, m)| total.amplitude(j, m));
    H3NormalCoefficients {
        a30: a[0],
        a21: a[1],
        a12: a[2],
        a03: a[3],
        scale: quad.max_abs().max(cubic.max_abs()),
    }
}
