//! Order-of-agreement measurement by halving a single perturbation.

use crate::error::Result;
use crate::params::ModelParams;

/// Default strength for the larger run.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Discrepancy at zero perturbation above which a formula is wrong outright.
pub const ZEROTH_ORDER_TOL: f64 = 1e-9;
/// Discrepancy below which a formula is taken as exact.
pub const EXACT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Perturbation {
    Epsilon,
    A2,
    W1,
}

impl Perturbation {
    pub const ALL: [Perturbation; 3] = [Perturbation::Epsilon, Perturbation::A2, Perturbation::W1];

    pub fn name(self) -> &'static str {
        match self {
            Perturbation::Epsilon => "epsilon",
            Perturbation::A2 => "A2",
            Perturbation::W1 => "W1",
        }
    }

    /// Parameters with only this perturbation switched on at strength `h`.
    pub fn params(self, mu: f64, h: f64) -> Result<ModelParams> {
        match self {
            Perturbation::Epsilon => ModelParams::from_epsilon(mu, h, 0.0, 0.0),
            Perturbation::A2 => ModelParams::from_epsilon(mu, 0.0, h, 0.0),
            Perturbation::W1 => ModelParams::from_epsilon(mu, 0.0, 0.0, h),
        }
    }
}

/// How a discrepancy scales with the perturbation strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderClass {
    /// Wrong already without perturbation.
    ZerothOrder,
    /// Agrees to rounding at both strengths.
    Exact,
    /// Remainder quadratic in the perturbation (halving ratio near 4).
    SecondOrder,
    /// Remainder with a linear part (halving ratio between 1.2 and 3.5).
    FirstOrder,
    /// Remainder of cubic or higher order.
    HigherOrder,
    Inconclusive,
}

impl OrderClass {
    pub fn label(self) -> &'static str {
        match self {
            OrderClass::ZerothOrder => "zeroth-order",
            OrderClass::Exact => "exact",
            OrderClass::SecondOrder => "second-order",
            OrderClass::FirstOrder => "first-order",
            OrderClass::HigherOrder => "higher-order",
            OrderClass::Inconclusive => "inconclusive",
        }
    }

    /// Whether the formula is wrong at first order or below.
    pub fn is_erratum(self) -> bool {
        matches!(self, OrderClass::ZerothOrder | OrderClass::FirstOrder)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalvingRow {
    pub perturbation: Perturbation,
    pub h: f64,
    pub d_zero: f64,
    pub d_h: f64,
    pub d_half: f64,
    pub ratio: f64,
    pub class: OrderClass,
}

pub fn classify(d_zero: f64, d_h: f64, d_half: f64) -> OrderClass {
    let ratio = d_h / d_half;
    if d_zero > ZEROTH_ORDER_TOL {
        OrderClass::ZerothOrder
    } else if d_h < EXACT_TOL && d_half < EXACT_TOL {
        OrderClass::Exact
    } else if (3.5..=4.5).contains(&ratio) {
        OrderClass::SecondOrder
    } else if (1.2..3.5).contains(&ratio) {
        // a linear component survives in the remainder
        OrderClass::FirstOrder
    } else if ratio > 6.0 {
        OrderClass::HigherOrder
    } else {
        OrderClass::Inconclusive
    }
}

/// Evaluates the discrepancy `f` at zero, `h` and `h/2`.
pub fn halving(
    mu: f64,
    perturbation: Perturbation,
    h: f64,
    f: impl Fn(&ModelParams) -> Result<f64>,
) -> Result<HalvingRow> {
    let d_zero = f(&ModelParams::classical(mu)?)?;
    let d_h = f(&perturbation.params(mu, h)?)?;
    let d_half = f(&perturbation.params(mu, h / 2.0)?)?;
    Ok(HalvingRow {
        perturbation,
        h,
        d_zero,
        d_h,
        d_half,
        ratio: d_h / d_half,
        class: classify(d_zero, d_h, d_half),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert_eq!(classify(1e-3, 1.0, 1.0), OrderClass::ZerothOrder);
        assert_eq!(classify(0.0, 1e-15, 0.0), OrderClass::Exact);
        assert_eq!(classify(0.0, 4e-6, 1e-6), OrderClass::SecondOrder);
        assert_eq!(classify(0.0, 2e-3, 1e-3), OrderClass::FirstOrder);
        assert_eq!(classify(0.0, 8e-9, 1e-9), OrderClass::HigherOrder);
        assert_eq!(classify(0.0, 3e-6, 1e-6), OrderClass::FirstOrder);
        assert_eq!(classify(0.0, 5e-6, 1e-6), OrderClass::Inconclusive);
        assert_eq!(classify(0.0, 1e-6, 1e-6), OrderClass::Inconclusive);
    }

    #[test]
    fn quadratic_model_halves_by_four() {
        let row = halving(0.01, Perturbation::A2, 1e-3, |p| Ok(p.a2() * p.a2())).unwrap();
        assert!((row.ratio - 4.0).abs() < 1e-12);
        assert_eq!(row.class, OrderClass::SecondOrder);
        let row = halving(0.01, Perturbation::Epsilon, 1e-3, |p| Ok(p.epsilon().abs())).unwrap();
        assert_eq!(row.class, OrderClass::FirstOrder);
    }
}
