//! Physical and derived parameters of the generalized photogravitational
//! restricted problem.

use crate::error::{Error, Result};

/// Perturbation strength above which the first-order series are no longer
/// trusted; construction only warns.
pub const SMALL_PARAMETER_WARN: f64 = 0.1;

/// Mass ratio, radiation, oblateness and drag parameters together with the
/// quantities derived from them.
///
/// Values are immutable after construction. `w1` is normally derived from
/// `cd` as `(1 − μ)(1 − q1)/cd`; [`ModelParams::with_drag_strength`] sets it
/// directly so that drag can be varied independently of `q1` in
/// perturbation-order studies (in that case `cd` is `None`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    mu: f64,
    q1: f64,
    a2: f64,
    cd: Option<f64>,
    w1: f64,
    n: f64,
    gamma: f64,
    delta: f64,
}

impl ModelParams {
    /// Builds parameters from the drag normalization constant `cd`.
    pub fn new(mu: f64, q1: f64, a2: f64, cd: f64) -> Result<Self> {
        if !(cd.is_finite() && cd > 0.0) {
            return Err(Error::InvalidParameter {
                name: "cd",
                value: cd,
                reason: "must be finite and > 0",
            });
        }
        validate_core(mu, q1, a2)?;
        let w1 = (1.0 - mu) * (1.0 - q1) / cd;
        Ok(Self::assemble(mu, q1, a2, Some(cd), w1))
    }

    /// Builds parameters with an explicit drag strength `w1`.
    pub fn with_drag_strength(mu: f64, q1: f64, a2: f64, w1: f64) -> Result<Self> {
        if !(w1.is_finite() && w1 >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "w1",
                value: w1,
                reason: "must be finite and >= 0",
            });
        }
        validate_core(mu, q1, a2)?;
        Ok(Self::assemble(mu, q1, a2, None, w1))
    }

    /// Classical problem: no radiation, no oblateness, no drag.
    pub fn classical(mu: f64) -> Result<Self> {
        Self::with_drag_strength(mu, 1.0, 0.0, 0.0)
    }

    /// Builds parameters with `q1 = 1 − epsilon`.
    pub fn from_epsilon(mu: f64, epsilon: f64, a2: f64, w1: f64) -> Result<Self> {
        Self::with_drag_strength(mu, 1.0 - epsilon, a2, w1)
    }

    /// Mass reduction factor from particle properties in CGS units:
    /// `q = 1 − 5.6e−5 χ / (a ρ)` with efficiency `chi`, radius `radius_cm`
    /// and density `density_cgs`.
    pub fn mass_reduction_factor(chi: f64, radius_cm: f64, density_cgs: f64) -> Result<f64> {
        if !(radius_cm > 0.0 && density_cgs > 0.0) {
            return Err(Error::InvalidParameter {
                name: "radius*density",
                value: radius_cm * density_cgs,
                reason: "particle radius and density must be > 0",
            });
        }
        Ok(1.0 - 5.6e-5 * chi / (radius_cm * density_cgs))
    }

    /// Builds parameters from particle properties (see
    /// [`ModelParams::mass_reduction_factor`]).
    pub fn from_particle(
        mu: f64,
        chi: f64,
        radius_cm: f64,
        density_cgs: f64,
        a2: f64,
        cd: f64,
    ) -> Result<Self> {
        let q1 = Self::mass_reduction_factor(chi, radius_cm, density_cgs)?;
        Self::new(mu, q1, a2, cd)
    }

    /// Skips range validation. Only for limit studies of the printed series
    /// (for example `mu = 0`); physical operations may misbehave.
    #[doc(hidden)]
    pub fn unvalidated(mu: f64, q1: f64, a2: f64, w1: f64) -> Self {
        Self::assemble(mu, q1, a2, None, w1)
    }

    fn assemble(mu: f64, q1: f64, a2: f64, cd: Option<f64>, w1: f64) -> Self {
        let p = Self {
            mu,
            q1,
            a2,
            cd,
            w1,
            n: (1.0 + 1.5 * a2).sqrt(),
            gamma: 1.0 - 2.0 * mu,
            delta: q1.cbrt(),
        };
        for (name, value) in [("epsilon", p.epsilon()), ("A2", a2), ("W1", w1)] {
            if value.abs() > SMALL_PARAMETER_WARN {
                log::warn!("{name} = {value} exceeds {SMALL_PARAMETER_WARN}; first-order series are unreliable");
            }
        }
        p
    }

    /// Same parameters with a different drag strength.
    pub fn with_w1(&self, w1: f64) -> Result<Self> {
        Self::with_drag_strength(self.mu, self.q1, self.a2, w1)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn q1(&self) -> f64 {
        self.q1
    }
    pub fn epsilon(&self) -> f64 {
        1.0 - self.q1
    }
    pub fn a2(&self) -> f64 {
        self.a2
    }
    pub fn cd(&self) -> Option<f64> {
        self.cd
    }
    pub fn w1(&self) -> f64 {
        self.w1
    }
    /// Mean motion, `n² = 1 + 3A2/2`.
    pub fn n(&self) -> f64 {
        self.n
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    /// `q1^(1/3)`.
    pub fn delta(&self) -> f64 {
        self.delta
    }
    /// `n·W1`, the combination every series is written in.
    pub fn n_w1(&self) -> f64 {
        self.n * self.w1
    }

    /// Largest of the three perturbation strengths.
    pub fn perturbation_size(&self) -> f64 {
        self.epsilon().abs().max(self.a2.abs()).max(self.w1.abs())
    }

    /// Which perturbations are active, in the order (ε, A2, W1).
    pub fn active_perturbations(&self) -> [bool; 3] {
        [self.epsilon() != 0.0, self.a2 != 0.0, self.w1 != 0.0]
    }

    /// Warnings for perturbations beyond [`SMALL_PARAMETER_WARN`].
    pub fn warnings(&self) -> Vec<String> {
        [("epsilon", self.epsilon()), ("A2", self.a2), ("W1", self.w1)]
            .into_iter()
            .filter(|(_, v)| v.abs() > SMALL_PARAMETER_WARN)
            .map(|(k, v)| format!("{k} = {v} exceeds {SMALL_PARAMETER_WARN}"))
            .collect()
    }
}

fn validate_core(mu: f64, q1: f64, a2: f64) -> Result<()> {
    if !(mu.is_finite() && mu > 0.0 && mu <= 0.5) {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: mu,
            reason: "mass ratio must satisfy 0 < mu <= 1/2",
        });
    }
    if !(q1.is_finite() && q1 > 0.0 && q1 <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "q1",
            value: q1,
            reason: "mass reduction factor must satisfy 0 < q1 <= 1",
        });
    }
    if !(a2.is_finite() && a2 >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "A2",
            value: a2,
            reason: "oblateness coefficient must be finite and >= 0",
        });
    }
    Ok(())
}
