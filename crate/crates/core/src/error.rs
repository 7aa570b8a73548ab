use thiserror::Error;

/// Primary body selector used in collision diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primary {
    /// The radiating, more massive primary at (−μ, 0).
    Larger,
    /// The oblate, smaller primary at (1 − μ, 0).
    Smaller,
}

impl std::fmt::Display for Primary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Primary::Larger => f.write_str("larger primary (r1)"),
            Primary::Smaller => f.write_str("smaller primary (r2)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("collision with the {primary}: distance {distance:e} below guard radius")]
    Collision { primary: Primary, distance: f64 },

    #[error("state lies on the branch cut of the drag angle (y = 0, x + mu < 0)")]
    ArctanBranch,

    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    #[error("Newton iteration did not converge after {iterations} steps (last iterate ({x}, {y}), residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        x: f64,
        y: f64,
        residual: f64,
    },

    #[error("singular Jacobian (determinant {determinant:e})")]
    SingularJacobian { determinant: f64 },

    #[error("linearized system is not of center-center type: {layout}")]
    StabilityDomain { layout: String },

    #[error("small divisor {name} = {value:e} below floor")]
    SmallDivisor { name: String, value: f64 },

    #[error("critical harmonic ({p}, {q}) present with amplitude {amplitude:e}")]
    CriticalTerm { p: i32, q: i32, amplitude: f64 },

    #[error("Moser non-resonance condition fails: |{k1}*w1 + {k2}*w2| = {value:e}")]
    Resonance { k1: i32, k2: i32, value: f64 },

    #[error("symplectic normalization failed: {0}")]
    SymplecticFailure(String),

    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI exit-code contract.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::Collision { .. } => "Collision",
            Error::ArctanBranch => "ArctanBranch",
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::SingularJacobian { .. } => "SingularJacobian",
            Error::StabilityDomain { .. } => "StabilityDomain",
            Error::SmallDivisor { .. } => "SmallDivisor",
            Error::CriticalTerm { .. } => "CriticalTerm",
            Error::Resonance { .. } => "SmallDivisor/Moser",
            Error::SymplecticFailure(_) => "SymplecticFailure",
            Error::Contract(_) => "Contract",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
