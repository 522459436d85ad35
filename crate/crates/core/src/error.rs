use thiserror::Error;

/// Failures raised by the evaluators, named after the condition that tripped them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("theta series did not converge for nome p = {p}")]
    NonConvergent { p: f64 },

    #[error("denominator vanishes: {context} (|value| = {value:e})")]
    SingularDenominator { context: String, value: f64 },

    #[error("{nu:?} is not a vertical strip over {lam:?}")]
    NotAStrip { lam: Vec<u32>, nu: Vec<u32> },

    #[error("coupling g = {g} violates the genericity gate (defect {defect:e})")]
    GenericityViolation { g: f64, defect: f64 },

    #[error("basis expansion failed to terminate: {0}")]
    NonTerminating(String),

    #[error("eigenvalue tracking ambiguous at p = {p}: {reason}")]
    TrackingAmbiguity { p: f64, reason: String },

    #[error("random operator combination has a repeated eigenvalue after {attempts} attempts")]
    DegenerateCombination { attempts: usize },

    #[error("classical fusion coefficient {value} is not integral (residue {residue:e})")]
    NonIntegral { value: f64, residue: f64 },

    #[error("invalid partition {0:?}")]
    InvalidPartition(Vec<i64>),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),
}

impl Error {
    /// Short variant name, reported on stderr by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonConvergent { .. } => "NonConvergent",
            Error::SingularDenominator { .. } => "SingularDenominator",
            Error::NotAStrip { .. } => "NotAStrip",
            Error::GenericityViolation { .. } => "GenericityViolation",
            Error::NonTerminating(_) => "NonTerminating",
            Error::TrackingAmbiguity { .. } => "TrackingAmbiguity",
            Error::DegenerateCombination { .. } => "DegenerateCombination",
            Error::NonIntegral { .. } => "NonIntegral",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::InvalidParams(_) => "InvalidParams",
            Error::NonFinite(_) => "NonFinite",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
