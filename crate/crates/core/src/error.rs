use thiserror::Error;

/// Errors raised by the tuning pipeline and its building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("transfer function is improper (numerator degree {num} > denominator degree {den})")]
    Improper { num: usize, den: usize },

    #[error("closed loop is improper: {0}; an unfiltered derivative on a relative-degree-0 plant needs --pi-only")]
    ImproperClosedLoop(String),

    #[error("constant polynomial has no roots")]
    DegreeZero,

    #[error("DC gain is indeterminate (0/0): cancel the common integrator first")]
    IndeterminateGain,

    #[error("{0}")]
    Domain(String),

    #[error("trajectory does not cover the time grid: {0}")]
    Coverage(String),

    #[error("time grids differ ({left} vs {right} points)")]
    GridMismatch { left: usize, right: usize },

    #[error("response never settles inside the {band_pct}% band on the grid")]
    NeverSettles { band_pct: f64 },

    #[error("invalid optimizer options: {0}")]
    InvalidOptions(String),
}

pub type Result<T> = std::result::Result<T, Error>;
