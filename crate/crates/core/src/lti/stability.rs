//! Closed-loop stability classification from pole locations.

use num_complex::Complex64;

use super::roots::roots;
use super::tf::TransferFunction;
use crate::error::Result;

/// Real-part magnitude below which the stability call is flagged marginal.
pub const MARGINAL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub poles: Vec<Complex64>,
    /// `-inf` for a system without poles.
    pub max_real_part: f64,
    pub marginal: bool,
}

/// Strict left-half-plane test on the poles of `tf`.
///
/// A constant transfer function is vacuously stable with no poles.
pub fn is_stable(tf: &TransferFunction) -> Result<StabilityVerdict> {
    let poles = if tf.den().degree() == 0 {
        Vec::new()
    } else {
        roots(tf.den())?
    };
    let max_real_part = poles.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityVerdict {
        stable: max_real_part < 0.0,
        marginal: max_real_part.abs() < MARGINAL_TOL,
        max_real_part,
        poles,
    })
}
