//! Reference step responses: a canonical second-order model built from a
//! settling time and percent overshoot, or a user-supplied trajectory.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lti::{Polynomial, TransferFunction};
use crate::simulate::{resample, step_response, ResponseTrace, TimeGrid};

/// What the closed loop should look like.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetSpec {
    /// Canonical second order from a 2% settling time (s) and percent overshoot.
    SecondOrder { ts: f64, po: f64 },
    /// Sampled trajectory, linearly interpolated onto the simulation grid.
    Trajectory { raw_t: Vec<f64>, raw_y: Vec<f64> },
}

impl TargetSpec {
    pub fn second_order(ts: f64, po: f64) -> Result<Self> {
        let spec = TargetSpec::SecondOrder { ts, po };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TargetSpec::SecondOrder { ts, po } => {
                if !(ts.is_finite() && ts > 0.0) {
                    return Err(Error::Domain(format!(
                        "settling time must be positive and finite, got {ts}"
                    )));
                }
                check_overshoot(po)
            }
            TargetSpec::Trajectory { ref raw_t, ref raw_y } => {
                if raw_t.len() != raw_y.len() || raw_t.len() < 2 {
                    return Err(Error::Coverage(
                        "trajectory needs at least two (t, y) samples".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Simulation grid used when the caller does not supply one: `0:dt:mult*ts`
    /// for a second-order spec, the trajectory's own span otherwise.
    pub fn default_grid(&self, dt: f64, horizon_mult: f64) -> Result<TimeGrid> {
        match self {
            TargetSpec::SecondOrder { ts, .. } => TimeGrid::spanning(dt, horizon_mult * ts),
            TargetSpec::Trajectory { raw_t, .. } => {
                let last = *raw_t.last().ok_or_else(|| Error::Coverage("empty trajectory".into()))?;
                TimeGrid::spanning(dt, last)
            }
        }
    }

    pub fn build(&self, grid: &TimeGrid) -> Result<TargetModel> {
        match *self {
            TargetSpec::SecondOrder { ts, po } => make_target(ts, po, grid),
            TargetSpec::Trajectory { ref raw_t, ref raw_y } => {
                make_target_from_trajectory(raw_t, raw_y, grid)
            }
        }
    }
}

/// Reference trace plus, for the second-order path, its model parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetModel {
    pub zeta: Option<f64>,
    pub wn: Option<f64>,
    pub tf: Option<TransferFunction>,
    pub trace: ResponseTrace,
}

fn check_overshoot(po: f64) -> Result<()> {
    if !(po > 0.0 && po < 100.0) {
        return Err(Error::Domain(format!(
            "percent overshoot must lie in the open interval (0, 100), got {po}; \
             use a small value such as 0.01 for a near-zero overshoot target"
        )));
    }
    Ok(())
}

/// Damping ratio giving a peak overshoot of `po` percent.
pub fn damping_ratio(po: f64) -> Result<f64> {
    check_overshoot(po)?;
    let l = (po / 100.0).ln();
    Ok(-l / (PI * PI + l * l).sqrt())
}

/// `4 / (zeta * ts)`, the 2%-band settling approximation.
pub fn natural_frequency(zeta: f64, ts: f64) -> Result<f64> {
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::Domain(format!("damping ratio must be positive, got {zeta}")));
    }
    if !(ts.is_finite() && ts > 0.0) {
        return Err(Error::Domain(format!("settling time must be positive, got {ts}")));
    }
    Ok(4.0 / (zeta * ts))
}

/// `wn^2 / (s^2 + 2 zeta wn s + wn^2)` and its step response on `grid`.
pub fn make_target(ts: f64, po: f64, grid: &TimeGrid) -> Result<TargetModel> {
    let zeta = damping_ratio(po)?;
    let wn = natural_frequency(zeta, ts)?;
    let wn2 = wn * wn;
    // 2 zeta wn reduces to 8 / ts identically
    let den = Polynomial::new(vec![1.0, 8.0 / ts, wn2]);
    let tf = TransferFunction::new(Polynomial::constant(wn2), den)?;
    let trace = step_response(&tf, grid)?;
    Ok(TargetModel { zeta: Some(zeta), wn: Some(wn), tf: Some(tf), trace })
}

pub fn make_target_from_trajectory(
    raw_t: &[f64],
    raw_y: &[f64],
    grid: &TimeGrid,
) -> Result<TargetModel> {
    let trace = resample(raw_t, raw_y, grid)?;
    Ok(TargetModel { zeta: None, wn: None, tf: None, trace })
}
