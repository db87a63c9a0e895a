//! The three-phase tuning pipeline: build the target, fit the gains, verify.

use crate::error::Result;
use crate::lti::{closed_loop, is_stable, PidGains, StabilityVerdict, TransferFunction};
use crate::metrics::{evaluate_closed_loop, iae, MetricsReport, Reference};
use crate::optimizer::{minimize, OptimOptions, OptimResult, SostiaeObjective};
use crate::simulate::{TimeGrid, DEFAULT_DT, DEFAULT_HORIZON_MULT};
use crate::target::{TargetModel, TargetSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct TuneReport {
    pub plant: TransferFunction,
    pub spec: TargetSpec,
    pub grid: TimeGrid,
    pub gains: PidGains,
    pub target: TargetModel,
    /// Performance against a unit step.
    pub metrics: MetricsReport,
    pub iae_vs_target: f64,
    pub stability: StabilityVerdict,
    pub optimizer: OptimResult,
}

impl TuneReport {
    /// A tuning result is usable only if the closed loop is stable.
    pub fn successful(&self) -> bool {
        self.stability.stable
    }
}

/// Tunes PID gains for `plant` so its closed-loop step response tracks `spec`.
///
/// Without `grid`, the simulation runs on `0:0.01:5*ts` (second-order spec)
/// or over the trajectory's own span. An unstable optimum is returned as an
/// unsuccessful report rather than an error.
pub fn tune(
    plant: &TransferFunction,
    spec: &TargetSpec,
    opts: &OptimOptions,
    grid: Option<TimeGrid>,
) -> Result<TuneReport> {
    spec.validate()?;
    opts.validate()?;
    let grid = match grid {
        Some(g) => g,
        None => spec.default_grid(DEFAULT_DT, DEFAULT_HORIZON_MULT)?,
    };
    let target = spec.build(&grid)?;

    let objective = SostiaeObjective::new(plant, &target.trace, opts.pi_only)?;
    let optimizer = minimize(|g: &PidGains| objective.value(g), opts)?;
    let gains = optimizer.gains;

    let t = closed_loop(plant, &gains)?;
    let stability = is_stable(&t)?;
    let (metrics, y) = evaluate_closed_loop(&t, &grid)?;
    let iae_vs_target = iae(&y, Reference::Trace(&target.trace))?;

    Ok(TuneReport {
        plant: plant.clone(),
        spec: spec.clone(),
        grid,
        gains,
        target,
        metrics,
        iae_vs_target,
        stability,
        optimizer,
    })
}
