//! Tuning against a sampled reference instead of a second-order model.
//!
//! The reference here is an overshoot-free exponential sampled every 0.1 s,
//! standing in for a measured response.

use sostiae::lti::TransferFunction;
use sostiae::optimizer::OptimOptions;
use sostiae::target::TargetSpec;
use sostiae::tuner::tune;

fn main() -> sostiae::Result<()> {
    let raw_t: Vec<f64> = (0..=150).map(|k| k as f64 * 0.1).collect();
    let raw_y: Vec<f64> = raw_t.iter().map(|t| 1.0 - (-t / 1.5).exp()).collect();
    let spec = TargetSpec::Trajectory { raw_t, raw_y };

    let plant = TransferFunction::from_coeffs(&[1.0], &[1.0, 3.0, 3.0, 1.0])?;
    let opts = OptimOptions { pi_only: true, ..Default::default() };
    let r = tune(&plant, &spec, &opts, None)?;
    println!("PI gains kp={:.4} ki={:.4}", r.gains.kp, r.gains.ki);
    println!("IAE against reference {:.4}", r.iae_vs_target);
    println!("overshoot {:.4} %, settling {:.4} s", r.metrics.overshoot_pct, r.metrics.settling_time);
    Ok(())
}
