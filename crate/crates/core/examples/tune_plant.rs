//! Tunes PID gains for 1/(s+1)^n, n given on the command line (default 1..=3).

use sostiae::lti::TransferFunction;
use sostiae::optimizer::OptimOptions;
use sostiae::target::TargetSpec;
use sostiae::tuner::tune;

fn main() -> sostiae::Result<()> {
    let orders: Vec<usize> = match std::env::args().nth(1) {
        Some(n) => vec![n.parse().expect("order must be a positive integer")],
        None => vec![1, 2, 3],
    };
    let spec = TargetSpec::second_order(2.5, 1.0)?;
    for n in orders {
        let r = tune(&TransferFunction::lag_chain(n), &spec, &OptimOptions::default(), None)?;
        let g = r.gains;
        println!(
            "n={n}  kp={:.4} ki={:.4} kd={:.4}  Ts={:.4} PO={:.4} IAE={:.4}  stable={}  ({} evals)",
            g.kp,
            g.ki,
            g.kd,
            r.metrics.settling_time,
            r.metrics.overshoot_pct,
            r.metrics.iae_unit_step,
            r.successful(),
            r.optimizer.evals,
        );
    }
    Ok(())
}
