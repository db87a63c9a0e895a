//! The bounded Nelder-Mead search on its own, with a hand-written objective.

use sostiae::lti::PidGains;
use sostiae::optimizer::{minimize, OptimOptions};

fn main() -> sostiae::Result<()> {
    // Rosenbrock valley in (kp, ki) plus a kd term pulling below zero
    let f = |g: &PidGains| (1.0 - g.kp).powi(2) + 100.0 * (g.ki - g.kp * g.kp).powi(2) + (g.kd + 0.5).powi(2);

    let r = minimize(f, &OptimOptions { keep_history: true, ..Default::default() })?;
    println!("unbounded above: {:?}  f={:.3e}  evals={}", r.gains, r.objective, r.evals);
    println!("history samples: {:?}", r.history.iter().step_by(20).take(6).collect::<Vec<_>>());

    let capped = OptimOptions::default().with_caps(Some(0.5), None, None);
    let r = minimize(f, &capped)?;
    println!("kp <= 0.5:       {:?}  f={:.3e}", r.gains, r.objective);
    Ok(())
}
