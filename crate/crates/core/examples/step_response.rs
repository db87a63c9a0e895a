//! Closed-loop step response of a PID loop around 1/(s+1)^3.

use sostiae::lti::{closed_loop, PidGains, TransferFunction};
use sostiae::metrics::evaluate_closed_loop;
use sostiae::simulate::TimeGrid;

fn main() -> sostiae::Result<()> {
    let plant = TransferFunction::lag_chain(3);
    let gains = PidGains::new(2.1751, 0.8474, 1.3958)?;
    let t = closed_loop(&plant, &gains)?;
    println!("T(s) = ({}) / ({})", t.num(), t.den());

    let grid = TimeGrid::spanning(0.01, 12.5)?;
    let (m, y) = evaluate_closed_loop(&t, &grid)?;
    for (t, v) in y.iter().step_by(100) {
        println!("{t:6.2}  {v:.6}");
    }
    println!("settling {:.4} s, overshoot {:.4} %, IAE {:.4}", m.settling_time, m.overshoot_pct, m.iae_unit_step);
    Ok(())
}
