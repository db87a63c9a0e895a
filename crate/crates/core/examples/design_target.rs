//! Second-order targets for a few (settling time, overshoot) pairs.

use sostiae::metrics::{percent_overshoot, settling_time, SETTLING_BAND};
use sostiae::simulate::TimeGrid;
use sostiae::target::make_target;

fn main() -> sostiae::Result<()> {
    println!("{:>5} {:>6} {:>8} {:>8} {:>9} {:>9}", "ts", "po", "zeta", "wn", "PO sim", "Ts sim");
    for (ts, po) in [(2.5, 1.0), (2.5, 5.0), (5.0, 10.0), (5.0, 20.0)] {
        let grid = TimeGrid::spanning(0.001, 5.0 * ts)?;
        let m = make_target(ts, po, &grid)?;
        println!(
            "{ts:>5.2} {po:>6.2} {:>8.4} {:>8.4} {:>9.4} {:>9.4}",
            m.zeta.unwrap(),
            m.wn.unwrap(),
            percent_overshoot(&m.trace, 1.0)?,
            settling_time(&m.trace, 1.0, SETTLING_BAND)?,
        );
    }
    let m = make_target(2.5, 1.0, &TimeGrid::for_settling_time(2.5)?)?;
    println!("\ntarget for ts=2.5, po=1: {}", m.tf.unwrap());
    Ok(())
}
