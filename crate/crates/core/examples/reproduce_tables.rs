//! Runs both reproduction suites and prints their tables.

use sostiae::bench::{render_table, run_astrom_g3, run_table1};

fn main() {
    for (title, outcomes) in [("order comparison", run_table1()), ("1/(s+1)^3 PI designs", run_astrom_g3())] {
        let passed = outcomes.iter().filter(|o| o.pass).count();
        println!("== {title}: {passed}/{} pass\n{}", outcomes.len(), render_table(&outcomes));
    }
}
