//! Closed-loop poles and stability verdicts.

use sostiae::lti::{closed_loop, is_stable, PidGains, TransferFunction};

fn main() -> sostiae::Result<()> {
    let unstable_plant = TransferFunction::from_coeffs(&[1.0], &[1.0, -1.0])?;
    let cases = [
        ("1/(s+1)^3, tuned PID", TransferFunction::lag_chain(3), PidGains::new(2.8653, 1.1718, 2.6221)?),
        ("1/(s+1)^3, high gain PI", TransferFunction::lag_chain(3), PidGains::pi(8.0, 4.0)?),
        ("1/(s-1), weak P", unstable_plant.clone(), PidGains::new(0.5, 0.0, 0.0)?),
        ("1/(s-1), strong PI", unstable_plant, PidGains::pi(4.0, 2.0)?),
    ];
    for (name, plant, g) in cases {
        let v = is_stable(&closed_loop(&plant, &g)?)?;
        let poles: Vec<String> = v.poles.iter().map(|p| format!("{:.4}{:+.4}i", p.re, p.im)).collect();
        println!("{name:<26} stable={:<5} poles: {}", v.stable, poles.join(", "));
    }
    Ok(())
}
