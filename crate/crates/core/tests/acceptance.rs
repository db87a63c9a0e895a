//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sostiae::bench::{run_astrom_g3, run_cases, table1_cases, BenchOutcome};
use sostiae::lti::{closed_loop, is_stable, PidGains, TransferFunction};
use sostiae::metrics::{iae_unit_step, percent_overshoot};
use sostiae::optimizer::{minimize, OptimOptions, SostiaeObjective};
use sostiae::simulate::{step_response, TimeGrid};
use sostiae::target::{make_target, TargetSpec};

struct Verdict {
    pass: bool,
    detail: String,
}

fn within(elapsed: Duration, limit_s: f64) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (s < limit_s, format!("{s:.2}s of {limit_s}s"))
}

fn failing_rows(outcomes: &[BenchOutcome]) -> String {
    let mut parts = Vec::new();
    for o in outcomes.iter().filter(|o| !o.pass) {
        let bad: Vec<String> = o
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}={:.4} want {}", c.field, c.measured, c.expected))
            .collect();
        parts.push(format!("{} [{}]", o.name, bad.join(", ")));
    }
    parts.join("; ")
}

fn published_gain_rows() -> Verdict {
    let start = Instant::now();
    let cases: Vec<_> = table1_cases().into_iter().filter(|c| c.gains.is_some()).collect();
    let outcomes = run_cases(&cases);
    let (fast, time) = within(start.elapsed(), 1.0);
    let ok = outcomes.len() == 6 && outcomes.iter().all(|o| o.pass);
    Verdict {
        pass: ok && fast,
        detail: format!("{}/6 rows, {time} {}", outcomes.iter().filter(|o| o.pass).count(), failing_rows(&outcomes)),
    }
}

fn self_tuning_regression() -> Verdict {
    // tune rows: zero start, 3000-evaluation budget, one-sided IAE and PO bounds
    let start = Instant::now();
    let cases: Vec<_> = table1_cases().into_iter().filter(|c| c.tune.is_some()).collect();
    let outcomes = run_cases(&cases);
    let (fast, time) = within(start.elapsed(), 30.0);
    let notes: Vec<String> = outcomes
        .iter()
        .map(|o| format!("{} IAE {:.4} PO {:.4}", o.name, o.measured.iae, o.measured.po))
        .collect();
    let ok = outcomes.len() == 3 && outcomes.iter().all(|o| o.pass && o.stable);
    Verdict {
        pass: ok && fast,
        detail: format!("{}, {time} {}", notes.join("; "), failing_rows(&outcomes)),
    }
}

fn third_order_pi_benchmark() -> Verdict {
    let start = Instant::now();
    let outcomes = run_astrom_g3();
    let (fast, time) = within(start.elapsed(), 5.0);
    let passed = outcomes.iter().filter(|o| o.pass).count();
    Verdict {
        pass: passed == 5 && outcomes.len() == 5 && fast,
        detail: format!("{passed}/5 rows, {time}; failing: {}", failing_rows(&outcomes)),
    }
}

fn target_round_trip() -> Verdict {
    let mut worst = 0.0f64;
    let mut exact = true;
    for ts in [2.5, 5.0] {
        for po in [1.0, 5.0, 10.0, 20.0] {
            let m = make_target(ts, po, &TimeGrid::spanning(0.001, 5.0 * ts).unwrap()).unwrap();
            worst = worst.max((percent_overshoot(&m.trace, 1.0).unwrap() - po).abs());
            exact &= m.tf.unwrap().den().coeffs()[1] * ts == 8.0;
        }
    }
    Verdict {
        pass: worst < 0.05 && exact,
        detail: format!("max |PO error| {worst:.2e}pp, den[1]*ts == 8 exactly: {exact}"),
    }
}

fn simulation_exactness() -> Verdict {
    let grid = TimeGrid::spanning(0.01, 12.5).unwrap();
    let y1 = step_response(&TransferFunction::lag_chain(1), &grid).unwrap();
    let e1 = y1.iter().map(|(t, v)| (v - (1.0 - (-t).exp())).abs()).fold(0.0, f64::max);
    let m = make_target(2.5, 1.0, &grid).unwrap();
    let (z, wn) = (m.zeta.unwrap(), m.wn.unwrap());
    let e2 = m.trace.iter().map(|(t, v)| (v - common::second_order_step(z, wn, t)).abs()).fold(0.0, f64::max);
    Verdict {
        pass: e1 < 1e-9 && e2 < 1e-9,
        detail: format!("max error first order {e1:.1e}, target {e2:.1e}"),
    }
}

fn optimizer_oracle() -> Verdict {
    let plant = TransferFunction::lag_chain(1);
    let spec = TargetSpec::second_order(2.5, 1.0).unwrap();
    let target = spec.build(&spec.default_grid(0.01, 5.0).unwrap()).unwrap();
    let obj = SostiaeObjective::new(&plant, &target.trace, true).unwrap();
    let opts = OptimOptions { pi_only: true, ..Default::default() };
    let found = minimize(|g: &PidGains| obj.value(g), &opts).unwrap();

    let start = Instant::now();
    let (best, kp, ki) = common::grid_search_2d(0.0, 5.0, 0.01, |kp, ki| {
        obj.value(&PidGains { kp, ki, kd: 0.0 })
    });
    let (fast, time) = within(start.elapsed(), 60.0);
    let ratio = found.objective / best;
    Verdict {
        pass: ratio <= 1.02 && fast,
        detail: format!(
            "optimizer {:.6} at ({:.4}, {:.4}), oracle {best:.6} at ({kp:.2}, {ki:.2}), ratio {ratio:.4}, oracle {time}",
            found.objective, found.gains.kp, found.gains.ki
        ),
    }
}

fn stability_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut agree, mut compared, mut marginal) = (0, 0, 0);
    for _ in 0..1000 {
        let t = common::random_loop(&mut rng);
        let v = is_stable(&t).unwrap();
        match common::routh_hurwitz(t.den().coeffs()) {
            Some(rh) if !v.marginal => {
                compared += 1;
                agree += usize::from(rh == v.stable);
            }
            _ => marginal += 1,
        }
    }
    Verdict {
        pass: agree == compared,
        detail: format!("{agree}/{compared} agree, {marginal} marginal skipped"),
    }
}

fn ie_identity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let plant = TransferFunction::lag_chain(3);
    let (mut used, mut worst) = (0, 0.0f64);
    for _ in 0..400 {
        let g = PidGains::pi(rng.gen_range(0.0..3.0), rng.gen_range(0.02..1.5)).unwrap();
        let t = closed_loop(&plant, &g).unwrap();
        let v = is_stable(&t).unwrap();
        if !v.stable {
            continue;
        }
        // the identity is for the whole transient: run 15 slowest time constants
        let span = (15.0 / -v.max_real_part).max(60.0);
        let y = step_response(&t, &TimeGrid::spanning(0.01, span).unwrap()).unwrap();
        let e: Vec<f64> = y.y.iter().map(|v| 1.0 - v).collect();
        if !(e.iter().all(|&v| v >= 0.0) || e.iter().all(|&v| v <= 0.0)) {
            continue;
        }
        used += 1;
        worst = worst.max((iae_unit_step(&y) * g.ki - 1.0).abs());
    }
    Verdict {
        pass: used >= 20 && worst < 0.02,
        detail: format!("{used} sign-constant stable loops, max |IAE*ki - 1| {worst:.2e}"),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("1 published gain rows", published_gain_rows),
        ("2 self-tuning regression", self_tuning_regression),
        ("3 third-order PI benchmark", third_order_pi_benchmark),
        ("4 target round trip", target_round_trip),
        ("5 simulation exactness", simulation_exactness),
        ("6 optimizer vs grid oracle", optimizer_oracle),
        ("7 stability vs routh-hurwitz", stability_oracle),
        ("8 IE = 1/ki identity", ie_identity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let v = check();
        failed += usize::from(!v.pass);
        println!("{} criterion {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
