use sostiae::lti::{closed_loop, is_stable, TransferFunction};
use sostiae::metrics::evaluate_gains;
use sostiae::optimizer::OptimOptions;
use sostiae::target::TargetSpec;
use sostiae::tuner::tune;

fn default_spec() -> TargetSpec {
    TargetSpec::second_order(2.5, 1.0).unwrap()
}

#[test]
fn second_order_plant_meets_published_performance() {
    let r = tune(&TransferFunction::lag_chain(2), &default_spec(), &OptimOptions::default(), None).unwrap();
    assert!(r.successful());
    assert!(r.metrics.iae_unit_step <= 1.05 * 0.8803, "{:?}", r.metrics);
    assert!(r.metrics.overshoot_pct <= 3.2);
}

#[test]
fn report_is_recomputable_from_its_gains() {
    let plant = TransferFunction::lag_chain(3);
    let r = tune(&plant, &default_spec(), &OptimOptions::default(), None).unwrap();
    let again = evaluate_gains(&plant, &r.gains, &r.grid).unwrap();
    assert_eq!(again, r.metrics);
    let verdict = is_stable(&closed_loop(&plant, &r.gains).unwrap()).unwrap();
    assert_eq!(verdict, r.stability);
    assert_eq!(r.optimizer.gains, r.gains);
}

#[test]
fn capped_gains_cannot_stabilize_unstable_plant() {
    let plant = TransferFunction::from_coeffs(&[1.0], &[1.0, -1.0]).unwrap();
    let opts = OptimOptions::default().with_caps(Some(0.1), Some(0.1), Some(0.0));
    let r = tune(&plant, &default_spec(), &opts, None).unwrap();
    assert!(!r.successful());
    assert!(!r.stability.stable);
    assert!(r.gains.kp <= 0.1 && r.gains.ki <= 0.1 && r.gains.kd == 0.0);
}

#[test]
fn trajectory_spec_tunes_like_second_order_spec() {
    let plant = TransferFunction::lag_chain(2);
    let spec = default_spec();
    let grid = spec.default_grid(0.01, 5.0).unwrap();
    let traj = TargetSpec::Trajectory {
        raw_t: grid.times().collect(),
        raw_y: spec.build(&grid).unwrap().trace.y,
    };
    let a = tune(&plant, &spec, &OptimOptions::default(), None).unwrap();
    let b = tune(&plant, &traj, &OptimOptions::default(), None).unwrap();
    assert_eq!(a.grid, b.grid);
    assert!((a.optimizer.objective - b.optimizer.objective).abs() < 1e-6);
}
