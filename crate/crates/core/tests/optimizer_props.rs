use proptest::prelude::*;
use sostiae::lti::{PidGains, TransferFunction};
use sostiae::optimizer::{minimize, OptimOptions, SostiaeObjective};
use sostiae::target::TargetSpec;

fn default_objective(plant: TransferFunction, pi_only: bool) -> SostiaeObjective {
    let spec = TargetSpec::second_order(2.5, 1.0).unwrap();
    let target = spec.build(&spec.default_grid(0.01, 5.0).unwrap()).unwrap();
    SostiaeObjective::new(&plant, &target.trace, pi_only).unwrap()
}

#[test]
fn third_order_objective_regression() {
    let o = default_objective(TransferFunction::lag_chain(3), false);
    let v = o.value(&PidGains::new(2.8653, 1.1718, 2.6221).unwrap());
    assert!((v - 0.122_135_172_616).abs() < 1e-6, "{v}");
}

#[test]
fn zero_gains_cost_the_area_under_the_target() {
    let o = default_objective(TransferFunction::lag_chain(2), false);
    let area: f64 = o.target().y.windows(2).map(|w| 0.5 * (w[0] + w[1]) * 0.01).sum();
    assert!((o.value(&PidGains::default()) - area).abs() < 1e-12);
}

#[test]
fn tuning_is_deterministic() {
    let o = default_objective(TransferFunction::lag_chain(2), false);
    let opts = OptimOptions::default();
    let a = minimize(|g: &PidGains| o.value(g), &opts).unwrap();
    let b = minimize(|g: &PidGains| o.value(g), &opts).unwrap();
    assert_eq!(a, b);
}

#[test]
fn first_order_optimum_is_pi() {
    let o = default_objective(TransferFunction::lag_chain(1), false);
    let r = minimize(|g: &PidGains| o.value(g), &OptimOptions::default()).unwrap();
    assert!(r.gains.kd < 1e-3, "{:?}", r.gains);
}

fn shifted_quadratic(c: [f64; 3]) -> impl Fn(&PidGains) -> f64 {
    move |g: &PidGains| {
        let x = g.as_array();
        (0..3).map(|i| (x[i] - c[i]).powi(2) * (i + 1) as f64).sum()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn feasible_descending_and_within_budget(
        c in prop::array::uniform3(-3.0f64..5.0),
        hi in prop::array::uniform3(0.5f64..6.0),
        budget in 10usize..600,
        pi_only in any::<bool>(),
    ) {
        let opts = OptimOptions { max_evals: budget, upper: hi, pi_only, ..Default::default() };
        let f = shifted_quadratic(c);
        let r = minimize(&f, &opts).unwrap();
        let (lo, up) = opts.bounds();
        let x = r.gains.as_array();
        for i in 0..3 {
            prop_assert!(x[i] >= lo[i] && x[i] <= up[i]);
        }
        if pi_only {
            prop_assert_eq!(x[2], 0.0);
        }
        prop_assert!(r.evals <= budget);
        prop_assert!(r.objective <= f(&opts.x0));
        prop_assert_eq!(r.objective, f(&r.gains));
    }

    #[test]
    fn box_optimum_is_found(c in prop::array::uniform3(-3.0f64..5.0)) {
        let r = minimize(shifted_quadratic(c), &OptimOptions::default()).unwrap();
        let x = r.gains.as_array();
        for i in 0..3 {
            prop_assert!((x[i] - c[i].max(0.0)).abs() < 1e-3, "{:?} vs {:?}", x, c);
        }
    }
}
