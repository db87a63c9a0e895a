//! Independent reference implementations used only by the tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sostiae::lti::{closed_loop, PidGains, TransferFunction};

/// Random plant of order 1..=3 under random PID gains; the closed loop is
/// strictly proper with order at most 4.
pub fn random_loop(rng: &mut ChaCha8Rng) -> TransferFunction {
    let order = rng.gen_range(1..=3);
    let mut den = vec![1.0];
    den.extend((0..order).map(|_| rng.gen_range(-2.0..6.0)));
    let num_deg = rng.gen_range(0..order);
    let num: Vec<f64> = (0..=num_deg).map(|_| rng.gen_range(0.1..3.0)).collect();
    let plant = TransferFunction::from_coeffs(&num, &den).unwrap();
    let kd = if plant.relative_degree() >= 2 && order < 3 { rng.gen_range(0.0..3.0) } else { 0.0 };
    let g = PidGains::new(rng.gen_range(0.0..5.0), rng.gen_range(0.0..3.0), kd).unwrap();
    closed_loop(&plant, &g).unwrap()
}

/// Routh–Hurwitz test on a characteristic polynomial (descending powers).
///
/// `Some(true)` when every root is in the open left half plane,
/// `Some(false)` when at least one is not, `None` when a zero turns up in the
/// first column (roots on or symmetric about the imaginary axis).
pub fn routh_hurwitz(coeffs: &[f64]) -> Option<bool> {
    let c: Vec<f64> = coeffs.iter().copied().skip_while(|&x| x == 0.0).collect();
    let n = c.len() - 1;
    if n == 0 {
        return Some(true);
    }
    let width = n / 2 + 1;
    let mut rows: Vec<Vec<f64>> = vec![vec![0.0; width], vec![0.0; width]];
    for (i, &v) in c.iter().enumerate() {
        rows[i % 2][i / 2] = v;
    }
    for r in 2..=n {
        let (a, b) = (&rows[r - 2], &rows[r - 1]);
        if b[0] == 0.0 {
            return None;
        }
        let mut next = vec![0.0; width];
        for j in 0..width - 1 {
            next[j] = (b[0] * a[j + 1] - a[0] * b[j + 1]) / b[0];
        }
        rows.push(next);
    }
    let first: Vec<f64> = rows.iter().take(n + 1).map(|r| r[0]).collect();
    let scale = first.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if first.iter().any(|v| v.abs() <= 1e-12 * scale) {
        return None;
    }
    let sign = first[0].signum();
    Some(first.iter().all(|v| v.signum() == sign))
}

/// Step response of `num/den` via an observable-canonical realization
/// integrated with adaptive Dormand–Prince 5(4), reported at `times`.
pub fn rk45_step_response(num: &[f64], den: &[f64], times: &[f64], rtol: f64) -> Vec<f64> {
    let lead = den[0];
    let a: Vec<f64> = den.iter().map(|v| v / lead).collect();
    let n = a.len() - 1;
    let mut b = vec![0.0; n + 1];
    let off = n + 1 - num.len();
    for (i, v) in num.iter().enumerate() {
        b[off + i] = v / lead;
    }
    // y = b0 u + x_1 ;  x_i' = x_{i+1} - a_i y... written for strictly proper part
    let d = b[0];
    let bp: Vec<f64> = (1..=n).map(|i| b[i] - a[i] * d).collect();
    let f = |x: &[f64]| -> Vec<f64> {
        let y = x[0];
        (0..n)
            .map(|i| {
                let next = if i + 1 < n { x[i + 1] } else { 0.0 };
                next - a[i + 1] * y + bp[i]
            })
            .collect()
    };
    let out = |x: &[f64]| if n == 0 { d } else { x[0] + d };

    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0,
    ];

    let mut x = vec![0.0; n];
    let mut t: f64 = 0.0;
    let mut h: f64 = 1e-3;
    let mut ys = Vec::with_capacity(times.len());
    for &target in times {
        while t < target {
            let step = h.min(target - t);
            let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
            for s in 0..7 {
                let xs: Vec<f64> = (0..n)
                    .map(|i| x[i] + step * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>())
                    .collect();
                k.push(f(&xs));
            }
            let x5: Vec<f64> = (0..n).map(|i| x[i] + step * (0..7).map(|s| B5[s] * k[s][i]).sum::<f64>()).collect();
            let x4: Vec<f64> = (0..n).map(|i| x[i] + step * (0..7).map(|s| B4[s] * k[s][i]).sum::<f64>()).collect();
            let err = (0..n)
                .map(|i| (x5[i] - x4[i]).abs() / (1e-14 + rtol * x5[i].abs().max(x[i].abs())))
                .fold(0.0f64, f64::max);
            if err <= 1.0 {
                t += step;
                x = x5;
                if (t - target).abs() < 1e-14 {
                    t = target;
                }
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (step * factor).max(1e-10);
        }
        ys.push(out(&x));
    }
    ys
}

/// Minimum of `f` over the `step`-spaced grid on `[lo, hi]^2`.
pub fn grid_search_2d(lo: f64, hi: f64, step: f64, f: impl Fn(f64, f64) -> f64 + Sync) -> (f64, f64, f64) {
    let n = ((hi - lo) / step).round() as usize + 1;
    let rows: Vec<(f64, f64, f64)> = std::thread::scope(|s| {
        let f = &f;
        let workers = std::thread::available_parallelism().map(|p| p.get()).unwrap_or(4);
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    let mut best = (f64::INFINITY, 0.0, 0.0);
                    for i in (w..n).step_by(workers) {
                        let x = lo + i as f64 * step;
                        for j in 0..n {
                            let y = lo + j as f64 * step;
                            let v = f(x, y);
                            if v < best.0 {
                                best = (v, x, y);
                            }
                        }
                    }
                    best
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    rows.into_iter().fold((f64::INFINITY, 0.0, 0.0), |a, b| if b.0 < a.0 { b } else { a })
}

/// Analytic unit-step response of the underdamped standard second order.
pub fn second_order_step(zeta: f64, wn: f64, t: f64) -> f64 {
    let wd = wn * (1.0 - zeta * zeta).sqrt();
    1.0 - (-zeta * wn * t).exp() * ((wd * t).cos() + zeta / (1.0 - zeta * zeta).sqrt() * (wd * t).sin())
}
