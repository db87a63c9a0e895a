//! Polynomial root finding by simultaneous Aberth–Ehrlich iteration.

use num_complex::Complex64;

use super::poly::Polynomial;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 500;

/// All complex roots of `p`, with multiplicity.
///
/// Exact zero roots (trailing zero coefficients) are split off first; linear
/// and quadratic factors are solved in closed form.
pub fn roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    if !p.is_finite() {
        return Err(Error::NonFinite("polynomial coefficients"));
    }
    let zeros = p.zero_root_multiplicity();
    let c = p.coeffs();
    let lead = c[0];
    let monic: Vec<f64> = c[..c.len() - zeros].iter().map(|x| x / lead).collect();

    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    match monic.len() - 1 {
        0 => {}
        1 => out.push(Complex64::new(-monic[1], 0.0)),
        2 => out.extend(quadratic(monic[1], monic[2])),
        _ => out.extend(aberth(&monic)),
    }
    Ok(out)
}

/// Roots of `s^2 + b s + c` without cancellation in the real case.
fn quadratic(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -0.5 * b;
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn aberth(monic: &[f64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let poly = Polynomial::new(monic.to_vec());
    let dpoly = poly.derivative();

    // starting circle: centred on the root centroid, radius max |a_k|^(1/k)
    let center = -monic[1] / n as f64;
    let radius = (1..=n)
        .map(|k| monic[k].abs().powf(1.0 / k as f64))
        .fold(0.0_f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::new(center, 0.0) + Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut done = vec![false; n];
    for _ in 0..MAX_SWEEPS {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let pz = poly.eval_complex(z[i]);
            if pz == Complex64::new(0.0, 0.0) {
                done[i] = true;
                continue;
            }
            let ratio = pz / dpoly.eval_complex(z[i]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    pair_conjugates(&mut z);
    z
}

/// Snaps near-real roots onto the real axis when they are isolated and
/// averages near-conjugate pairs so the root set is closed under conjugation.
fn pair_conjugates(z: &mut [Complex64]) {
    let n = z.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || z[i].im <= 0.0 {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if j == i || used[j] || z[j].im > 0.0 {
                continue;
            }
            let d = (z[j] - z[i].conj()).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        if let Some((j, d)) = best {
            if d <= 1e-6 * z[i].norm().max(1.0) {
                let avg = 0.5 * (z[i] + z[j].conj());
                z[i] = avg;
                z[j] = avg.conj();
                used[i] = true;
                used[j] = true;
            }
        }
    }
    for (zi, &u) in z.iter_mut().zip(&used) {
        if !u && zi.im.abs() <= 1e-6 * zi.norm().max(1.0) {
            zi.im = 0.0;
        }
    }
}
