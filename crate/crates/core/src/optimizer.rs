//! Bound-constrained derivative-free minimization of the target-matching
//! objective over non-negative PID gains.
//!
//! The search is a Nelder–Mead simplex whose trial points are projected onto
//! the gain box, so the objective is never evaluated outside it. A simplex
//! that collapses is rebuilt around the incumbent (a few times at most) to
//! escape the degenerate faces that projection onto the boundary creates.

use crate::error::{Error, Result};
use crate::lti::{closed_loop, PidGains, TransferFunction};
use crate::metrics::{iae, Reference};
use crate::simulate::{step_response, ResponseTrace, OVERFLOW_LIMIT};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const MAX_RESTARTS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimOptions {
    pub max_evals: usize,
    pub x0: PidGains,
    pub lower: [f64; 3],
    pub upper: [f64; 3],
    pub f_tol: f64,
    pub x_tol: f64,
    /// Pins `kd` to zero.
    pub pi_only: bool,
    /// Edge length of the starting simplex.
    pub initial_step: f64,
    /// Record `(evals, best objective)` after every improvement.
    pub keep_history: bool,
}

impl Default for OptimOptions {
    fn default() -> Self {
        OptimOptions {
            max_evals: 3000,
            x0: PidGains::default(),
            lower: [0.0; 3],
            upper: [f64::INFINITY; 3],
            f_tol: 1e-6,
            x_tol: 1e-6,
            pi_only: false,
            initial_step: 0.1,
            keep_history: false,
        }
    }
}

impl OptimOptions {
    pub fn with_caps(mut self, kp_max: Option<f64>, ki_max: Option<f64>, kd_max: Option<f64>) -> Self {
        for (i, cap) in [kp_max, ki_max, kd_max].into_iter().enumerate() {
            if let Some(c) = cap {
                self.upper[i] = c;
            }
        }
        self
    }

    /// Effective bounds after applying `pi_only`.
    pub fn bounds(&self) -> ([f64; 3], [f64; 3]) {
        let mut upper = self.upper;
        if self.pi_only {
            upper[2] = 0.0;
        }
        (self.lower, upper)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_evals == 0 {
            return Err(Error::InvalidOptions("evaluation budget must be at least 1".into()));
        }
        let (lower, upper) = self.bounds();
        let x0 = self.x0.as_array();
        for i in 0..3 {
            if lower[i].is_nan() || upper[i].is_nan() || lower[i] > upper[i] {
                return Err(Error::InvalidOptions(format!("bad bounds [{}, {}]", lower[i], upper[i])));
            }
            if lower[i] < 0.0 {
                return Err(Error::InvalidOptions("gain lower bounds must be non-negative".into()));
            }
            if !(lower[i] <= x0[i] && x0[i] <= upper[i]) {
                return Err(Error::InvalidOptions(format!(
                    "start point {:?} outside bounds",
                    x0
                )));
            }
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::InvalidOptions("initial step must be positive".into()));
        }
        if !(self.f_tol >= 0.0 && self.x_tol >= 0.0) {
            return Err(Error::InvalidOptions("tolerances must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult {
    pub gains: PidGains,
    pub objective: f64,
    pub evals: usize,
    pub converged: bool,
    pub history: Vec<(usize, f64)>,
}

/// Integrated absolute deviation between the closed-loop step response and
/// a target trace, as a function of the PID gains.
#[derive(Debug, Clone)]
pub struct SostiaeObjective {
    plant: TransferFunction,
    target: ResponseTrace,
    penalty: f64,
}

impl SostiaeObjective {
    /// Fails for plants that would make the closed loop improper: an improper
    /// plant, or a biproper one unless the derivative term is disabled.
    pub fn new(plant: &TransferFunction, target: &ResponseTrace, pi_only: bool) -> Result<Self> {
        let rd = plant.relative_degree();
        if rd < 0 {
            return Err(Error::ImproperClosedLoop(format!("plant {plant} is improper")));
        }
        if rd == 0 && !pi_only {
            return Err(Error::ImproperClosedLoop(format!(
                "plant {plant} has relative degree 0"
            )));
        }
        let grid = target.grid;
        Ok(SostiaeObjective {
            plant: plant.clone(),
            target: target.clone(),
            penalty: 2.0 * OVERFLOW_LIMIT * grid.end(),
        })
    }

    pub fn plant(&self) -> &TransferFunction {
        &self.plant
    }

    pub fn target(&self) -> &ResponseTrace {
        &self.target
    }

    pub fn value(&self, g: &PidGains) -> f64 {
        let Ok(t) = closed_loop(&self.plant, g) else {
            return self.penalty;
        };
        match step_response(&t, &self.target.grid) {
            Ok(y) => iae(&y, Reference::Trace(&self.target)).unwrap_or(self.penalty),
            Err(_) => self.penalty,
        }
    }
}

pub fn sostiae_objective(
    plant: &TransferFunction,
    target: &ResponseTrace,
    pi_only: bool,
) -> Result<impl Fn(&PidGains) -> f64> {
    let obj = SostiaeObjective::new(plant, target, pi_only)?;
    Ok(move |g: &PidGains| obj.value(g))
}

fn fold_into(v: f64, lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let width = hi - lo;
            if width == 0.0 {
                return lo;
            }
            let w = (v - lo).rem_euclid(2.0 * width);
            lo + if w <= width { w } else { 2.0 * width - w }
        }
        (true, false) => lo + (v - lo).abs(),
        (false, true) => hi - (hi - v).abs(),
        (false, false) => v,
    }
}

struct Search<'a, F> {
    f: &'a F,
    lower: [f64; 3],
    upper: [f64; 3],
    free: Vec<usize>,
    base: [f64; 3],
    evals: usize,
    budget: usize,
    best: (Vec<f64>, f64),
    history: Option<Vec<(usize, f64)>>,
}

impl<'a, F: Fn(&PidGains) -> f64> Search<'a, F> {
    fn full(&self, z: &[f64]) -> [f64; 3] {
        let mut x = self.base;
        for (k, &i) in self.free.iter().enumerate() {
            x[i] = z[k];
        }
        x
    }

    /// Folds free coordinates into the box by mirroring at the bounds.
    ///
    /// The simplex lives in unfolded coordinates so a vertex past a bound is
    /// evaluated at its mirror image instead of being flattened onto the face.
    fn fold(&self, z: &[f64]) -> Vec<f64> {
        self.free
            .iter()
            .zip(z)
            .map(|(&i, &v)| fold_into(v, self.lower[i], self.upper[i]))
            .collect()
    }

    /// `None` once the budget is spent.
    fn eval(&mut self, z: &[f64]) -> Option<f64> {
        if self.evals >= self.budget {
            return None;
        }
        self.evals += 1;
        let x = self.fold(z);
        let mut v = (self.f)(&PidGains::from_array(self.full(&x)));
        if v.is_nan() {
            v = f64::INFINITY;
        }
        if v < self.best.1 {
            self.best = (x, v);
            if let Some(h) = self.history.as_mut() {
                h.push((self.evals, v));
            }
        }
        Some(v)
    }

    fn initial_simplex(&self, start: &[f64], step: f64) -> Vec<Vec<f64>> {
        let mut simplex = vec![start.to_vec()];
        for (k, &i) in self.free.iter().enumerate() {
            let mut v = start.to_vec();
            let (lo, hi) = (self.lower[i], self.upper[i]);
            v[k] = if start[k] + step <= hi {
                start[k] + step
            } else if start[k] - step >= lo {
                start[k] - step
            } else if hi - start[k] >= start[k] - lo {
                hi
            } else {
                lo
            };
            simplex.push(v);
        }
        simplex
    }

    /// One Nelder–Mead run from `start`. Returns `Some(())` on convergence,
    /// `None` when the budget ran out.
    fn run(&mut self, start: &[f64], start_value: f64, step: f64, f_tol: f64, x_tol: f64) -> Option<()> {
        let n = self.free.len();
        let mut pts = self.initial_simplex(start, step);
        let mut vals = vec![start_value];
        for p in pts.iter().skip(1) {
            let p = p.clone();
            vals.push(self.eval(&p)?);
        }
        loop {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
            pts = order.iter().map(|&i| pts[i].clone()).collect();
            vals = order.iter().map(|&i| vals[i]).collect();

            let f_spread = vals[n] - vals[0];
            let x_spread = pts[1..]
                .iter()
                .flat_map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if f_spread <= f_tol && x_spread <= x_tol {
                return Some(());
            }

            let centroid: Vec<f64> = (0..n)
                .map(|k| pts[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                (0..n).map(|k| centroid[k] + t * (pts[n][k] - centroid[k])).collect()
            };

            let xr = along(-REFLECT);
            let fr = self.eval(&xr)?;
            if fr < vals[0] {
                let xe = along(-REFLECT * EXPAND);
                let fe = self.eval(&xe)?;
                if fe < fr {
                    pts[n] = xe;
                    vals[n] = fe;
                } else {
                    pts[n] = xr;
                    vals[n] = fr;
                }
                continue;
            }
            if fr < vals[n - 1] {
                pts[n] = xr;
                vals[n] = fr;
                continue;
            }
            let (xc, outside) = if fr < vals[n] {
                (along(-REFLECT * CONTRACT), true)
            } else {
                (along(CONTRACT), false)
            };
            let fc = self.eval(&xc)?;
            if (outside && fc <= fr) || (!outside && fc < vals[n]) {
                pts[n] = xc;
                vals[n] = fc;
                continue;
            }
            for i in 1..=n {
                let p: Vec<f64> = (0..n).map(|k| pts[0][k] + SHRINK * (pts[i][k] - pts[0][k])).collect();
                vals[i] = self.eval(&p)?;
                pts[i] = p;
            }
        }
    }
}

/// Local bound-constrained minimization of `f` starting from `opts.x0`.
///
/// Deterministic; never evaluates outside the box and never exceeds
/// `opts.max_evals` evaluations. Running out of budget is reported through
/// `converged = false`, not as an error.
pub fn minimize<F: Fn(&PidGains) -> f64>(f: F, opts: &OptimOptions) -> Result<OptimResult> {
    opts.validate()?;
    let (lower, upper) = opts.bounds();
    let x0 = opts.x0.as_array();
    let free: Vec<usize> = (0..3).filter(|&i| lower[i] < upper[i]).collect();
    let mut base = x0;
    for i in 0..3 {
        if lower[i] == upper[i] {
            base[i] = lower[i];
        }
    }
    let start: Vec<f64> = free.iter().map(|&i| x0[i]).collect();
    let mut search = Search {
        f: &f,
        lower,
        upper,
        free,
        base,
        evals: 0,
        budget: opts.max_evals,
        best: (start.clone(), f64::INFINITY),
        history: opts.keep_history.then(Vec::new),
    };

    let f0 = search.eval(&start).expect("budget is at least one");
    let mut converged = false;
    if search.free.is_empty() {
        converged = true;
    } else {
        let mut anchor = f0;
        for _ in 0..=MAX_RESTARTS {
            let (x, fx) = search.best.clone();
            if search
                .run(&x, fx, opts.initial_step, opts.f_tol, opts.x_tol)
                .is_none()
            {
                break;
            }
            // stop once a fresh simplex around the incumbent finds nothing new
            if anchor - search.best.1 <= opts.f_tol {
                converged = true;
                break;
            }
            anchor = search.best.1;
        }
    }

    // land on bounds the mirrored search only approaches
    let (mut z, _) = search.best.clone();
    for (k, &i) in search.free.clone().iter().enumerate() {
        for b in [lower[i], upper[i]] {
            if z[k] != b && (z[k] - b).abs() <= opts.x_tol {
                z[k] = b;
            }
        }
    }
    if z != search.best.0 {
        search.eval(&z);
    }

    let (z, objective) = search.best.clone();
    let gains = PidGains::from_array(search.full(&z));
    Ok(OptimResult {
        gains,
        objective,
        evals: search.evals,
        converged,
        history: search.history.unwrap_or_default(),
    })
}
