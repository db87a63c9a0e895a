//! Step responses sampled exactly on a uniform grid via zero-order-hold
//! discretization, and linear resampling of externally supplied traces.

use nalgebra::{DMatrix, DVector, RowDVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::{tf_to_ss, StateSpace, TransferFunction};

/// Sample magnitude beyond which a response is flagged as overflowed.
pub const OVERFLOW_LIMIT: f64 = 1e6;

pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_HORIZON_MULT: f64 = 5.0;

/// Uniform grid `t_k = k * dt`, `k = 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub dt: f64,
    pub n_points: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, n_points: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Domain(format!("time step must be positive and finite, got {dt}")));
        }
        if n_points < 2 {
            return Err(Error::Domain(format!("time grid needs at least 2 points, got {n_points}")));
        }
        Ok(TimeGrid { dt, n_points })
    }

    /// The colon range `0:dt:span`, endpoint included when it lands on the
    /// grid up to rounding.
    pub fn spanning(dt: f64, span: f64) -> Result<Self> {
        if !(span.is_finite() && span > 0.0) {
            return Err(Error::Domain(format!("time span must be positive and finite, got {span}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Domain(format!("time step must be positive and finite, got {dt}")));
        }
        let q = span / dt;
        let steps = if (q - q.round()).abs() <= 1e-9 * q.max(1.0) {
            q.round()
        } else {
            q.floor()
        };
        TimeGrid::new(dt, steps as usize + 1)
    }

    /// `0:0.01:5*ts`.
    pub fn for_settling_time(ts: f64) -> Result<Self> {
        Self::spanning(DEFAULT_DT, DEFAULT_HORIZON_MULT * ts)
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn end(&self) -> f64 {
        self.t(self.n_points - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.t(k))
    }
}

/// Output samples on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseTrace {
    pub grid: TimeGrid,
    pub y: Vec<f64>,
    /// Index of the first sample with `|y| > OVERFLOW_LIMIT`; that sample and
    /// all later ones are clamped to `±OVERFLOW_LIMIT`.
    pub overflow_at: Option<usize>,
}

impl ResponseTrace {
    pub fn constant(grid: TimeGrid, value: f64) -> Self {
        ResponseTrace { grid, y: vec![value; grid.n_points], overflow_at: None }
    }

    pub fn overflowed(&self) -> bool {
        self.overflow_at.is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.times().zip(self.y.iter().copied())
    }
}

/// Sampled system `x_{k+1} = Ad x_k + Bd u_k`, `y_k = C x_k + D u_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteStateSpace {
    pub ad: DMatrix<f64>,
    pub bd: DVector<f64>,
    pub c: RowDVector<f64>,
    pub d: f64,
    pub dt: f64,
}

/// Zero-order-hold discretization through one exponential of the augmented
/// matrix `[[A, B], [0, 0]] * dt`, whose top blocks are `Ad` and `Bd`.
pub fn discretize_zoh(ss: &StateSpace, dt: f64) -> Result<DiscreteStateSpace> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Domain(format!("time step must be positive and finite, got {dt}")));
    }
    let n = ss.order();
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m.view_mut((0, 0), (n, n)).copy_from(&(&ss.a * dt));
    m.view_mut((0, n), (n, 1)).copy_from(&(&ss.b * dt));
    let e = m.exp();
    if e.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("matrix exponential"));
    }
    Ok(DiscreteStateSpace {
        ad: e.view((0, 0), (n, n)).into_owned(),
        bd: e.view((0, n), (n, 1)).column(0).into_owned(),
        c: ss.c.clone(),
        d: ss.d,
        dt,
    })
}

/// Unit-step response from rest, exact at the grid points.
pub fn step_response(tf: &TransferFunction, grid: &TimeGrid) -> Result<ResponseTrace> {
    let ss = tf_to_ss(tf)?;
    if ss.order() == 0 {
        return Ok(ResponseTrace::constant(*grid, ss.d));
    }
    let sys = discretize_zoh(&ss, grid.dt)?;
    Ok(simulate_step(&sys, grid))
}

fn simulate_step(sys: &DiscreteStateSpace, grid: &TimeGrid) -> ResponseTrace {
    let n = sys.ad.nrows();
    // row-major copies keep the inner loop allocation-free
    let ad: Vec<f64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|ij| sys.ad[ij]).collect();
    let bd: Vec<f64> = sys.bd.iter().copied().collect();
    let c: Vec<f64> = sys.c.iter().copied().collect();

    let mut x = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut y = Vec::with_capacity(grid.n_points);
    let mut overflow_at = None;
    for k in 0..grid.n_points {
        let yk = c.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() + sys.d;
        if yk.is_nan() || yk.abs() > OVERFLOW_LIMIT {
            let clamp = if yk.is_nan() { OVERFLOW_LIMIT } else { OVERFLOW_LIMIT.copysign(yk) };
            overflow_at = Some(k);
            y.resize(grid.n_points, clamp);
            break;
        }
        y.push(yk);
        for i in 0..n {
            let row = &ad[i * n..(i + 1) * n];
            next[i] = row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() + bd[i];
        }
        std::mem::swap(&mut x, &mut next);
    }
    ResponseTrace { grid: *grid, y, overflow_at }
}

/// Linear interpolation of `(raw_t, raw_y)` onto `grid`.
///
/// The raw samples must span the grid: the first may start up to one `dt`
/// late (earlier grid points take the first sample) and the last must reach
/// the grid end. No extrapolation past the last sample.
pub fn resample(raw_t: &[f64], raw_y: &[f64], grid: &TimeGrid) -> Result<ResponseTrace> {
    if raw_t.len() != raw_y.len() {
        return Err(Error::Domain(format!(
            "trajectory has {} times but {} values",
            raw_t.len(),
            raw_y.len()
        )));
    }
    if raw_t.len() < 2 {
        return Err(Error::Coverage("need at least two samples".into()));
    }
    if raw_t.iter().chain(raw_y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("trajectory"));
    }
    if let Some(w) = raw_t.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Domain(format!(
            "trajectory times must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    let end = grid.end();
    let slack = 1e-9 * end.max(1.0);
    if raw_t[0] > grid.dt + slack {
        return Err(Error::Coverage(format!(
            "trajectory starts at {} but the grid starts at 0",
            raw_t[0]
        )));
    }
    let last = raw_t[raw_t.len() - 1];
    if last < end - slack {
        return Err(Error::Coverage(format!("trajectory ends at {last} but the grid ends at {end}")));
    }

    let mut y = Vec::with_capacity(grid.n_points);
    let mut seg = 0;
    for t in grid.times() {
        if t <= raw_t[0] {
            y.push(raw_y[0]);
            continue;
        }
        while seg + 2 < raw_t.len() && raw_t[seg + 1] < t {
            seg += 1;
        }
        let (t0, t1) = (raw_t[seg], raw_t[seg + 1]);
        let v = if t >= t1 {
            raw_y[seg + 1]
        } else {
            let w = (t - t0) / (t1 - t0);
            raw_y[seg] + w * (raw_y[seg + 1] - raw_y[seg])
        };
        y.push(v);
    }
    Ok(ResponseTrace { grid: *grid, y, overflow_at: None })
}
