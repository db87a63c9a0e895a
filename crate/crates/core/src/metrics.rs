//! Time-domain performance metrics on sampled step responses.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lti::{closed_loop, is_stable, PidGains, TransferFunction};
use crate::simulate::{step_response, ResponseTrace, TimeGrid};

/// Default settling band, as a fraction of the final value.
pub const SETTLING_BAND: f64 = 0.02;

/// What an error signal is measured against.
#[derive(Debug, Clone, Copy)]
pub enum Reference<'a> {
    UnitStep,
    Trace(&'a ResponseTrace),
}

/// Trapezoidal integral of `|reference - y|` over the grid.
pub fn iae(y: &ResponseTrace, reference: Reference<'_>) -> Result<f64> {
    let dt = y.grid.dt;
    let err: Box<dyn Iterator<Item = f64> + '_> = match reference {
        Reference::UnitStep => Box::new(y.y.iter().map(|v| (1.0 - v).abs())),
        Reference::Trace(r) => {
            if r.grid != y.grid || r.y.len() != y.y.len() {
                return Err(Error::GridMismatch { left: y.grid.n_points, right: r.grid.n_points });
            }
            Box::new(r.y.iter().zip(&y.y).map(|(a, b)| (a - b).abs()))
        }
    };
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    for e in err {
        if let Some(p) = prev {
            total += 0.5 * dt * (p + e);
        }
        prev = Some(e);
    }
    Ok(total)
}

pub fn iae_unit_step(y: &ResponseTrace) -> f64 {
    iae(y, Reference::UnitStep).expect("unit step reference always matches")
}

/// First grid time after which `y` stays within `band * |final_value|` of
/// `final_value` for the rest of the grid.
pub fn settling_time(y: &ResponseTrace, final_value: f64, band: f64) -> Result<f64> {
    if final_value == 0.0 || !final_value.is_finite() {
        return Err(Error::Domain(format!(
            "settling time needs a finite nonzero final value, got {final_value}"
        )));
    }
    let tol = band * final_value.abs();
    let outside = |v: &f64| (v - final_value).abs() > tol;
    match y.y.iter().rposition(outside) {
        None => Ok(0.0),
        Some(k) if k + 1 == y.y.len() => Err(Error::NeverSettles { band_pct: band * 100.0 }),
        Some(k) => Ok(y.grid.t(k + 1)),
    }
}

/// Peak excursion above `final_value`, in percent; undershoot counts as 0.
pub fn percent_overshoot(y: &ResponseTrace, final_value: f64) -> Result<f64> {
    if !(final_value > 0.0 && final_value.is_finite()) {
        return Err(Error::Domain(format!(
            "percent overshoot needs a positive final value, got {final_value}"
        )));
    }
    let peak = y.y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(((peak - final_value) / final_value * 100.0).max(0.0))
}

/// Unit-step performance of one closed loop.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    /// Grid end when the response never enters the band for good.
    pub settling_time: f64,
    pub settled: bool,
    pub overshoot_pct: f64,
    pub iae_unit_step: f64,
    /// Analytic DC gain of the closed loop.
    pub final_value: f64,
    pub stable: bool,
    pub poles: Vec<Complex64>,
}

/// Metrics of a closed loop from its step response.
///
/// Settling and overshoot use the analytic DC gain as the final value; if
/// that is not finite and positive the response is reported as unsettled
/// with zero overshoot.
pub fn evaluate_closed_loop(t: &TransferFunction, grid: &TimeGrid) -> Result<(MetricsReport, ResponseTrace)> {
    let final_value = t.dc_gain()?;
    let verdict = is_stable(t)?;
    let y = step_response(t, grid)?;
    let usable = final_value.is_finite() && final_value > 0.0;
    let (settling_time, settled) = if usable {
        match settling_time(&y, final_value, SETTLING_BAND) {
            Ok(ts) => (ts, true),
            Err(Error::NeverSettles { .. }) => (grid.end(), false),
            Err(e) => return Err(e),
        }
    } else {
        (grid.end(), false)
    };
    let overshoot_pct = if usable { percent_overshoot(&y, final_value)? } else { 0.0 };
    let report = MetricsReport {
        settling_time,
        settled,
        overshoot_pct,
        iae_unit_step: iae_unit_step(&y),
        final_value,
        stable: verdict.stable,
        poles: verdict.poles,
    };
    Ok((report, y))
}

/// Metrics of the PID `g` in unity feedback around `plant`.
pub fn evaluate_gains(plant: &TransferFunction, g: &PidGains, grid: &TimeGrid) -> Result<MetricsReport> {
    g.validate()?;
    let t = closed_loop(plant, g)?;
    Ok(evaluate_closed_loop(&t, grid)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(grid: TimeGrid, f: impl Fn(f64) -> f64) -> ResponseTrace {
        ResponseTrace { grid, y: grid.times().map(f).collect(), overflow_at: None }
    }

    #[test]
    fn iae_of_identical_traces_is_zero() {
        let grid = TimeGrid::new(0.1, 50).unwrap();
        let y = trace(grid, |t| t.sin());
        assert_eq!(iae(&y, Reference::Trace(&y)).unwrap(), 0.0);
    }

    #[test]
    fn iae_first_order_lag() {
        let grid = TimeGrid::spanning(0.01, 12.5).unwrap();
        let y = trace(grid, |t| 1.0 - (-t).exp());
        assert!((iae_unit_step(&y) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn iae_grid_mismatch() {
        let a = trace(TimeGrid::new(0.1, 50).unwrap(), |_| 0.0);
        let b = trace(TimeGrid::new(0.1, 51).unwrap(), |_| 0.0);
        assert!(matches!(iae(&a, Reference::Trace(&b)), Err(Error::GridMismatch { .. })));
    }

    #[test]
    fn settling_cases() {
        let grid = TimeGrid::spanning(0.001, 10.0).unwrap();
        let y = trace(grid, |t| 1.0 - (-t).exp());
        let ts = settling_time(&y, 1.0, 0.02).unwrap();
        assert!((ts - 50f64.ln()).abs() < 0.01, "{ts}");
        let flat = trace(grid, |_| 1.0);
        assert_eq!(settling_time(&flat, 1.0, 0.02).unwrap(), 0.0);
        let ramp = trace(grid, |t| t);
        assert!(matches!(settling_time(&ramp, 1.0, 0.02), Err(Error::NeverSettles { .. })));
        assert!(settling_time(&flat, 0.0, 0.02).is_err());
    }

    #[test]
    fn overshoot_cases() {
        let grid = TimeGrid::spanning(0.01, 10.0).unwrap();
        let y = trace(grid, |t| 1.0 - (-t).exp());
        assert_eq!(percent_overshoot(&y, 1.0).unwrap(), 0.0);
        assert!(percent_overshoot(&y, 0.0).is_err());
        assert!(percent_overshoot(&y, -1.0).is_err());
    }

    #[test]
    fn zero_gains_report_is_unsettled() {
        let grid = TimeGrid::for_settling_time(2.5).unwrap();
        let r = evaluate_gains(&TransferFunction::lag_chain(1), &PidGains::default(), &grid).unwrap();
        assert!(!r.settled);
        assert_eq!(r.overshoot_pct, 0.0);
        assert!((r.iae_unit_step - 12.5).abs() < 1e-9);
    }
}
