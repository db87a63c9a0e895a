//! Reproduction harness for published gain rows and for the tuner's own
//! results on the lag-chain plants.
//!
//! Cases are data: they live in `fixtures/*.json` and are compiled in.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::{closed_loop, PidGains, TransferFunction};
use crate::metrics::{evaluate_closed_loop, MetricsReport};
use crate::optimizer::OptimOptions;
use crate::simulate::{TimeGrid, DEFAULT_DT};
use crate::target::TargetSpec;
use crate::tuner::tune;

const TABLE1: &str = include_str!("../fixtures/table1.json");
const ASTROM_G3: &str = include_str!("../fixtures/astrom_g3.json");

/// Relative tolerance of the `IAE = 1/ki` cross-check.
pub const IE_IDENTITY_TOL: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantSpec {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuneSpec {
    pub ts: f64,
    pub po: f64,
}

/// Acceptance rule for one measured quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tolerance {
    /// `|measured - value| <= tol * |value|`
    Relative { value: f64, tol: f64 },
    /// `|measured - value| <= tol`
    Absolute { value: f64, tol: f64 },
    /// `measured <= ratio * value`
    RatioAtMost { value: f64, ratio: f64 },
    /// `measured <= value + excess`
    ExcessAtMost { value: f64, excess: f64 },
}

impl Tolerance {
    pub fn accepts(&self, measured: f64) -> bool {
        if !measured.is_finite() {
            return false;
        }
        match *self {
            Tolerance::Relative { value, tol } => (measured - value).abs() <= tol * value.abs(),
            Tolerance::Absolute { value, tol } => (measured - value).abs() <= tol,
            Tolerance::RatioAtMost { value, ratio } => measured <= ratio * value,
            Tolerance::ExcessAtMost { value, excess } => measured <= value + excess,
        }
    }

    fn is_positive(&self) -> bool {
        match *self {
            Tolerance::Relative { tol, .. } | Tolerance::Absolute { tol, .. } => tol > 0.0,
            Tolerance::RatioAtMost { ratio, .. } => ratio > 0.0,
            Tolerance::ExcessAtMost { excess, .. } => excess > 0.0,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Tolerance::Relative { value, tol } => format!("{value:.4} ± {:.0}%", tol * 100.0),
            Tolerance::Absolute { value, tol } => format!("{value:.4} ± {tol}"),
            Tolerance::RatioAtMost { value, ratio } => format!("≤ {:.4} ({ratio}×{value})", ratio * value),
            Tolerance::ExcessAtMost { value, excess } => format!("≤ {:.4} ({value}+{excess})", value + excess),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ts: Option<Tolerance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub po: Option<Tolerance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iae: Option<Tolerance>,
}

/// One row to reproduce: published gains to evaluate, or a spec to tune.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCase {
    pub name: String,
    pub source: String,
    pub plant: PlantSpec,
    #[serde(default)]
    pub gains: Option<PidGains>,
    #[serde(default)]
    pub tune: Option<TuneSpec>,
    pub horizon: f64,
    pub expected: Expected,
    #[serde(default)]
    pub require_stable: bool,
    /// Also require `|IAE - 1/ki| < 2%` of `1/ki`.
    #[serde(default)]
    pub ie_identity: bool,
}

impl BenchCase {
    fn validate(&self) -> Result<()> {
        if self.gains.is_some() == self.tune.is_some() {
            return Err(Error::Domain(format!(
                "case {}: exactly one of gains/tune is required",
                self.name
            )));
        }
        let tols = [self.expected.ts, self.expected.po, self.expected.iae];
        if tols.iter().flatten().any(|t| !t.is_positive()) {
            return Err(Error::Domain(format!("case {}: tolerances must be positive", self.name)));
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
struct Fixture {
    #[allow(dead_code)]
    title: String,
    cases: Vec<BenchCase>,
}

fn load(src: &str) -> Vec<BenchCase> {
    let fx: Fixture = serde_json::from_str(src).expect("embedded fixture parses");
    for c in &fx.cases {
        c.validate().expect("embedded fixture is valid");
    }
    fx.cases
}

pub fn table1_cases() -> Vec<BenchCase> {
    load(TABLE1)
}

pub fn astrom_g3_cases() -> Vec<BenchCase> {
    load(ASTROM_G3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub ts: f64,
    pub po: f64,
    pub iae: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub field: String,
    pub expected: String,
    pub measured: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchOutcome {
    pub name: String,
    pub gains: PidGains,
    pub measured: Measured,
    pub stable: bool,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

impl BenchOutcome {
    pub fn check(&self, field: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.field == field)
    }
}

fn measure(case: &BenchCase) -> Result<(PidGains, MetricsReport)> {
    let plant = TransferFunction::from_coeffs(&case.plant.num, &case.plant.den)?;
    let grid = TimeGrid::spanning(DEFAULT_DT, case.horizon)?;
    let gains = match (case.gains, case.tune) {
        (Some(g), _) => g,
        (None, Some(t)) => {
            let spec = TargetSpec::second_order(t.ts, t.po)?;
            tune(&plant, &spec, &OptimOptions::default(), Some(grid))?.gains
        }
        (None, None) => unreachable!("validated fixture"),
    };
    let t = closed_loop(&plant, &gains)?;
    let (metrics, _) = evaluate_closed_loop(&t, &grid)?;
    Ok((gains, metrics))
}

/// Runs one case; simulation failures become a failed outcome.
pub fn run_case(case: &BenchCase) -> BenchOutcome {
    let (gains, metrics) = match measure(case) {
        Ok(m) => m,
        Err(e) => {
            return BenchOutcome {
                name: case.name.clone(),
                gains: case.gains.unwrap_or_default(),
                measured: Measured { ts: f64::NAN, po: f64::NAN, iae: f64::NAN },
                stable: false,
                checks: vec![CheckOutcome {
                    field: "run".into(),
                    expected: format!("no error ({e})"),
                    measured: f64::NAN,
                    pass: false,
                }],
                pass: false,
            }
        }
    };
    let measured = Measured {
        ts: metrics.settling_time,
        po: metrics.overshoot_pct,
        iae: metrics.iae_unit_step,
    };
    let mut checks = Vec::new();
    for (field, tol, value) in [
        ("ts", case.expected.ts, measured.ts),
        ("po", case.expected.po, measured.po),
        ("iae", case.expected.iae, measured.iae),
    ] {
        if let Some(tol) = tol {
            checks.push(CheckOutcome {
                field: field.into(),
                expected: tol.describe(),
                measured: value,
                pass: tol.accepts(value),
            });
        }
    }
    if case.ie_identity {
        let inv_ki = 1.0 / gains.ki;
        checks.push(CheckOutcome {
            field: "iae=1/ki".into(),
            expected: format!("{inv_ki:.4} ± {:.0}%", IE_IDENTITY_TOL * 100.0),
            measured: measured.iae,
            pass: ((measured.iae - inv_ki) / inv_ki).abs() < IE_IDENTITY_TOL,
        });
    }
    if case.require_stable {
        checks.push(CheckOutcome {
            field: "stable".into(),
            expected: "true".into(),
            measured: if metrics.stable { 1.0 } else { 0.0 },
            pass: metrics.stable,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    BenchOutcome { name: case.name.clone(), gains, measured, stable: metrics.stable, checks, pass }
}

/// Runs cases on scoped threads; the outcome order follows the input order.
pub fn run_cases(cases: &[BenchCase]) -> Vec<BenchOutcome> {
    std::thread::scope(|s| {
        let handles: Vec<_> = cases.iter().map(|c| s.spawn(move || run_case(c))).collect();
        handles.into_iter().map(|h| h.join().expect("bench case panicked")).collect()
    })
}

/// Six published-gain evaluations plus three self-tuning runs.
pub fn run_table1() -> Vec<BenchOutcome> {
    run_cases(&table1_cases())
}

/// Five PI designs on `1/(s+1)^3`.
pub fn run_astrom_g3() -> Vec<BenchOutcome> {
    run_cases(&astrom_g3_cases())
}

/// Fixed-width results table, numbers to four decimals.
pub fn render_table(outcomes: &[BenchOutcome]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>8} {:>8} {:>8} {:>9} {:>9} {:>9}  result",
        "case", "Kp", "Ki", "Kd", "Ts", "PO(%)", "IAE"
    );
    for o in outcomes {
        let _ = writeln!(
            out,
            "{:<24} {:>8.4} {:>8.4} {:>8.4} {:>9.4} {:>9.4} {:>9.4}  {}",
            o.name,
            o.gains.kp,
            o.gains.ki,
            o.gains.kd,
            o.measured.ts,
            o.measured.po,
            o.measured.iae,
            if o.pass { "PASS" } else { "FAIL" }
        );
        for c in o.checks.iter().filter(|c| !c.pass) {
            let _ = writeln!(out, "    {} = {:.4}, expected {}", c.field, c.measured, c.expected);
        }
    }
    out
}
