//! PID auto-tuning by matching the closed-loop step response to a
//! second-order reference.
//!
//! Given a plant `G(s)` and a requested settling time and percent overshoot,
//! [`tuner::tune`] builds the canonical second-order target, searches the
//! non-negative gain orthant for the PID `(kp + ki/s + kd s)` whose unity
//! feedback step response has the smallest integrated absolute deviation
//! from that target, then checks closed-loop stability and reports the
//! unit-step settling time, overshoot and IAE.
//!
//! ```
//! use sostiae::{lti::TransferFunction, optimizer::OptimOptions, target::TargetSpec, tuner::tune};
//!
//! let plant = TransferFunction::lag_chain(2); // 1/(s+1)^2
//! let spec = TargetSpec::second_order(2.5, 1.0).unwrap();
//! let report = tune(&plant, &spec, &OptimOptions::default(), None).unwrap();
//! assert!(report.successful());
//! assert!(report.metrics.overshoot_pct < 4.0);
//! ```
//!
//! Simulation is exact at the sample points (zero-order-hold discretization
//! of a controllable canonical realization), so objective values do not
//! depend on an ODE integrator.

pub mod bench;
pub mod cli;
pub mod error;
pub mod lti;
pub mod metrics;
pub mod optimizer;
pub mod simulate;
pub mod target;
pub mod tuner;

pub use error::{Error, Result};
