//! Linear time-invariant building blocks: polynomials, transfer functions,
//! state-space realization, roots and stability.

mod poly;
mod roots;
mod ss;
mod stability;
mod tf;

pub use poly::{poly_arith, PolyOp, Polynomial};
pub use roots::roots;
pub use ss::{tf_to_ss, StateSpace};
pub use stability::{is_stable, StabilityVerdict, MARGINAL_TOL};
pub use tf::{closed_loop, pid_tf, series, unity_feedback, PidGains, TransferFunction};
