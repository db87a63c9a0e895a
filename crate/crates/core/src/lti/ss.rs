//! Controllable canonical state-space realization.

use nalgebra::{DMatrix, DVector, RowDVector};

use super::tf::TransferFunction;
use crate::error::{Error, Result};

/// Single-input single-output `x' = A x + B u`, `y = C x + D u`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: RowDVector<f64>,
    pub d: f64,
}

impl StateSpace {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// `C (-A)^{-1} B + D`, or `None` when `A` is singular.
    pub fn dc_gain(&self) -> Option<f64> {
        if self.order() == 0 {
            return Some(self.d);
        }
        let x = (-&self.a).lu().solve(&self.b)?;
        Some((&self.c * x)[(0, 0)] + self.d)
    }
}

/// Controllable canonical form of a proper transfer function.
///
/// A biproper function is split as `D + r(s)/den(s)` first; the last row of
/// `A` holds the negated denominator coefficients and `B = e_n`.
pub fn tf_to_ss(tf: &TransferFunction) -> Result<StateSpace> {
    if !tf.is_proper() {
        return Err(Error::Improper {
            num: tf.num().degree(),
            den: tf.den().degree(),
        });
    }
    let n = tf.den().degree();
    let (q, r) = tf.num().div_rem(tf.den());
    let d = q.at_zero();
    // den is monic: den = s^n + a_1 s^{n-1} + ... + a_n
    let a_coef = tf.den().coeffs();

    let mut a = DMatrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = 1.0;
    }
    if n > 0 {
        for j in 0..n {
            a[(n - 1, j)] = -a_coef[n - j];
        }
    }
    let mut b = DVector::zeros(n);
    if n > 0 {
        b[n - 1] = 1.0;
    }
    // r has degree < n; c_j multiplies s^j
    let rc = r.coeffs();
    let mut c = RowDVector::zeros(n);
    if !r.is_zero() {
        for (k, &coef) in rc.iter().rev().enumerate() {
            c[k] = coef;
        }
    }
    Ok(StateSpace { a, b, c, d })
}
