//! Rational transfer functions, PID construction and loop algebra.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use crate::error::{Error, Result};

/// `num(s) / den(s)` with a monic denominator.
///
/// Improper functions are representable (an unfiltered PID is one);
/// operations that need properness check it themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    num: Polynomial,
    den: Polynomial,
}

impl TransferFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if !num.is_finite() || !den.is_finite() {
            return Err(Error::NonFinite("transfer function coefficients"));
        }
        let lead = den.leading();
        Ok(TransferFunction {
            num: num.scale(1.0 / lead),
            den: den.scale(1.0 / lead),
        })
    }

    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()))
    }

    /// `1 / (s + 1)^n`.
    pub fn lag_chain(order: usize) -> Self {
        let den = Polynomial::from_real_roots(&vec![-1.0; order]);
        TransferFunction::new(Polynomial::constant(1.0), den).expect("valid lag chain")
    }

    pub fn gain(k: f64) -> Result<Self> {
        Self::new(Polynomial::constant(k), Polynomial::constant(1.0))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// `deg(den) - deg(num)`; the zero function counts as strictly proper.
    pub fn relative_degree(&self) -> isize {
        if self.num.is_zero() {
            return self.den.degree() as isize + 1;
        }
        self.den.degree() as isize - self.num.degree() as isize
    }

    pub fn is_proper(&self) -> bool {
        self.relative_degree() >= 0
    }

    pub fn is_biproper(&self) -> bool {
        self.relative_degree() == 0
    }

    pub fn order(&self) -> usize {
        self.den.degree()
    }

    /// Cascade `self` then `other`, with no pole-zero cancellation.
    pub fn series(&self, other: &TransferFunction) -> TransferFunction {
        TransferFunction {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    /// Closes a unity negative-feedback loop around `self`: `L / (1 + L)`.
    pub fn unity_feedback(&self) -> Result<TransferFunction> {
        if !self.is_proper() {
            return Err(Error::ImproperClosedLoop(format!(
                "loop gain has numerator degree {} above denominator degree {}",
                self.num.degree(),
                self.den.degree()
            )));
        }
        let den = &self.den + &self.num;
        if den.is_zero() {
            return Err(Error::ImproperClosedLoop("1 + L vanishes identically".into()));
        }
        if !self.num.is_zero() && den.degree() < self.num.degree() {
            return Err(Error::ImproperClosedLoop(format!(
                "characteristic polynomial degree {} below numerator degree {}",
                den.degree(),
                self.num.degree()
            )));
        }
        TransferFunction::new(self.num.clone(), den)
    }

    /// `num(0) / den(0)`; `+inf`/`-inf` for an uncancelled pole at the origin.
    pub fn dc_gain(&self) -> Result<f64> {
        let n0 = self.num.at_zero();
        let d0 = self.den.at_zero();
        if d0 == 0.0 {
            if n0 == 0.0 {
                return Err(Error::IndeterminateGain);
            }
            return Ok(f64::INFINITY.copysign(n0));
        }
        Ok(n0 / d0)
    }
}

impl fmt::Display for TransferFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Parallel-form PID gains, all finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
}

impl PidGains {
    pub fn new(kp: f64, ki: f64, kd: f64) -> Result<Self> {
        let g = PidGains { kp, ki, kd };
        g.validate()?;
        Ok(g)
    }

    pub fn pi(kp: f64, ki: f64) -> Result<Self> {
        Self::new(kp, ki, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("kp", self.kp), ("ki", self.ki), ("kd", self.kd)] {
            if !v.is_finite() {
                return Err(Error::NonFinite("PID gains"));
            }
            if v < 0.0 {
                return Err(Error::Domain(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.kp, self.ki, self.kd]
    }

    pub fn from_array(x: [f64; 3]) -> Self {
        PidGains { kp: x[0], ki: x[1], kd: x[2] }
    }

    /// The unfiltered controller `(kd s^2 + kp s + ki) / s`.
    pub fn transfer_function(&self) -> TransferFunction {
        pid_tf(self)
    }
}

pub fn pid_tf(g: &PidGains) -> TransferFunction {
    let (num, den) = if g.kd == 0.0 && g.ki == 0.0 {
        (Polynomial::constant(g.kp), Polynomial::constant(1.0))
    } else if g.kd == 0.0 {
        (Polynomial::new(vec![g.kp, g.ki]), Polynomial::s())
    } else {
        (Polynomial::new(vec![g.kd, g.kp, g.ki]), Polynomial::s())
    };
    TransferFunction { num, den }
}

pub fn series(a: &TransferFunction, b: &TransferFunction) -> TransferFunction {
    a.series(b)
}

pub fn unity_feedback(l: &TransferFunction) -> Result<TransferFunction> {
    l.unity_feedback()
}

/// `T = C G / (1 + C G)` for the PID `g` around `plant`.
pub fn closed_loop(plant: &TransferFunction, g: &PidGains) -> Result<TransferFunction> {
    pid_tf(g).series(plant).unity_feedback()
}
