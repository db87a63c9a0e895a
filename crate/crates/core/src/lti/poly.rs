//! Real polynomials in descending powers of `s`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// A real polynomial stored leading coefficient first.
///
/// Leading zeros are trimmed on construction, so the stored leading
/// coefficient is nonzero unless the polynomial is the zero polynomial `[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

/// Binary operation selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
}

pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: PolyOp) -> Polynomial {
    match op {
        PolyOp::Add => a + b,
        PolyOp::Mul => a * b,
    }
}

impl Polynomial {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        let first_nonzero = coeffs.iter().position(|&c| c != 0.0);
        match first_nonzero {
            Some(i) => {
                coeffs.drain(..i);
            }
            None => coeffs = vec![0.0],
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        Polynomial { coeffs: vec![1.0, 0.0] }
    }

    /// Builds `(s - r_1)(s - r_2)...` from real roots.
    pub fn from_real_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Polynomial::constant(1.0), |acc, &r| {
            &acc * &Polynomial::new(vec![1.0, -r])
        })
    }

    /// Coefficients of the monic polynomial with the given roots, in
    /// descending powers. Complex arithmetic throughout; callers keep the
    /// real parts when the roots come in conjugate pairs.
    pub fn monic_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            out.push(Complex64::new(0.0, 0.0));
            for k in (1..out.len()).rev() {
                let prev = out[k - 1];
                out[k] -= r * prev;
            }
        }
        out
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    /// Value at `s = 0`, i.e. the constant term.
    pub fn at_zero(&self) -> f64 {
        *self.coeffs.last().expect("polynomial is never empty")
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        let n = self.degree();
        if n == 0 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[..n]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (n - i) as f64)
                .collect::<Vec<_>>(),
        )
    }

    pub fn scale(&self, k: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect::<Vec<_>>())
    }

    /// Polynomial long division: `self = q * divisor + r` with `deg r < deg divisor`.
    ///
    /// Panics if `divisor` is the zero polynomial.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dn = divisor.degree();
        if self.degree() < dn || self.is_zero() {
            return (Polynomial::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let qlen = self.degree() - dn + 1;
        let mut q = vec![0.0; qlen];
        for i in 0..qlen {
            let factor = rem[i] / divisor.coeffs[0];
            q[i] = factor;
            rem[i] = 0.0;
            for j in 1..=dn {
                rem[i + j] -= factor * divisor.coeffs[j];
            }
        }
        let r = rem[qlen..].to_vec();
        (Polynomial::new(q), Polynomial::new(if r.is_empty() { vec![0.0] } else { r }))
    }

    /// Number of exact trailing zero coefficients (multiplicity of the root at 0).
    pub fn zero_root_multiplicity(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.coeffs.iter().rev().take_while(|&&c| c == 0.0).count()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let pad = |p: &Polynomial, i: usize| {
            let off = n - p.coeffs.len();
            if i < off {
                0.0
            } else {
                p.coeffs[i - off]
            }
        };
        Polynomial::new((0..n).map(|i| pad(self, i) + pad(rhs, i)).collect::<Vec<_>>())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Up to 10 significant digits, trailing zeros dropped.
fn short(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let d = (9 - x.abs().log10().floor() as i32).clamp(0, 17) as usize;
    let s = format!("{x:.d$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Terms in descending powers; honours a precision such as `{:.4}`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let p = n - i;
            if c == 0.0 && !(first && p == 0) {
                continue;
            }
            let (sign, mag) = if c < 0.0 { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = p == 0 || mag != 1.0;
            if show_coeff {
                match f.precision() {
                    Some(d) => write!(f, "{mag:.d$}")?,
                    None => write!(f, "{}", short(mag))?,
                }
            }
            match p {
                0 => {}
                1 => write!(f, "s")?,
                _ => write!(f, "s^{p}")?,
            }
        }
        Ok(())
    }
}
