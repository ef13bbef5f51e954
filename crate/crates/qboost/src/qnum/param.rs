use super::quad::{CQuad, Quad};
use super::QnumError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// The deformation parameter `q > 0`, held exactly.
///
/// With `q = n/d` in lowest terms, `s = q^(1/2) = sqrt(n d) / d`, so exact
/// values at `q` live in `Q(sqrt(n d))`, or in `Q` when `n d` is a square.
#[derive(Clone, PartialEq, Eq)]
pub struct DeformationParameter {
    q: BigRational,
    s: Quad,
}

impl DeformationParameter {
    pub fn new(q: BigRational) -> Result<Self, QnumError> {
        if !q.is_positive() {
            return Err(QnumError::NonPositiveQ);
        }
        let n = q.numer().clone();
        let d = q.denom().clone();
        let disc = &n * &d;
        let root = disc.sqrt();
        let s = if &root * &root == disc {
            Quad::rational(BigRational::new(root, d))
        } else {
            Quad::new(BigRational::zero(), BigRational::new(BigInt::one(), d), Some(Arc::new(disc)))
        };
        Ok(DeformationParameter { q, s })
    }

    pub fn from_ratio(n: i64, d: i64) -> Result<Self, QnumError> {
        if d == 0 {
            return Err(QnumError::ZeroDenominator);
        }
        Self::new(BigRational::new(n.into(), d.into()))
    }

    pub fn one() -> Self {
        Self::new(BigRational::one()).unwrap()
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    /// `Q = q + 1/q`.
    pub fn big_q(&self) -> BigRational {
        &self.q + self.q.recip()
    }

    pub fn is_classical(&self) -> bool {
        self.q.is_one()
    }

    /// `s = q^(1/2)` as an exact element of the quadratic field.
    pub fn s(&self) -> &Quad {
        &self.s
    }

    pub fn s_complex(&self) -> CQuad {
        CQuad::real(self.s.clone())
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.q)
    }

    /// Canonical exact string form, e.g. `3/2` or `2`.
    pub fn exact_string(&self) -> String {
        self.q.to_string()
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parse an exact rational from `"3/2"`, `"-4"`, `"1.25"` or `"1e-3"`.
pub fn parse_rational(text: &str) -> Result<BigRational, QnumError> {
    let t = text.trim();
    let bad = || QnumError::Parse(text.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((a, b)) = t.split_once('/') {
        let n = BigInt::from_str(a.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(b.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(QnumError::ZeroDenominator);
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], i64::from_str(&t[i + 1..]).map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, m) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = m.split_once('.').unwrap_or((m, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{}{}", int_part, frac_part);
    let mut v = BigRational::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i64;
    let ten = BigRational::from_integer(10.into());
    for _ in 0..scale.unsigned_abs() {
        v = if scale > 0 { v * &ten } else { v / &ten };
    }
    Ok(if neg { -v } else { v })
}

impl FromStr for DeformationParameter {
    type Err = QnumError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(parse_rational(s)?)
    }
}

impl fmt::Display for DeformationParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

impl fmt::Debug for DeformationParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={}", self.q)
    }
}
