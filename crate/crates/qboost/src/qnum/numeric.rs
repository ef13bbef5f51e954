//! Multiprecision evaluation of exact values.

use super::field::Field;
use super::param::DeformationParameter;
use super::quad::{specialize, CQuad, Quad};
use super::scalar::QScalar;
use super::sqrt::SqrtScalar;
use super::QnumError;
use dashu_base::{Sign, SquareRoot};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::cmp::Ordering;
use std::fmt;

pub type Float = FBig<HalfEven, 2>;

pub const DEFAULT_PRECISION: usize = 128;

fn to_ibig(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == num_bigint::Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub fn int_to_float(n: &BigInt, prec: usize) -> Float {
    Float::from(to_ibig(n)).with_precision(prec).value()
}

pub fn rat_to_float(r: &BigRational, prec: usize) -> Float {
    let n = int_to_float(r.numer(), prec);
    let d = int_to_float(r.denom(), prec);
    n / d
}

pub fn quad_to_float(x: &Quad, prec: usize) -> Float {
    let a = rat_to_float(x.rational_part(), prec);
    match x.surd_part() {
        (_, None) => a,
        (b, Some(d)) => a + rat_to_float(b, prec) * int_to_float(d, prec).sqrt(),
    }
}

pub fn zero(prec: usize) -> Float {
    Float::ZERO.with_precision(prec).value()
}

pub fn from_f64_exact(x: f64, prec: usize) -> Float {
    Float::try_from(x).expect("finite").with_precision(prec).value()
}

pub fn to_f64(x: &Float) -> f64 {
    x.to_f64().value()
}

pub fn abs(x: &Float) -> Float {
    if x.sign() == Sign::Negative {
        -x.clone()
    } else {
        x.clone()
    }
}

pub fn signum(x: &Float) -> i8 {
    if x.repr().is_zero() {
        0
    } else if x.sign() == Sign::Negative {
        -1
    } else {
        1
    }
}

pub fn sqrt(x: &Float) -> Float {
    x.sqrt()
}

pub fn cmp(a: &Float, b: &Float) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Decimal rendering with `digits` significant digits, deterministic for a fixed precision.
pub fn to_decimal_string(x: &Float, digits: usize) -> String {
    if x.repr().is_zero() {
        return "0".to_string();
    }
    let d = x.to_decimal().value().with_precision(digits).value();
    format!("{}", d)
}

/// Complex number at a fixed binary precision.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn real(re: Float) -> Self {
        let prec = re.precision();
        Complex { re, im: zero(prec) }
    }

    pub fn from_cquad(x: &CQuad, prec: usize) -> Self {
        Complex { re: quad_to_float(&x.re, prec), im: quad_to_float(&x.im, prec) }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }

    pub fn abs(&self) -> Float {
        (&self.re * &self.re + &self.im * &self.im).sqrt()
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_f64_pair();
        write!(f, "({:e} + {:e}i)", a, b)
    }
}

/// Value of a symbolic scalar at `q` to `prec` bits.
pub fn evaluate(x: &QScalar, p: &DeformationParameter, prec: usize) -> Result<Complex, QnumError> {
    Ok(Complex::from_cquad(&specialize(x, p)?, prec))
}

/// Value of a signed radical at `q` to `prec` bits.
pub fn evaluate_sqrt(x: &SqrtScalar, p: &DeformationParameter, prec: usize) -> Result<Float, QnumError> {
    let r = specialize(x.radicand(), p)?;
    if !r.im.is_zero() {
        return Err(QnumError::NegativeRadicand);
    }
    evaluate_signed_root(x.sign(), &r.re, prec)
}

/// `sign * sqrt(r)` for an exact radicand.
pub fn evaluate_signed_root(sign: i8, r: &Quad, prec: usize) -> Result<Float, QnumError> {
    if r.signum() < 0 {
        return Err(QnumError::NegativeRadicand);
    }
    let v = quad_to_float(r, prec + 8).sqrt().with_precision(prec).value();
    Ok(match sign {
        0 => zero(prec),
        s if s < 0 => -v,
        _ => v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;


    fn at(q: &str) -> DeformationParameter {
        q.parse().unwrap()
    }

    #[test]
    fn big_q_at_two() {
        let v = evaluate(&QScalar::big_q(), &at("2"), 128).unwrap();
        assert_eq!(to_f64(&v.re), 2.5);
    }

    #[test]
    fn gamma_half_at_two() {
        let g = (QScalar::q_pow(2) + QScalar::q_pow(-2)) / QScalar::big_q();
        let v = evaluate(&g, &at("2"), 128).unwrap();
        assert!((to_f64(&v.re) - 1.7).abs() < 1e-15);
    }

    #[test]
    fn pole_at_one() {
        let f = QScalar::one() / (QScalar::q() - QScalar::one());
        assert_eq!(evaluate(&f, &at("1"), 64).unwrap_err().to_string(), "pole at evaluation point");
    }

    #[test]
    fn negative_radicand() {
        let x = SqrtScalar::new(1, QScalar::int(-1)).unwrap();
        assert_eq!(evaluate_sqrt(&x, &at("2"), 64).unwrap_err().to_string(), "negative radicand");
    }

    #[test]
    fn decimal_rendering() {
        let v = rat_to_float(&BigRational::new(1.into(), 3.into()), 128);
        assert!(to_decimal_string(&v, 10).starts_with("0.3333333333"));
    }
}
