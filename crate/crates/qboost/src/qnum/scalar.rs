use super::field::Field;
use super::ratfunc::RatFunc;
use super::QnumError;
use num_rational::BigRational;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact complex rational function of `s = q^(1/2)`: `re(s) + i im(s)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QScalar {
    re: RatFunc,
    im: RatFunc,
}

/// Operation selector for [`qscalar_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Conj,
}

/// Binary or unary arithmetic by name; `Conj` ignores `rhs`.
pub fn qscalar_arith(lhs: &QScalar, rhs: &QScalar, op: ArithOp) -> Result<QScalar, QnumError> {
    Ok(match op {
        ArithOp::Add => lhs.plus(rhs),
        ArithOp::Sub => lhs.minus(rhs),
        ArithOp::Mul => lhs.times(rhs),
        ArithOp::Div => lhs.divide(rhs)?,
        ArithOp::Conj => lhs.conj(),
    })
}

impl QScalar {
    pub fn new(re: RatFunc, im: RatFunc) -> Self {
        QScalar { re, im }
    }

    pub fn real(re: RatFunc) -> Self {
        QScalar { re, im: RatFunc::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::from_int(n)
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn i() -> Self {
        QScalar { re: RatFunc::zero(), im: RatFunc::one() }
    }

    /// `s^k = q^(k/2)`.
    pub fn s_pow(k: i64) -> Self {
        Self::real(RatFunc::s_pow(k))
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::s_pow(2 * k)
    }

    /// `q^(k/2)` for a half-integer exponent given as twice its value.
    pub fn q_half_pow(twice_k: i64) -> Self {
        Self::s_pow(twice_k)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `Q = q + 1/q`.
    pub fn big_q() -> Self {
        Self::q_pow(1).plus(&Self::q_pow(-1))
    }

    /// Substitute `q -> 1/q`.
    pub fn invert_q(&self) -> Self {
        QScalar { re: self.re.invert_variable(), im: self.im.invert_variable() }
    }

    pub fn re(&self) -> &RatFunc {
        &self.re
    }

    pub fn im(&self) -> &RatFunc {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QScalar { re: self.re.scale(k), im: self.im.scale(k) }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.times(self);
        }
        acc
    }

    pub fn abs_sq(&self) -> RatFunc {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn as_constant(&self) -> Option<(BigRational, BigRational)> {
        Some((self.re.as_constant()?, self.im.as_constant()?))
    }
}

impl Field for QScalar {
    fn zero() -> Self {
        QScalar { re: RatFunc::zero(), im: RatFunc::zero() }
    }
    fn one() -> Self {
        QScalar { re: RatFunc::one(), im: RatFunc::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        QScalar { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
    fn minus(&self, o: &Self) -> Self {
        QScalar { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
    fn times(&self, o: &Self) -> Self {
        if self.is_real() && o.is_real() {
            return Self::real(self.re.mul(&o.re));
        }
        QScalar {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    fn negated(&self) -> Self {
        QScalar { re: self.re.neg(), im: self.im.neg() }
    }
    fn recip(&self) -> Result<Self, QnumError> {
        if self.is_real() {
            return Ok(Self::real(self.re.inv()?));
        }
        let n = self.abs_sq().inv()?;
        Ok(QScalar { re: self.re.mul(&n), im: self.im.neg().mul(&n) })
    }
    fn conj(&self) -> Self {
        QScalar { re: self.re.clone(), im: self.im.neg() }
    }
    fn from_rational(r: BigRational) -> Self {
        Self::real(RatFunc::constant(r))
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                self.plus(&o)
            }
        }
        impl<'a> Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                self.plus(o)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                self.minus(&o)
            }
        }
        impl<'a> Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                self.minus(o)
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                self.times(&o)
            }
        }
        impl<'a> Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                self.times(o)
            }
        }
        impl std::ops::Div for $t {
            type Output = $t;
            fn div(self, o: $t) -> $t {
                self.divide(&o).expect("division by an exact zero")
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.negated()
            }
        }
    };
}
pub(crate) use forward_ops;

forward_ops!(QScalar);

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "i*({})", self.im),
            (false, false) => write!(f, "{} + i*({})", self.re, self.im),
        }
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QScalar({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_times_s_is_q() {
        assert_eq!(QScalar::s_pow(1) * QScalar::s_pow(1), QScalar::q());
    }

    #[test]
    fn conj_of_iq() {
        let iq = QScalar::i() * QScalar::q();
        assert_eq!(iq.conj(), -(QScalar::i() * QScalar::q()));
    }

    #[test]
    fn big_q_identity() {
        let alt = (QScalar::q_pow(2) + QScalar::one()) / QScalar::q();
        assert!((QScalar::big_q() - alt).is_zero());
    }

    #[test]
    fn inverting_q() {
        assert_eq!(QScalar::s_pow(3).invert_q(), QScalar::s_pow(-3));
        assert_eq!(QScalar::big_q().invert_q(), QScalar::big_q());
    }

    #[test]
    fn division_by_zero_function() {
        let r = qscalar_arith(&QScalar::one(), &QScalar::zero(), ArithOp::Div);
        assert_eq!(r.unwrap_err().to_string(), "zero denominator");
    }

    #[test]
    fn complex_inverse() {
        let z = QScalar::q() + QScalar::i() * QScalar::s_pow(1);
        assert_eq!(z.times(&z.recip().unwrap()), QScalar::one());
    }
}
