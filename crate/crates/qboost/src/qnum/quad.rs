use super::field::Field;
use super::param::DeformationParameter;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::{forward_ops, QScalar};
use super::QnumError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// Exact element `a + b sqrt(D)` of a real quadratic field; `D` is absent for plain rationals.
#[derive(Clone)]
pub struct Quad {
    a: BigRational,
    b: BigRational,
    d: Option<Arc<BigInt>>,
}

impl Quad {
    pub(crate) fn new(a: BigRational, b: BigRational, d: Option<Arc<BigInt>>) -> Self {
        let d = if b.is_zero() { None } else { d };
        Quad { a, b, d }
    }

    pub fn rational(a: BigRational) -> Self {
        Quad { a, b: BigRational::zero(), d: None }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> (&BigRational, Option<&BigInt>) {
        (&self.b, self.d.as_deref())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    fn join(&self, o: &Quad) -> Option<Arc<BigInt>> {
        match (&self.d, &o.d) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "mixing values from different quadratic fields");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    fn disc(&self) -> BigRational {
        self.d.as_deref().map(|d| BigRational::from_integer(d.clone())).unwrap_or_else(BigRational::zero)
    }

    /// Exact sign.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // a and b*sqrt(D) have opposite signs: compare squares
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * self.disc();
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        match &self.d {
            None => a,
            Some(d) => a + self.b.to_f64().unwrap_or(f64::NAN) * d.to_f64().unwrap_or(f64::NAN).sqrt(),
        }
    }
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialEq for Quad {
    fn eq(&self, o: &Quad) -> bool {
        self.a == o.a && self.b == o.b && (self.b.is_zero() || self.d == o.d)
    }
}
impl Eq for Quad {}

impl Field for Quad {
    fn zero() -> Self {
        Quad::rational(BigRational::zero())
    }
    fn one() -> Self {
        Quad::rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        Quad::new(&self.a + &o.a, &self.b + &o.b, self.join(o))
    }
    fn minus(&self, o: &Self) -> Self {
        Quad::new(&self.a - &o.a, &self.b - &o.b, self.join(o))
    }
    fn times(&self, o: &Self) -> Self {
        let d = self.join(o);
        if self.b.is_zero() {
            return Quad::new(&self.a * &o.a, &self.a * &o.b, d);
        }
        if o.b.is_zero() {
            return Quad::new(&self.a * &o.a, &self.b * &o.a, d);
        }
        let dd = BigRational::from_integer((**d.as_ref().unwrap()).clone());
        Quad::new(&self.a * &o.a + &self.b * &o.b * dd, &self.a * &o.b + &self.b * &o.a, d)
    }
    fn negated(&self) -> Self {
        Quad { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
    fn recip(&self) -> Result<Self, QnumError> {
        if self.is_zero() {
            return Err(QnumError::ZeroDenominator);
        }
        if self.b.is_zero() {
            return Ok(Quad::rational(self.a.recip()));
        }
        let n = &self.a * &self.a - &self.b * &self.b * self.disc();
        Ok(Quad::new(&self.a / &n, -&self.b / &n, self.d.clone()))
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_rational(r: BigRational) -> Self {
        Quad::rational(r)
    }
}

forward_ops!(Quad);

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.d {
            None => write!(f, "{}", self.a),
            Some(d) if self.a.is_zero() => write!(f, "({})*sqrt({})", self.b, d),
            Some(d) => write!(f, "{} + ({})*sqrt({})", self.a, self.b, d),
        }
    }
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quad({})", self)
    }
}

/// Complex extension of [`Quad`]: exact values at a fixed rational `q`.
#[derive(Clone, PartialEq, Eq)]
pub struct CQuad {
    pub re: Quad,
    pub im: Quad,
}

impl CQuad {
    pub fn real(re: Quad) -> Self {
        CQuad { re, im: Quad::zero() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn abs_sq(&self) -> Quad {
        self.re.times(&self.re).plus(&self.im.times(&self.im))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Field for CQuad {
    fn zero() -> Self {
        CQuad::real(Quad::zero())
    }
    fn one() -> Self {
        CQuad::real(Quad::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        CQuad { re: self.re.plus(&o.re), im: self.im.plus(&o.im) }
    }
    fn minus(&self, o: &Self) -> Self {
        CQuad { re: self.re.minus(&o.re), im: self.im.minus(&o.im) }
    }
    fn times(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return CQuad::real(self.re.times(&o.re));
        }
        CQuad {
            re: self.re.times(&o.re).minus(&self.im.times(&o.im)),
            im: self.re.times(&o.im).plus(&self.im.times(&o.re)),
        }
    }
    fn negated(&self) -> Self {
        CQuad { re: self.re.negated(), im: self.im.negated() }
    }
    fn recip(&self) -> Result<Self, QnumError> {
        if self.im.is_zero() {
            return Ok(CQuad::real(self.re.recip()?));
        }
        let n = self.abs_sq().recip()?;
        Ok(CQuad { re: self.re.times(&n), im: self.im.negated().times(&n) })
    }
    fn conj(&self) -> Self {
        CQuad { re: self.re.clone(), im: self.im.negated() }
    }
    fn from_rational(r: BigRational) -> Self {
        CQuad::real(Quad::rational(r))
    }
}

forward_ops!(CQuad);

impl fmt::Display for CQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + i*({})", self.re, self.im)
        }
    }
}

impl fmt::Debug for CQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CQuad({})", self)
    }
}

fn eval_poly(p: &Poly, s: &Quad) -> Quad {
    p.eval_with(s, Quad::zero(), |c| Quad::rational(c.clone()), |a, b| a.times(b), |a, b| a.plus(b))
}

/// Substitute `s = q^(1/2)` into a real rational function.
pub fn specialize_real(f: &RatFunc, p: &DeformationParameter) -> Result<Quad, QnumError> {
    if let Some(c) = f.as_constant() {
        return Ok(Quad::rational(c));
    }
    let den = eval_poly(f.den(), p.s());
    if den.is_zero() {
        return Err(QnumError::Pole);
    }
    Ok(eval_poly(f.num(), p.s()).times(&den.recip()?))
}

/// Exact value of a symbolic scalar at `q`.
pub fn specialize(x: &QScalar, p: &DeformationParameter) -> Result<CQuad, QnumError> {
    Ok(CQuad { re: specialize_real(x.re(), p)?, im: specialize_real(x.im(), p)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(q: &str) -> DeformationParameter {
        q.parse().unwrap()
    }

    #[test]
    fn s_squares_to_q() {
        let p = at("5/4");
        let s = p.s().clone();
        assert_eq!(s.times(&s), Quad::rational(BigRational::new(5.into(), 4.into())));
    }

    #[test]
    fn sign_of_surd_difference() {
        let p = at("2");
        // sqrt(2) - 7/5 > 0, sqrt(2) - 3/2 < 0
        let x = p.s().minus(&Quad::rational(BigRational::new(7.into(), 5.into())));
        let y = p.s().minus(&Quad::rational(BigRational::new(3.into(), 2.into())));
        assert_eq!(x.signum(), 1);
        assert_eq!(y.signum(), -1);
    }

    #[test]
    fn pole_is_reported() {
        let f = QScalar::one() / (QScalar::q() - QScalar::one());
        assert_eq!(specialize(&f, &at("1")).unwrap_err(), QnumError::Pole);
    }

    #[test]
    fn specialized_g00() {
        let p = at("4");
        let g = specialize(&QScalar::s_pow(-3).negated(), &p).unwrap();
        assert_eq!(g, CQuad::from_rational(BigRational::new((-1).into(), 8.into())));
    }
}
