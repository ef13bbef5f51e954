use super::poly::Poly;
use super::QnumError;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Real rational function `num(s) / den(s)` kept in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }

    pub fn constant(v: BigRational) -> Self {
        RatFunc { num: Poly::constant(v), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// `s^k` for any integer `k`.
    pub fn s_pow(k: i64) -> Self {
        let m = Poly::monomial(BigRational::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            RatFunc { num: m, den: Poly::one() }
        } else {
            RatFunc { num: Poly::one(), den: m }
        }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self, QnumError> {
        if den.is_zero() {
            return Err(QnumError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        // strip common powers of s before the general gcd
        let k = num.valuation().unwrap().min(den.valuation().unwrap());
        let (num, den) = if k > 0 { (num.unshift(k), den.unshift(k)) } else { (num, den) };
        let g = if den.degree() == Some(0) { Poly::one() } else { num.gcd(&den) };
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead = den.leading().unwrap().recip();
        RatFunc { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The constant value when the function does not depend on `s`.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.num.degree() == Some(0) && self.den.degree() == Some(0) {
            Some(&self.num.coeffs()[0] / &self.den.coeffs()[0])
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        Self::reduce(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        Self::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, k: &BigRational) -> RatFunc {
        if k.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFunc, QnumError> {
        if self.is_zero() {
            return Err(QnumError::ZeroDenominator);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, QnumError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: u32) -> RatFunc {
        let mut acc = RatFunc::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact value at a rational `s`; a vanishing denominator is a pole.
    /// Substitute `s -> 1/s`, i.e. `q -> 1/q`.
    pub fn invert_variable(&self) -> RatFunc {
        let x = RatFunc::s_pow(-1);
        let ev = |p: &Poly| p.eval_with(&x, RatFunc::zero(), |c| RatFunc::constant(c.clone()), |a, b| a.mul(b), |a, b| a.add(b));
        ev(&self.num).div(&ev(&self.den)).expect("denominator stays nonzero under s -> 1/s")
    }

    pub fn eval_rational(&self, s: &BigRational) -> Result<BigRational, QnumError> {
        let d = self.den.eval_rational(s);
        if d.is_zero() {
            return Err(QnumError::Pole);
        }
        Ok(self.num.eval_rational(s) / d)
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let single = |p: &Poly| p.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
        let wrap = |p: &Poly| if single(p) { format!("{}", p) } else { format!("({})", p) };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_squared_over_s_is_s() {
        let a = RatFunc::s_pow(2).mul(&RatFunc::s_pow(-1));
        assert_eq!(a, RatFunc::s_pow(1));
    }

    #[test]
    fn canonical_form_is_representation_independent() {
        // (s^2 - 1)/(2s - 2) == (s + 1)/2
        let a = RatFunc::new(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[-2, 2])).unwrap();
        let b = RatFunc::new(Poly::from_ints(&[1, 1]), Poly::from_ints(&[2])).unwrap();
        assert_eq!(a, b);
        assert!(a.den().leading().unwrap().is_one());
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(RatFunc::new(Poly::one(), Poly::zero()), Err(QnumError::ZeroDenominator));
    }
}
