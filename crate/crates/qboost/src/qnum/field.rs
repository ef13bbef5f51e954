use super::QnumError;
use num_rational::BigRational;
use std::fmt;

/// Exact coefficient field shared by the symbolic layer (`QScalar`) and its
/// specialization at a fixed rational `q` (`CQuad`).
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn recip(&self) -> Result<Self, QnumError>;
    fn conj(&self) -> Self;
    fn from_rational(r: BigRational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    fn divide(&self, o: &Self) -> Result<Self, QnumError> {
        Ok(self.times(&o.recip()?))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}
