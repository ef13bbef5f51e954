use super::field::Field;
use super::param::DeformationParameter;
use super::quad::{specialize, Quad};
use super::scalar::QScalar;
use super::QnumError;
use std::fmt;

/// `sign * sqrt(radicand)` with a real radicand.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SqrtScalar {
    sign: i8,
    radicand: QScalar,
}

impl SqrtScalar {
    pub fn new(sign: i8, radicand: QScalar) -> Result<Self, QnumError> {
        if !radicand.is_real() {
            return Err(QnumError::ComplexRadicand);
        }
        let sign = if radicand.is_zero() { 0 } else { sign.signum() };
        let radicand = if sign == 0 { QScalar::zero() } else { radicand };
        Ok(SqrtScalar { sign, radicand })
    }

    /// The nonnegative root of `r`.
    pub fn root(r: QScalar) -> Result<Self, QnumError> {
        Self::new(1, r)
    }

    pub fn zero() -> Self {
        SqrtScalar { sign: 0, radicand: QScalar::zero() }
    }

    pub fn one() -> Self {
        SqrtScalar { sign: 1, radicand: QScalar::one() }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &QScalar {
        &self.radicand
    }

    /// Exact square, `sign^2 * radicand`.
    pub fn square(&self) -> QScalar {
        if self.sign == 0 {
            QScalar::zero()
        } else {
            self.radicand.clone()
        }
    }

    pub fn negated(&self) -> Self {
        SqrtScalar { sign: -self.sign, radicand: self.radicand.clone() }
    }

    /// Radicand evaluated exactly at `q`, signed.
    pub fn specialize(&self, p: &DeformationParameter) -> Result<(i8, Quad), QnumError> {
        let r = specialize(&self.radicand, p)?;
        if r.re.signum() < 0 {
            return Err(QnumError::NegativeRadicand);
        }
        Ok((self.sign, r.re))
    }
}

/// Product of signed radicals: radicands multiply, signs multiply.
pub fn sqrt_mul(a: &SqrtScalar, b: &SqrtScalar) -> SqrtScalar {
    let sign = a.sign * b.sign;
    if sign == 0 {
        return SqrtScalar::zero();
    }
    SqrtScalar { sign, radicand: a.radicand.times(&b.radicand) }
}

impl fmt::Display for SqrtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "sqrt({})", self.radicand),
            _ => write!(f, "-sqrt({})", self.radicand),
        }
    }
}

impl fmt::Debug for SqrtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SqrtScalar({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv_qbigq() -> QScalar {
        QScalar::one() / (QScalar::q() * QScalar::big_q())
    }

    #[test]
    fn square_of_root() {
        let x = SqrtScalar::root(inv_qbigq()).unwrap();
        assert_eq!(sqrt_mul(&x, &x), SqrtScalar::root(inv_qbigq().times(&inv_qbigq())).unwrap());
        assert_eq!(x.square(), inv_qbigq());
    }

    #[test]
    fn signs_multiply() {
        let r = QScalar::q();
        let a = SqrtScalar::new(-1, r.clone()).unwrap();
        let p = sqrt_mul(&a, &a);
        assert_eq!(p.sign(), 1);
        assert_eq!(p.radicand(), &(r.clone() * r));
    }

    #[test]
    fn eq77_eq78_radicands() {
        let bq = QScalar::big_q();
        let den = bq.clone() * bq.clone() - QScalar::one();
        let a = SqrtScalar::root(QScalar::q_pow(-1) * bq.clone() / den.clone()).unwrap();
        let b = SqrtScalar::root(QScalar::q() * bq.clone() / den.clone()).unwrap();
        let expect = (bq.clone() / den.clone()).pow(2);
        assert_eq!(sqrt_mul(&a, &b).radicand(), &expect);
    }

    #[test]
    fn complex_radicand_rejected() {
        assert!(SqrtScalar::new(1, QScalar::i()).is_err());
    }
}
