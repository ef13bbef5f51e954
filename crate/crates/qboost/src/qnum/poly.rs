use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense univariate polynomial in `s` with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(v: BigRational) -> Self {
        Poly::from_coeffs(vec![v])
    }

    /// `v * s^k`
    pub fn monomial(v: BigRational, k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k];
        c.push(v);
        Poly::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::from_coeffs(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.c.last()
    }

    /// Lowest power of `s` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let v = match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            c.push(v);
        }
        Poly::from_coeffs(c)
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|x| x * k).collect() }
    }

    /// Multiply by `s^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    /// Divide by `s^k`; the caller guarantees the low coefficients vanish.
    pub fn unshift(&self, k: usize) -> Poly {
        debug_assert!(self.c.iter().take(k).all(|x| x.is_zero()));
        Poly::from_coeffs(self.c.iter().skip(k).cloned().collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.c[dd].recip();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] * &lead_inv;
            if coef.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] -= &coef * dj;
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = o.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation in any ring that can absorb rational constants.
    pub fn eval_with<T, M, A>(&self, x: &T, zero: T, lift: impl Fn(&BigRational) -> T, mul: M, add: A) -> T
    where
        M: Fn(&T, &T) -> T,
        A: Fn(&T, &T) -> T,
    {
        let mut acc = zero;
        for c in self.c.iter().rev() {
            acc = add(&mul(&acc, x), &lift(c));
        }
        acc
    }

    /// Least common multiple of coefficient denominators, used to print integer forms.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, first: bool, c: &BigRational, k: usize) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { "-" } else { "+" })?;
    }
    let show_coeff = k == 0 || !a.is_one();
    if show_coeff {
        if a.is_integer() {
            write!(f, "{}", a)?;
        } else {
            write!(f, "({})", a)?;
        }
    }
    match k {
        0 => Ok(()),
        1 => write!(f, "{}s", if show_coeff { "*" } else { "" }),
        _ => write!(f, "{}s^{}", if show_coeff { "*" } else { "" }, k),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            fmt_term(f, first, c, k)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_shared_factor() {
        // (s - 1)(s + 2) and (s - 1)(s - 3)
        let a = Poly::from_ints(&[-2, 1, 1]);
        let b = Poly::from_ints(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-1, 1]));
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = Poly::from_ints(&[5, 0, 3, 1, 7]);
        let d = Poly::from_ints(&[1, 2, 1]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn display_reads_naturally() {
        assert_eq!(Poly::from_ints(&[1, 0, -2, 1]).to_string(), "s^3 - 2*s^2 + 1");
    }
}
