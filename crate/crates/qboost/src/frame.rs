//! Exact matrices with square-root weights.
//!
//! Entry `(r, c)` of a [`FramedMatrix`] has the value
//! `coeff(r, c) * prod_f sqrt(prod_{j in [min, max)} radicand_f[j])`,
//! where for every tensor factor `f` the range runs between the factor-local
//! row and column indices. Ladder operators whose amplitudes are square roots
//! of adjacent-state radicands are then represented exactly, and products of
//! such matrices stay in the same form.

use crate::linalg::{Matrix, RMatrix};
use crate::qnum::numeric::{self, Float};
use crate::qnum::{specialize, CQuad, DeformationParameter, Field, QScalar, QnumError};
use std::sync::Arc;

#[derive(Clone, PartialEq)]
pub struct Frame<T> {
    dims: Vec<usize>,
    radicands: Vec<Vec<T>>,
    // prefix[f][a][b] = product of radicands[f][a..b] for a <= b
    prefix: Vec<Vec<Vec<T>>>,
}

impl<T: Field> Frame<T> {
    /// One factor of dimension `radicands.len() + 1`.
    pub fn single(radicands: Vec<T>) -> Self {
        Self::tensor(vec![radicands])
    }

    pub fn tensor(factors: Vec<Vec<T>>) -> Self {
        let dims = factors.iter().map(|r| r.len() + 1).collect();
        let prefix = factors
            .iter()
            .map(|rad| {
                let n = rad.len() + 1;
                (0..n)
                    .map(|a| {
                        let mut row = vec![T::one(); n];
                        for b in (a + 1)..n {
                            row[b] = row[b - 1].times(&rad[b - 1]);
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        Frame { dims, radicands: factors, prefix }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn radicands(&self) -> &[Vec<T>] {
        &self.radicands
    }

    fn split(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for f in (0..self.dims.len()).rev() {
            out[f] = i % self.dims[f];
            i /= self.dims[f];
        }
        out
    }

    fn span(&self, f: usize, a: usize, b: usize) -> &T {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        &self.prefix[f][lo][hi]
    }

    /// Square of the weight of entry `(r, c)`.
    pub fn weight_sq(&self, r: usize, c: usize) -> T {
        let (rs, cs) = (self.split(r), self.split(c));
        (0..self.dims.len()).fold(T::one(), |acc, f| acc.times(self.span(f, rs[f], cs[f])))
    }

    /// Rational factor produced when weights `(r, k)` and `(k, c)` combine into weight `(r, c)`.
    fn overlap(&self, rs: &[usize], ks: &[usize], cs: &[usize]) -> T {
        let mut acc = T::one();
        for f in 0..self.dims.len() {
            let (a0, a1) = (rs[f].min(ks[f]), rs[f].max(ks[f]));
            let (b0, b1) = (ks[f].min(cs[f]), ks[f].max(cs[f]));
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo < hi {
                acc = acc.times(&self.prefix[f][lo][hi]);
            }
        }
        acc
    }
}

#[derive(Clone)]
pub struct FramedMatrix<T> {
    frame: Arc<Frame<T>>,
    coeffs: Matrix<T>,
}

impl<T: Field> FramedMatrix<T> {
    pub fn new(frame: Arc<Frame<T>>, coeffs: Matrix<T>) -> Self {
        let n = frame.dim();
        assert_eq!((coeffs.rows(), coeffs.cols()), (n, n), "coefficients do not fit the frame");
        FramedMatrix { frame, coeffs }
    }

    pub fn zeros(frame: Arc<Frame<T>>) -> Self {
        let n = frame.dim();
        FramedMatrix { frame, coeffs: Matrix::zeros(n, n) }
    }

    pub fn identity(frame: Arc<Frame<T>>) -> Self {
        let n = frame.dim();
        FramedMatrix { frame, coeffs: Matrix::identity(n) }
    }

    pub fn frame(&self) -> &Arc<Frame<T>> {
        &self.frame
    }

    pub fn coeffs(&self) -> &Matrix<T> {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.rows()
    }

    fn same_frame(&self, o: &Self) {
        assert!(Arc::ptr_eq(&self.frame, &o.frame) || *self.frame == *o.frame, "frame mismatch");
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_frame(o);
        let n = self.dim();
        let f = &self.frame;
        let idx: Vec<Vec<usize>> = (0..n).map(|i| f.split(i)).collect();
        let mut out: Matrix<T> = Matrix::zeros(n, n);
        for r in 0..n {
            for k in 0..n {
                let a = self.coeffs.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = o.coeffs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let term = a.times(b).times(&f.overlap(&idx[r], &idx[k], &idx[c]));
                    out.set(r, c, out.get(r, c).plus(&term));
                }
            }
        }
        FramedMatrix { frame: self.frame.clone(), coeffs: out }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_frame(o);
        FramedMatrix { frame: self.frame.clone(), coeffs: self.coeffs.add(&o.coeffs) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_frame(o);
        FramedMatrix { frame: self.frame.clone(), coeffs: self.coeffs.sub(&o.coeffs) }
    }

    pub fn scale(&self, k: &T) -> Self {
        FramedMatrix { frame: self.frame.clone(), coeffs: self.coeffs.scale(k) }
    }

    pub fn neg(&self) -> Self {
        self.scale(&T::one().negated())
    }

    pub fn adjoint(&self) -> Self {
        FramedMatrix { frame: self.frame.clone(), coeffs: self.coeffs.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        FramedMatrix { frame: self.frame.clone(), coeffs: self.coeffs.transpose() }
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Tensor product; the frames are concatenated, `self` most significant.
    pub fn kron(&self, o: &Self) -> Self {
        let mut factors = self.frame.radicands.clone();
        factors.extend(o.frame.radicands.iter().cloned());
        FramedMatrix { frame: Arc::new(Frame::tensor(factors)), coeffs: self.coeffs.kron(&o.coeffs) }
    }

    /// Re-attach the coefficients to an equal frame shared with other matrices.
    pub fn with_frame(self, frame: Arc<Frame<T>>) -> Self {
        assert!(*frame == *self.frame, "frame mismatch");
        FramedMatrix { frame, coeffs: self.coeffs }
    }

    pub fn is_entry_zero(&self, r: usize, c: usize) -> bool {
        self.coeffs.get(r, c).is_zero() || self.frame.weight_sq(r, c).is_zero()
    }

    pub fn is_zero(&self) -> bool {
        let n = self.dim();
        (0..n).all(|r| (0..n).all(|c| self.is_entry_zero(r, c)))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|r| (0..n).all(|c| r == c || self.is_entry_zero(r, c)))
    }

    /// Exact `|value(r, c)|^2`.
    pub fn entry_abs_sq(&self, r: usize, c: usize) -> T {
        let x = self.coeffs.get(r, c);
        x.times(&x.conj()).times(&self.frame.weight_sq(r, c))
    }

    /// Inverse of a diagonal matrix.
    pub fn diagonal_inverse(&self) -> Result<Self, QnumError> {
        assert!(self.is_diagonal(), "diagonal_inverse on a non-diagonal matrix");
        let n = self.dim();
        let d = (0..n).map(|i| self.coeffs.get(i, i).recip()).collect::<Result<Vec<_>, _>>()?;
        Ok(FramedMatrix { frame: self.frame.clone(), coeffs: Matrix::diagonal(d) })
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> FramedMatrix<U> {
        let frame = Frame::tensor(self.frame.radicands.iter().map(|r| r.iter().map(&f).collect()).collect());
        FramedMatrix { frame: Arc::new(frame), coeffs: self.coeffs.map(f) }
    }

    pub fn try_map<U: Field>(&self, f: impl Fn(&T) -> Result<U, QnumError>) -> Result<FramedMatrix<U>, QnumError> {
        let rads = self
            .frame
            .radicands
            .iter()
            .map(|r| r.iter().map(&f).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FramedMatrix { frame: Arc::new(Frame::tensor(rads)), coeffs: self.coeffs.try_map(f)? })
    }
}

impl FramedMatrix<QScalar> {
    pub fn specialize(&self, p: &DeformationParameter) -> Result<FramedMatrix<CQuad>, QnumError> {
        self.try_map(|x| specialize(x, p))
    }
}

impl FramedMatrix<CQuad> {
    /// Largest entry magnitude, in double precision.
    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                if !self.is_entry_zero(r, c) {
                    m = m.max(self.entry_abs_sq(r, c).re.to_f64().abs().sqrt());
                }
            }
        }
        m
    }

    /// Entry values at `prec` bits; fails on a complex coefficient or negative radicand.
    pub fn to_real(&self, prec: usize) -> Result<RMatrix, QnumError> {
        let n = self.dim();
        let mut out = RMatrix::zeros(n, n, prec);
        for r in 0..n {
            for c in 0..n {
                let x = self.coeffs.get(r, c);
                if x.is_zero() {
                    continue;
                }
                if !x.im.is_zero() {
                    return Err(QnumError::ComplexRadicand);
                }
                let w = numeric::evaluate_signed_root(1, &self.frame.weight_sq(r, c).re, prec + 16)?;
                let v: Float = numeric::quad_to_float(&x.re, prec + 16) * w;
                out.set(r, c, v.with_precision(prec).value());
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(rads: Vec<CQuad>) -> FramedMatrix<CQuad> {
        let n = rads.len() + 1;
        let frame = Arc::new(Frame::single(rads));
        let mut m = Matrix::zeros(n, n);
        for k in 0..n - 1 {
            m.set(k + 1, k, CQuad::one());
        }
        FramedMatrix::new(frame, m)
    }

    #[test]
    fn raising_times_lowering_is_diagonal_radicand() {
        let r = vec![CQuad::from_int(2), CQuad::from_int(3)];
        let up = ladder(r.clone());
        let prod = up.adjoint().mul(&up);
        assert!(prod.is_diagonal());
        assert_eq!(prod.coeffs().get(0, 0), &r[0]);
        assert_eq!(prod.coeffs().get(1, 1), &r[1]);
        assert!(prod.coeffs().get(2, 2).is_zero());
    }

    #[test]
    fn two_step_raising_weight() {
        let up = ladder(vec![CQuad::from_int(2), CQuad::from_int(3)]);
        let up2 = up.mul(&up);
        assert_eq!(up2.coeffs().get(2, 0), &CQuad::one());
        assert_eq!(up2.entry_abs_sq(2, 0), CQuad::from_int(6));
    }

    #[test]
    fn numeric_value_matches_root() {
        let up = ladder(vec![CQuad::from_int(2)]);
        let m = up.to_real(128).unwrap();
        assert!((numeric::to_f64(m.get(1, 0)) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kron_weights_multiply() {
        let a = ladder(vec![CQuad::from_int(2)]);
        let b = ladder(vec![CQuad::from_int(5)]);
        let k = a.kron(&b);
        assert_eq!(k.entry_abs_sq(3, 0), CQuad::from_int(10));
        let back = k.adjoint().mul(&k);
        assert_eq!(back.coeffs().get(0, 0), &CQuad::from_int(10));
    }
}
