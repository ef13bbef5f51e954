//! Dense matrices over an exact [`Field`] and real multiprecision matrices
//! with a cyclic Jacobi eigensolver.

use crate::qnum::numeric::{self, Float};
use crate::qnum::{CQuad, Field, QnumError};
use std::fmt;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.into_iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.get(k, c);
                    if !b.is_zero() {
                        let i = r * o.cols + c;
                        out.data[i] = out.data[i].plus(&a.times(b));
                    }
                }
            }
        }
        out
    }

    pub fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.plus(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.minus(b))
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x.times(k))
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Field, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |r, c| {
            self.get(r / o.rows, c / o.cols).times(o.get(r % o.rows, c % o.cols))
        })
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc.plus(self.get(i, i)))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).fold(T::zero(), |acc, c| acc.plus(&self.get(r, c).times(&v[c]))))
            .collect()
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self, QnumError> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(QnumError::ZeroDenominator)?;
            if piv != col {
                for c in 0..n {
                    a.data.swap(piv * n + c, col * n + c);
                    inv.data.swap(piv * n + c, col * n + c);
                }
            }
            let p = a.get(col, col).recip()?;
            for c in 0..n {
                a.data[col * n + c] = a.data[col * n + c].times(&p);
                inv.data[col * n + c] = inv.data[col * n + c].times(&p);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in 0..n {
                    let x = a.get(col, c).times(&f);
                    a.data[r * n + c] = a.data[r * n + c].minus(&x);
                    let y = inv.get(col, c).times(&f);
                    inv.data[r * n + c] = inv.data[r * n + c].minus(&y);
                }
            }
        }
        Ok(inv)
    }
}

impl Matrix<CQuad> {
    /// Largest entry magnitude, in double precision.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().filter(|x| !x.is_zero()).map(|x| x.abs_sq().to_f64().abs().sqrt()).fold(0.0, f64::max)
    }
}

impl<T: Field + fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Real dense matrix at a fixed binary precision.
#[derive(Clone)]
pub struct RMatrix {
    n_rows: usize,
    n_cols: usize,
    prec: usize,
    data: Vec<Float>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: usize) -> Self {
        RMatrix { n_rows: rows, n_cols: cols, prec, data: vec![numeric::zero(prec); rows * cols] }
    }

    pub fn identity(n: usize, prec: usize) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m.set(i, i, numeric::from_f64_exact(1.0, prec));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, prec: usize, mut f: impl FnMut(usize, usize) -> Float) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c).with_precision(prec).value());
            }
        }
        RMatrix { n_rows: rows, n_cols: cols, prec, data }
    }

    pub fn rows(&self) -> usize {
        self.n_rows
    }

    pub fn cols(&self) -> usize {
        self.n_cols
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn get(&self, r: usize, c: usize) -> &Float {
        &self.data[r * self.n_cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Float) {
        self.data[r * self.n_cols + c] = v;
    }

    pub fn mul(&self, o: &RMatrix) -> RMatrix {
        assert_eq!(self.n_cols, o.n_rows, "shape mismatch in product");
        RMatrix::from_fn(self.n_rows, o.n_cols, self.prec, |r, c| {
            (0..self.n_cols).fold(numeric::zero(self.prec), |acc, k| acc + self.get(r, k) * o.get(k, c))
        })
    }

    pub fn sub(&self, o: &RMatrix) -> RMatrix {
        RMatrix::from_fn(self.n_rows, self.n_cols, self.prec, |r, c| self.get(r, c) - o.get(r, c))
    }

    pub fn add(&self, o: &RMatrix) -> RMatrix {
        RMatrix::from_fn(self.n_rows, self.n_cols, self.prec, |r, c| self.get(r, c) + o.get(r, c))
    }

    pub fn scale(&self, k: &Float) -> RMatrix {
        RMatrix::from_fn(self.n_rows, self.n_cols, self.prec, |r, c| self.get(r, c) * k)
    }

    pub fn transpose(&self) -> RMatrix {
        RMatrix::from_fn(self.n_cols, self.n_rows, self.prec, |r, c| self.get(c, r).clone())
    }

    pub fn column(&self, c: usize) -> Vec<Float> {
        (0..self.n_rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| numeric::to_f64(&numeric::abs(x))).fold(0.0, f64::max)
    }

    /// Largest `|a_rc - a_cr|`.
    pub fn asymmetry(&self) -> f64 {
        self.sub(&self.transpose()).max_abs()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.n_rows).map(|r| (0..self.n_cols).map(|c| numeric::to_f64(self.get(r, c))).collect()).collect()
    }

    fn off_diagonal_norm_sq(&self) -> Float {
        let mut s = numeric::zero(self.prec);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                if r != c {
                    s += self.get(r, c) * self.get(r, c);
                }
            }
        }
        s
    }

    fn norm_sq(&self) -> Float {
        self.data.iter().fold(numeric::zero(self.prec), |acc, x| acc + x * x)
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_f64() {
            writeln!(f, "{:?}", row)?;
        }
        Ok(())
    }
}

/// Eigen-decomposition `A = V diag(w) V^T` of a real symmetric matrix.
pub struct SymmetricEigen {
    pub values: Vec<Float>,
    pub vectors: RMatrix,
}

/// Cyclic Jacobi rotations until the off-diagonal mass is below `2^(-2 prec)` of the total.
pub fn jacobi_eigen(a: &RMatrix) -> SymmetricEigen {
    assert_eq!(a.rows(), a.cols(), "eigen-decomposition of non-square matrix");
    let n = a.rows();
    let prec = a.precision();
    let work = prec + 32;
    let mut m = RMatrix::from_fn(n, n, work, |r, c| a.get(r, c).clone());
    let mut v = RMatrix::identity(n, work);
    let one = numeric::from_f64_exact(1.0, work);
    let two = numeric::from_f64_exact(2.0, work);
    let total = m.norm_sq();
    let threshold = if numeric::signum(&total) == 0 {
        numeric::zero(work)
    } else {
        total * Float::from_parts(1.into(), -2 * prec as isize).with_precision(work).value()
    };
    for _sweep in 0..64 {
        if numeric::cmp(&m.off_diagonal_norm_sq(), &threshold) != std::cmp::Ordering::Greater {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q).clone();
                if numeric::signum(&apq) == 0 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (&two * &apq);
                let t = {
                    let denom = numeric::abs(&theta) + numeric::sqrt(&(&theta * &theta + &one));
                    let t = &one / denom;
                    if numeric::signum(&theta) < 0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = &one / numeric::sqrt(&(&t * &t + &one));
                let s = &t * &c;
                for k in 0..n {
                    let mkp = m.get(k, p).clone();
                    let mkq = m.get(k, q).clone();
                    m.set(k, p, &c * &mkp - &s * &mkq);
                    m.set(k, q, &s * &mkp + &c * &mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k).clone();
                    let mqk = m.get(q, k).clone();
                    m.set(p, k, &c * &mpk - &s * &mqk);
                    m.set(q, k, &s * &mpk + &c * &mqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p).clone();
                    let vkq = v.get(k, q).clone();
                    v.set(k, p, &c * &vkp - &s * &vkq);
                    v.set(k, q, &s * &vkp + &c * &vkq);
                }
            }
        }
    }
    let values = (0..n).map(|i| m.get(i, i).clone().with_precision(prec).value()).collect();
    let vectors = RMatrix::from_fn(n, n, prec, |r, c| v.get(r, c).clone());
    SymmetricEigen { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::{CQuad, DeformationParameter, QScalar};

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(vec![
            vec![QScalar::q(), QScalar::int(1)],
            vec![QScalar::int(2), QScalar::big_q()],
        ]);
        assert!(m.mul(&m.inverse().unwrap()).is_identity());
    }

    #[test]
    fn kron_shape_and_entry() {
        let p: DeformationParameter = "2".parse().unwrap();
        let a = Matrix::<CQuad>::identity(2);
        let b = Matrix::from_rows(vec![vec![CQuad::from_int(1), CQuad::from_int(2)], vec![CQuad::from_int(3), CQuad::from_int(4)]]);
        let k = a.kron(&b);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.get(3, 2), &CQuad::from_int(3));
        assert!(!p.is_classical());
    }

    #[test]
    fn jacobi_reconstructs() {
        let vals = [[2.0, 1.0, 0.5], [1.0, 3.0, 0.25], [0.5, 0.25, 1.0]];
        let a = RMatrix::from_fn(3, 3, 128, |r, c| numeric::from_f64_exact(vals[r][c], 128));
        let e = jacobi_eigen(&a);
        let d = RMatrix::from_fn(3, 3, 128, |r, c| if r == c { e.values[r].clone() } else { numeric::zero(128) });
        let back = e.vectors.mul(&d).mul(&e.vectors.transpose());
        assert!(back.sub(&a).max_abs() < 1e-30);
        let orth = e.vectors.transpose().mul(&e.vectors).sub(&RMatrix::identity(3, 128));
        assert!(orth.max_abs() < 1e-30);
    }
}
