//! Conversion between real spatial indices `(0, 1, 2, 3)` and the z-basis `(0, z, z̄, 3)`.
//!
//! Both index positions use `T_z = T_1 + i T_2`, `T_z̄ = T_1 - i T_2`, so a
//! plain index sum becomes `Σ_k A^k B_k = A^0 B_0 + (A^z B_z̄ + A^z̄ B_z)/2 + A^3 B_3`.

use crate::linalg::Matrix;
use crate::qnum::{CQuad, Field, QScalar, Quad};

/// Positions of the z-basis labels.
pub const I0: usize = 0;
pub const IZ: usize = 1;
pub const IZB: usize = 2;
pub const I3: usize = 3;

pub const Z_LABELS: [&str; 4] = ["0", "z", "zb", "3"];

fn half<T: Field>() -> T {
    T::from_rational(num_rational::BigRational::new(1.into(), 2.into()))
}

/// Conversion matrices over a field with a known imaginary unit.
pub struct ZBasis<T> {
    /// `T_z = D T_real`.
    pub forward: Matrix<T>,
    /// `T_real = D⁻¹ T_z`.
    pub backward: Matrix<T>,
    /// `Σ_N A^N B_N = (D A)ᵀ P (D B)`.
    pub pairing: Matrix<T>,
}

impl ZBasis<QScalar> {
    pub fn symbolic() -> Self {
        Self::new(QScalar::i())
    }
}

impl ZBasis<CQuad> {
    pub fn exact() -> Self {
        Self::new(CQuad { re: Quad::zero(), im: Quad::one() })
    }
}

impl<T: Field> ZBasis<T> {
    /// `i` is the imaginary unit of the field.
    pub fn new(i: T) -> Self {
        let one = T::one();
        let zero = T::zero();
        let h = half::<T>();
        let forward = Matrix::from_rows(vec![
            vec![one.clone(), zero.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), one.clone(), i.clone(), zero.clone()],
            vec![zero.clone(), one.clone(), i.negated(), zero.clone()],
            vec![zero.clone(), zero.clone(), zero.clone(), one.clone()],
        ]);
        let mi_half = i.negated().times(&h);
        let backward = Matrix::from_rows(vec![
            vec![one.clone(), zero.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), h.clone(), h.clone(), zero.clone()],
            vec![zero.clone(), mi_half.clone(), mi_half.negated(), zero.clone()],
            vec![zero.clone(), zero.clone(), zero.clone(), one.clone()],
        ]);
        let pairing = Matrix::from_rows(vec![
            vec![one.clone(), zero.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), h.clone(), zero.clone()],
            vec![zero.clone(), h.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), zero.clone(), one],
        ]);
        ZBasis { forward, backward, pairing }
    }

    pub fn to_z_vector(&self, v: &[T]) -> Vec<T> {
        self.forward.apply(v)
    }

    pub fn from_z_vector(&self, v: &[T]) -> Vec<T> {
        self.backward.apply(v)
    }

    /// Both indices converted: `D t Dᵀ`.
    pub fn to_z_tensor(&self, t: &Matrix<T>) -> Matrix<T> {
        self.forward.mul(t).mul(&self.forward.transpose())
    }

    pub fn from_z_tensor(&self, t: &Matrix<T>) -> Matrix<T> {
        self.backward.mul(t).mul(&self.backward.transpose())
    }

    /// Coefficients `c^{ab}` with `Σ_{NM} g^{NM} X_N Y_M = Σ_{ab} c^{ab} X_a Y_b` for z-basis `X, Y`.
    pub fn contraction_form(&self, g: &Matrix<T>) -> Matrix<T> {
        self.pairing.mul(&self.to_z_tensor(g)).mul(&self.pairing)
    }
}

/// Plain sum `Σ_N a^N b_N` evaluated from z-basis components.
pub fn z_contract<T: Field>(a: &[T], b: &[T]) -> T {
    let h = half::<T>();
    a[I0]
        .times(&b[I0])
        .plus(&a[IZ].times(&b[IZB]).plus(&a[IZB].times(&b[IZ])).times(&h))
        .plus(&a[I3].times(&b[I3]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::{parse_expr, QScalar};
    use crate::spinor_kit::metric_closed_form;

    fn c(re: i64, im: i64) -> CQuad {
        CQuad { re: Quad::from_int(re), im: Quad::from_int(im) }
    }

    #[test]
    fn real_unit_vector() {
        let zb = ZBasis::<CQuad>::exact();
        let v = zb.to_z_vector(&[c(0, 0), c(1, 0), c(0, 0), c(0, 0)]);
        assert_eq!(v[IZ], c(1, 0));
        assert_eq!(v[IZB], c(1, 0));
    }

    #[test]
    fn round_trip() {
        let zb = ZBasis::<CQuad>::exact();
        let v = vec![c(2, 1), c(-3, 0), c(0, 5), c(7, -2)];
        assert_eq!(zb.from_z_vector(&zb.to_z_vector(&v)), v);
        let t = Matrix::from_fn(4, 4, |r, k| c(r as i64 - k as i64, (r * k) as i64));
        assert_eq!(zb.from_z_tensor(&zb.to_z_tensor(&t)), t);
    }

    #[test]
    fn contraction_matches_direct_sum() {
        let zb = ZBasis::<CQuad>::exact();
        let a = vec![c(0, 0), c(1, 0), c(0, 1), c(0, 0)];
        let b = vec![c(0, 0), c(1, 0), c(0, 1), c(0, 0)];
        let direct = (0..4).fold(CQuad::zero(), |acc, k| acc.plus(&a[k].times(&b[k])));
        assert_eq!(direct, CQuad::zero());
        assert_eq!(z_contract(&zb.to_z_vector(&a), &zb.to_z_vector(&b)), direct);
    }

    #[test]
    fn metric_spatial_form() {
        let zb = ZBasis::<QScalar>::symbolic();
        let g = metric_closed_form().upper;
        let form = zb.contraction_form(&g);
        let g33 = form.get(I3, I3).clone();
        let ratio = |a, b| form.get(a, b).divide(&g33).unwrap();
        assert_eq!(ratio(IZ, IZB), parse_expr("q/Q").unwrap());
        assert_eq!(ratio(IZB, IZ), parse_expr("q^(-1)/Q").unwrap());
        assert!(form.get(IZ, IZ).is_zero() && form.get(IZB, IZB).is_zero());
    }
}
