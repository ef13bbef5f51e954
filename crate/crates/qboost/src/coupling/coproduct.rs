//! `Δ(Λ_N^M) = Λ_N^K ⊗ Λ_K^M` on tensor blocks.

use super::index::ZBasis;
use crate::boost_rep::{block_generators, block_generators_symbolic, half_string, BlockLabel, GeneratorId};
use crate::frame::{Frame, FramedMatrix};
use crate::linalg::Matrix;
use crate::qnum::{CQuad, DeformationParameter, Field, QScalar, QnumError};
use std::fmt;
use std::sync::Arc;

/// `l2 ⊗ l1`, basis `|m2, m1⟩` with `m2` ascending, then `m1` ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorBlock {
    pub l2: BlockLabel,
    pub l1: BlockLabel,
}

impl TensorBlock {
    pub fn new(l2: BlockLabel, l1: BlockLabel) -> Self {
        TensorBlock { l2, l1 }
    }

    pub fn dim(self) -> usize {
        self.l2.dim() * self.l1.dim()
    }

    /// `(2 m2, 2 m1)` in basis order.
    pub fn states(self) -> Vec<(i64, i64)> {
        let mut out = Vec::with_capacity(self.dim());
        for s2 in self.l2.states() {
            for s1 in self.l1.states() {
                out.push((s2.twice_m(), s1.twice_m()));
            }
        }
        out
    }

    pub fn index(self, twice_m2: i64, twice_m1: i64) -> Option<usize> {
        let (t2, t1) = (self.l2.twice_l() as i64, self.l1.twice_l() as i64);
        if twice_m2.abs() > t2 || twice_m1.abs() > t1 || (t2 - twice_m2) % 2 != 0 || (t1 - twice_m1) % 2 != 0 {
            return None;
        }
        let i2 = ((twice_m2 + t2) / 2) as usize;
        let i1 = ((twice_m1 + t1) / 2) as usize;
        Some(i2 * self.l1.dim() + i1)
    }

    /// Allowed `2 l3`, descending.
    pub fn l3_values(self) -> Vec<BlockLabel> {
        let (a, b) = (self.l2.twice_l(), self.l1.twice_l());
        let lo = a.abs_diff(b);
        (lo..=a + b).rev().step_by(2).map(BlockLabel::from_twice).collect()
    }
}

impl fmt::Display for TensorBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {}", self.l2, self.l1)
    }
}

/// Coproduct of a whole family: `out[N][M] = Σ pairing[K][K'] a[N][K] ⊗ b[K'][M]`.
pub fn coproduct_family<T: Field>(
    a: &[Vec<FramedMatrix<T>>],
    b: &[Vec<FramedMatrix<T>>],
    pairing: &Matrix<T>,
) -> Vec<Vec<FramedMatrix<T>>> {
    let mut factors = a[0][0].frame().radicands().to_vec();
    factors.extend(b[0][0].frame().radicands().iter().cloned());
    let frame = Arc::new(Frame::tensor(factors));
    (0..4)
        .map(|n| {
            (0..4)
                .map(|m| {
                    let mut acc = FramedMatrix::zeros(frame.clone());
                    for k in 0..4 {
                        for kk in 0..4 {
                            let w = pairing.get(k, kk);
                            if w.is_zero() {
                                continue;
                            }
                            let term = a[n][k].kron(&b[kk][m]).with_frame(frame.clone());
                            acc = acc.add(&term.scale(w));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// All `Δ(Λ_N^M)` on `l2 ⊗ l1` at `q`.
pub fn coproduct_lambda(block: TensorBlock, p: &DeformationParameter) -> Result<Vec<Vec<FramedMatrix<CQuad>>>, QnumError> {
    let g2 = block_generators(block.l2, p)?;
    let g1 = block_generators(block.l1, p)?;
    Ok(coproduct_family(&g2.lambda, &g1.lambda, &ZBasis::<CQuad>::exact().pairing))
}

pub fn coproduct_lambda_symbolic(block: TensorBlock) -> Vec<Vec<FramedMatrix<QScalar>>> {
    let g2 = block_generators_symbolic(block.l2);
    let g1 = block_generators_symbolic(block.l1);
    coproduct_family(&g2.lambda, &g1.lambda, &ZBasis::<QScalar>::symbolic().pairing)
}

/// `Δ(gen)` on `l2 ⊗ l1`; velocities have no coproduct of their own.
pub fn coproduct_matrix(gen: GeneratorId, block: TensorBlock, p: &DeformationParameter) -> Result<FramedMatrix<CQuad>, QnumError> {
    let (n, m) = gen.indices().ok_or_else(|| QnumError::Parse(format!("no coproduct for {}", gen)))?;
    Ok(coproduct_lambda(block, p)?[n][m].clone())
}

/// Labels `m2, m1` of a basis index, as text.
pub fn state_label(block: TensorBlock, idx: usize) -> (String, String) {
    let (a, b) = block.states()[idx];
    (half_string(a), half_string(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::index::{I0, I3};
    use crate::linalg::jacobi_eigen;

    fn half() -> BlockLabel {
        BlockLabel::from_twice(1)
    }

    #[test]
    fn delta00_spectrum_half_half() {
        let p: DeformationParameter = "2".parse().unwrap();
        let tb = TensorBlock::new(half(), half());
        let d = coproduct_matrix(GeneratorId::L00, tb, &p).unwrap();
        let e = jacobi_eigen(&d.to_real(128).unwrap());
        let mut v: Vec<f64> = e.values.iter().map(crate::qnum::numeric::to_f64).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [1.0, 3.25, 3.25, 3.25];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{:?}", v);
        }
    }

    #[test]
    fn hermitian_and_commuting() {
        let p: DeformationParameter = "3/2".parse().unwrap();
        let tb = TensorBlock::new(half(), BlockLabel::from_twice(2));
        let fam = coproduct_lambda(tb, &p).unwrap();
        let (d00, d30) = (&fam[I0][I0], &fam[I3][I0]);
        assert!(d00.sub(&d00.adjoint()).is_zero());
        assert!(d30.sub(&d30.adjoint()).is_zero());
        assert!(d00.commutator(d30).is_zero());
    }

    #[test]
    fn top_state_annihilated_by_raising() {
        let p: DeformationParameter = "2".parse().unwrap();
        let tb = TensorBlock::new(half(), BlockLabel::from_twice(2));
        let dz = coproduct_matrix(GeneratorId::Lz0, tb, &p).unwrap();
        let top = tb.dim() - 1;
        assert!((0..tb.dim()).all(|r| dz.is_entry_zero(r, top)));
    }

    #[test]
    fn l3_values_descend() {
        let tb = TensorBlock::new(half(), BlockLabel::from_twice(2));
        let v: Vec<String> = tb.l3_values().iter().map(|l| l.to_string()).collect();
        assert_eq!(v, ["3/2", "1/2"]);
    }
}
