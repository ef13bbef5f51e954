//! `q -> 1` limit of the coupling coefficients.

use super::cg::{exact_columns, CgColumn, CouplingError, SIGN_CONVENTION};
use super::coproduct::TensorBlock;
use crate::boost_rep::BlockLabel;
use crate::linalg::RMatrix;
use crate::qnum::numeric::{self, Float};
use crate::qnum::DeformationParameter;
use crate::report::{ctx, ReportEntry, VerificationReport};
use crate::tolerances;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Offsets `h` in `q = 1 + h`.
pub const LIMIT_OFFSETS: [u32; 3] = [3, 4, 5];

pub struct ClassicalLimit {
    pub block: TensorBlock,
    pub columns: Vec<CgColumn>,
    pub values: RMatrix,
    /// Largest change between the full and the reduced extrapolation.
    pub spread: f64,
}

impl ClassicalLimit {
    pub fn coefficient(&self, l3: BlockLabel, twice_m3: i64, twice_m2: i64, twice_m1: i64) -> f64 {
        let j = self.columns.iter().position(|c| c.l3 == l3 && c.twice_m3 == twice_m3);
        match (j, self.block.index(twice_m2, twice_m1)) {
            (Some(j), Some(r)) => numeric::to_f64(self.values.get(r, j)),
            _ => 0.0,
        }
    }
}

/// Polynomial through `(h_i, y_i)` evaluated at `0`.
pub fn neville_at_zero(h: &[Float], y: &[Float]) -> Float {
    let mut p: Vec<Float> = y.to_vec();
    let n = h.len();
    for k in 1..n {
        for i in 0..n - k {
            let num = &h[i + k] * &p[i] - &h[i] * &p[i + 1];
            p[i] = num / (&h[i + k] - &h[i]);
        }
    }
    p[0].clone()
}

/// Extrapolates the exact coefficients at `q = 1 + 10^-k` to `q = 1`.
pub fn cg_classical_limit(block: TensorBlock, prec: usize) -> Result<ClassicalLimit, CouplingError> {
    let n = block.dim();
    let mut hs = Vec::new();
    let mut samples = Vec::new();
    let mut columns = None;
    for k in LIMIT_OFFSETS {
        let h = BigRational::new(BigInt::one(), BigInt::from(10).pow(k));
        let p = DeformationParameter::new(BigRational::one() + &h)?;
        let cols = exact_columns(block, &p)?;
        let labels: Vec<CgColumn> = cols.iter().map(|(c, _)| *c).collect();
        if let Some(prev) = &columns {
            if *prev != labels {
                return Err(CouplingError::LimitUnstable("column labels change with q".into()));
            }
        }
        columns = Some(labels);
        let mut vals = Vec::with_capacity(n * n);
        for (_, col) in &cols {
            for c in col {
                vals.push(c.to_float(prec)?);
            }
        }
        hs.push(numeric::rat_to_float(&h, prec));
        samples.push(vals);
    }
    let columns = columns.expect("offsets nonempty");
    let mut values = RMatrix::zeros(n, n, prec);
    let mut spread: f64 = 0.0;
    for j in 0..n {
        for r in 0..n {
            let ys: Vec<Float> = samples.iter().map(|s| s[j * n + r].clone()).collect();
            let full = neville_at_zero(&hs, &ys);
            let reduced = neville_at_zero(&hs[1..], &ys[1..]);
            spread = spread.max(numeric::to_f64(&numeric::abs(&(&full - &reduced))));
            values.set(r, j, full);
        }
    }
    if !(spread <= tolerances::CLASSICAL_LIMIT) {
        return Err(CouplingError::LimitUnstable(format!("extrapolation spread {:.3e}", spread)));
    }
    Ok(ClassicalLimit { block, columns, values, spread })
}

fn fact(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// Classical coefficient `⟨j1 m1 j2 m2 | J M⟩` by the Racah sum, as `(sign, square)`; arguments are doubled.
pub fn racah_cg(tj1: i64, tm1: i64, tj2: i64, tm2: i64, tj: i64, tm: i64) -> (i8, BigRational) {
    let zero = (0, BigRational::zero());
    if tm1 + tm2 != tm || tj > tj1 + tj2 || tj < (tj1 - tj2).abs() || tm.abs() > tj || tm1.abs() > tj1 || tm2.abs() > tj2 {
        return zero;
    }
    let h = |x: i64| x / 2;
    let (a, b, c) = (h(tj1 + tj2 - tj), h(tj1 - tm1), h(tj2 + tm2));
    let (d, e) = (h(tj - tj2 + tm1), h(tj - tj1 - tm2));
    let pre = BigRational::new(
        BigInt::from(tj + 1) * fact(h(tj + tj1 - tj2)) * fact(h(tj - tj1 + tj2)) * fact(a),
        fact(h(tj1 + tj2 + tj) + 1),
    ) * BigRational::from_integer(
        fact(h(tj + tm)) * fact(h(tj - tm)) * fact(h(tj1 - tm1)) * fact(h(tj1 + tm1)) * fact(h(tj2 - tm2)) * fact(h(tj2 + tm2)),
    );
    let mut sum = BigRational::zero();
    let lo = 0.max(-d).max(-e);
    let hi = a.min(b).min(c);
    for k in lo..=hi {
        let den = fact(k) * fact(a - k) * fact(b - k) * fact(c - k) * fact(d + k) * fact(e + k);
        let term = BigRational::new(BigInt::one(), den);
        sum = if k % 2 == 0 { sum + term } else { sum - term };
    }
    if sum.is_zero() {
        return zero;
    }
    let sign = if sum.is_negative() { -1 } else { 1 };
    (sign, &sum * &sum * pre)
}

/// Classical table for `l2 ⊗ l1` under the library sign convention, columns as in the q-tables.
pub fn racah_table(block: TensorBlock) -> Vec<(CgColumn, Vec<(i8, BigRational)>)> {
    let states = block.states();
    let (t2, t1) = (block.l2.twice_l() as i64, block.l1.twice_l() as i64);
    let mut out = Vec::new();
    for l3 in block.l3_values() {
        let tl = l3.twice_l() as i64;
        let mut m3 = tl;
        while m3 >= -tl {
            let mut col: Vec<(i8, BigRational)> = states.iter().map(|&(m2, m1)| racah_cg(t2, m2, t1, m1, tl, m3)).collect();
            if let Some(last) = col.iter().rev().find(|(s, _)| *s != 0) {
                if last.0 < 0 {
                    col.iter_mut().for_each(|x| x.0 = -x.0);
                }
            }
            out.push((CgColumn { l3, twice_m3: m3 }, col));
            m3 -= 2;
        }
    }
    out
}

/// Extrapolated limit against the Racah table.
pub fn classical_limit_check(block: TensorBlock, prec: usize) -> Result<VerificationReport, CouplingError> {
    let lim = cg_classical_limit(block, prec)?;
    let oracle = racah_table(block);
    let mut worst: f64 = 0.0;
    for (j, (col, vals)) in oracle.iter().enumerate() {
        if lim.columns[j] != *col {
            return Err(CouplingError::LimitUnstable(format!("column {} mislabelled", j)));
        }
        for (r, (sign, sq)) in vals.iter().enumerate() {
            let want = *sign as f64 * ratio_f64(sq).sqrt();
            worst = worst.max((numeric::to_f64(lim.values.get(r, j)) - want).abs());
        }
    }
    let c = ctx(&[("l2", &block.l2.to_string()), ("l1", &block.l1.to_string()), ("convention", SIGN_CONVENTION)]);
    let mut rep = VerificationReport::new();
    rep.push(
        ReportEntry::measured("classical-limit", "q-to-1", c, worst, tolerances::CLASSICAL_LIMIT)
            .with_note(format!("extrapolation spread {:.1e}", lim.spread)),
    );
    Ok(rep)
}

fn ratio_f64(x: &BigRational) -> f64 {
    numeric::to_f64(&numeric::rat_to_float(x, 64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn racah_known_values() {
        let (s, sq) = racah_cg(1, 1, 1, -1, 0, 0);
        assert_eq!((s, sq), (1, BigRational::new(1.into(), 2.into())));
        let (s, sq) = racah_cg(1, -1, 1, 1, 0, 0);
        assert_eq!((s, sq), (-1, BigRational::new(1.into(), 2.into())));
        let (_, sq) = racah_cg(2, 0, 1, 1, 3, 1);
        assert_eq!(sq, BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn neville_recovers_polynomial() {
        let p = 128;
        let h: Vec<Float> = [1.0, 0.5, 0.25].iter().map(|x| numeric::from_f64_exact(*x, p)).collect();
        let y: Vec<Float> = h.iter().map(|x| x * x * numeric::from_f64_exact(3.0, p) + numeric::from_f64_exact(2.0, p)).collect();
        assert_eq!(numeric::to_f64(&neville_at_zero(&h, &y)), 2.0);
    }

    #[test]
    fn half_half_limit() {
        let b = TensorBlock::new(BlockLabel::from_twice(1), BlockLabel::from_twice(1));
        let r = classical_limit_check(b, 128).unwrap();
        assert_eq!(r.summary().fail, 0, "{}", r.to_pretty());
    }
}
