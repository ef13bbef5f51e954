//! Irreducible `(2l+1)`-dimensional blocks of the boost generators.
//!
//! Basis order is `m = -l, ..., l` ascending. Index order of `Λ_N^M` in the
//! z-basis is `(0, z, z̄, 3)`; the first index is the lower one.

use crate::coupling::index::{ZBasis, I0, I3, IZ, IZB};
use crate::frame::{Frame, FramedMatrix};
use crate::qnum::numeric;
use crate::qnum::{parse_rational, specialize, CQuad, DeformationParameter, Field, QScalar, QnumError};
use crate::report::{ReportEntry, VerificationReport};
use crate::spinor_kit::{build_minkowski_metric, metric_closed_form, SpinorError};
use serde_json::{json, Value};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoostError {
    #[error("invalid block label `{0}`: l must be a nonnegative half-integer")]
    InvalidBlock(String),
    #[error("invalid state l={l}, m={m}")]
    InvalidState { l: String, m: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("central element not scalar")]
    NotScalar,
    #[error(transparent)]
    Spinor(#[from] SpinorError),
    #[error(transparent)]
    Qnum(#[from] QnumError),
}

/// `n/2` as `"n/2"` or an integer string.
pub fn half_string(twice: i64) -> String {
    if twice % 2 == 0 {
        (twice / 2).to_string()
    } else {
        format!("{}/2", twice)
    }
}

fn parse_twice(text: &str) -> Option<i64> {
    let r = parse_rational(text).ok()?;
    let t = r * num_rational::BigRational::from_integer(2.into());
    if !t.is_integer() {
        return None;
    }
    i64::try_from(t.to_integer()).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockLabel {
    twice_l: u32,
}

impl BlockLabel {
    pub fn from_twice(twice_l: u32) -> Self {
        BlockLabel { twice_l }
    }

    pub fn twice_l(self) -> u32 {
        self.twice_l
    }

    pub fn dim(self) -> usize {
        self.twice_l as usize + 1
    }

    /// States in basis order.
    pub fn states(self) -> impl Iterator<Item = BasisState> {
        let tl = self.twice_l as i64;
        (0..=self.twice_l as i64).map(move |k| BasisState { twice_l: tl, twice_m: 2 * k - tl })
    }

    /// All labels `0, 1/2, ..., l_max`.
    pub fn up_to(l_max: BlockLabel) -> impl Iterator<Item = BlockLabel> {
        (0..=l_max.twice_l).map(BlockLabel::from_twice)
    }
}

impl FromStr for BlockLabel {
    type Err = BoostError;
    fn from_str(s: &str) -> Result<Self, BoostError> {
        match parse_twice(s.trim()) {
            Some(t) if t >= 0 && t <= u32::MAX as i64 => Ok(BlockLabel { twice_l: t as u32 }),
            _ => Err(BoostError::InvalidBlock(s.to_string())),
        }
    }
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&half_string(self.twice_l as i64))
    }
}

/// `|l, m⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    twice_l: i64,
    twice_m: i64,
}

impl BasisState {
    pub fn new(block: BlockLabel, twice_m: i64) -> Result<Self, BoostError> {
        let tl = block.twice_l as i64;
        if twice_m.abs() > tl || (tl - twice_m) % 2 != 0 {
            return Err(BoostError::InvalidState { l: block.to_string(), m: half_string(twice_m) });
        }
        Ok(BasisState { twice_l: tl, twice_m })
    }

    pub fn parse(l: &str, m: &str) -> Result<Self, BoostError> {
        let block: BlockLabel = l.parse()?;
        let tm = parse_twice(m).ok_or_else(|| BoostError::InvalidState { l: l.into(), m: m.into() })?;
        Self::new(block, tm)
    }

    pub fn block(self) -> BlockLabel {
        BlockLabel::from_twice(self.twice_l as u32)
    }

    pub fn twice_m(self) -> i64 {
        self.twice_m
    }

    /// Position in the basis of its block.
    pub fn index(self) -> usize {
        ((self.twice_m + self.twice_l) / 2) as usize
    }

    pub fn m_string(self) -> String {
        half_string(self.twice_m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorId {
    L00,
    L30,
    Lz0,
    Lzb0,
    L03,
    L33,
    L0z,
    L0zb,
    Lz3,
    Lzb3,
    L3z,
    L3zb,
    Lzzb,
    Lzbz,
    V3,
    Vz,
    Vzb,
    V3up,
    Vzup,
    Vzbup,
}

impl GeneratorId {
    pub const ALL: [GeneratorId; 20] = [
        GeneratorId::L00,
        GeneratorId::L30,
        GeneratorId::Lz0,
        GeneratorId::Lzb0,
        GeneratorId::L03,
        GeneratorId::L33,
        GeneratorId::L0z,
        GeneratorId::L0zb,
        GeneratorId::Lz3,
        GeneratorId::Lzb3,
        GeneratorId::L3z,
        GeneratorId::L3zb,
        GeneratorId::Lzzb,
        GeneratorId::Lzbz,
        GeneratorId::V3,
        GeneratorId::Vz,
        GeneratorId::Vzb,
        GeneratorId::V3up,
        GeneratorId::Vzup,
        GeneratorId::Vzbup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorId::L00 => "L00",
            GeneratorId::L30 => "L30",
            GeneratorId::Lz0 => "Lz0",
            GeneratorId::Lzb0 => "Lzb0",
            GeneratorId::L03 => "L03",
            GeneratorId::L33 => "L33",
            GeneratorId::L0z => "L0z",
            GeneratorId::L0zb => "L0zb",
            GeneratorId::Lz3 => "Lz3",
            GeneratorId::Lzb3 => "Lzb3",
            GeneratorId::L3z => "L3z",
            GeneratorId::L3zb => "L3zb",
            GeneratorId::Lzzb => "Lzzb",
            GeneratorId::Lzbz => "Lzbz",
            GeneratorId::V3 => "V3",
            GeneratorId::Vz => "Vz",
            GeneratorId::Vzb => "Vzb",
            GeneratorId::V3up => "V3up",
            GeneratorId::Vzup => "Vzup",
            GeneratorId::Vzbup => "Vzbup",
        }
    }

    /// `(N, M)` of `Λ_N^M` in z-basis positions; `None` for velocities.
    pub fn indices(self) -> Option<(usize, usize)> {
        use GeneratorId::*;
        Some(match self {
            L00 => (I0, I0),
            L30 => (I3, I0),
            Lz0 => (IZ, I0),
            Lzb0 => (IZB, I0),
            L03 => (I0, I3),
            L33 => (I3, I3),
            L0z => (I0, IZ),
            L0zb => (I0, IZB),
            Lz3 => (IZ, I3),
            Lzb3 => (IZB, I3),
            L3z => (I3, IZ),
            L3zb => (I3, IZB),
            Lzzb => (IZ, IZB),
            Lzbz => (IZB, IZ),
            _ => return None,
        })
    }

    /// Net change of `2m` produced by the generator.
    pub fn shift(self) -> i64 {
        use GeneratorId::*;
        match self {
            Lz0 | L0z | Lz3 | L3z | Vz | Vzup => 2,
            Lzb0 | L0zb | Lzb3 | L3zb | Vzb | Vzbup => -2,
            _ => 0,
        }
    }
}

impl FromStr for GeneratorId {
    type Err = BoostError;
    fn from_str(s: &str) -> Result<Self, BoostError> {
        let norm = s.trim().replace('Λ', "L").replace("z̄", "zb");
        GeneratorId::ALL
            .iter()
            .copied()
            .find(|g| g.name().eq_ignore_ascii_case(&norm))
            .ok_or_else(|| BoostError::UnknownGenerator(s.to_string()))
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spectrum {
    V3,
    V3Upper,
    Lambda33,
}

fn qp(k: i64) -> QScalar {
    QScalar::q_pow(k)
}

fn div(a: QScalar, b: &QScalar) -> QScalar {
    a.divide(b).expect("nonzero denominator")
}

/// `γ^(l) = (q^(2l+1) + q^(-2l-1)) / Q`.
pub fn gamma_of(block: BlockLabel) -> QScalar {
    let e = block.twice_l as i64 + 1;
    div(qp(e) + qp(-e), &QScalar::big_q())
}

pub fn spectrum_eigen(state: BasisState, which: Spectrum) -> QScalar {
    let g = gamma_of(state.block());
    let tm = state.twice_m;
    match which {
        Spectrum::V3 => qp(-1) * (div(qp(tm), &g) - QScalar::one()),
        Spectrum::V3Upper => -(QScalar::q() * (div(qp(-tm), &g) - QScalar::one())),
        Spectrum::Lambda33 => qp(tm) + qp(-tm) - g,
    }
}

fn alpha1_raw(tl: i64, tm: i64) -> QScalar {
    let g = gamma_of(BlockLabel::from_twice(tl as u32));
    let num = qp(tm - 1) * QScalar::big_q() * g.clone() - qp(2 * tm) - qp(-2);
    div(num, &(g.clone() * g))
}

/// `α^1` (kind 1) and `α^2` (kind 2); `α^2_(l,m) = α^1_(l,m-1)`.
pub fn ladder_alpha(state: BasisState, kind: u8) -> QScalar {
    match kind {
        1 => alpha1_raw(state.twice_l, state.twice_m),
        _ => alpha1_raw(state.twice_l, state.twice_m - 2),
    }
}

fn beta1_raw(tl: i64, tm: i64) -> QScalar {
    let bq = QScalar::big_q();
    div(QScalar::int(4) * qp(2 - 2 * tm), &(bq.clone() * bq)) * alpha1_raw(tl, tm)
}

/// `β^1` (kind 1) and `β^2_(l,m) := β^1_(l,m-1)` (kind 2).
pub fn ladder_beta(state: BasisState, kind: u8) -> QScalar {
    match kind {
        1 => beta1_raw(state.twice_l, state.twice_m),
        _ => beta1_raw(state.twice_l, state.twice_m - 2),
    }
}

/// The printed parenthesization of the `α` amplitudes in terms of `v3`.
pub fn ladder_alpha_printed(state: BasisState, kind: u8) -> QScalar {
    let g = gamma_of(state.block());
    let v3 = spectrum_eigen(state, Spectrum::V3);
    let second = match kind {
        1 => QScalar::one() - QScalar::q_pow(3) * v3.clone(),
        _ => QScalar::one() - QScalar::q_pow(-1) * v3.clone(),
    };
    let inner = qp(-2) * (QScalar::one() + QScalar::q() * v3) * second - qp(-2);
    div(inner, &(g.clone() * g))
}

/// The printed `β^2` with exponent `q^(-4m-4)`.
pub fn ladder_beta2_printed(state: BasisState) -> QScalar {
    let g = gamma_of(state.block());
    let tm = state.twice_m;
    let bq = QScalar::big_q();
    let qg = bq * g;
    let num = qp(3 - tm) * qg.clone() - qp(-2 * tm - 4) - qp(2);
    div(QScalar::int(4) * num, &(qg.clone() * qg))
}

/// Scalar data of one block.
#[derive(Clone)]
struct BlockScalars<T> {
    gamma: T,
    v3: Vec<T>,
    v3up: Vec<T>,
    l33: Vec<T>,
    alpha1: Vec<T>,
    up_amp: Vec<T>,
    q: T,
}

fn block_scalars(block: BlockLabel) -> BlockScalars<QScalar> {
    let states: Vec<BasisState> = block.states().collect();
    let bq = QScalar::big_q();
    let n = states.len();
    BlockScalars {
        gamma: gamma_of(block),
        v3: states.iter().map(|s| spectrum_eigen(*s, Spectrum::V3)).collect(),
        v3up: states.iter().map(|s| spectrum_eigen(*s, Spectrum::V3Upper)).collect(),
        l33: states.iter().map(|s| spectrum_eigen(*s, Spectrum::Lambda33)).collect(),
        alpha1: states[..n - 1].iter().map(|s| ladder_alpha(*s, 1)).collect(),
        up_amp: states[..n - 1].iter().map(|s| div(QScalar::int(2) * qp(1 - s.twice_m), &bq)).collect(),
        q: QScalar::q(),
    }
}

impl BlockScalars<QScalar> {
    fn specialize(&self, p: &DeformationParameter) -> Result<BlockScalars<CQuad>, QnumError> {
        let f = |v: &[QScalar]| v.iter().map(|x| specialize(x, p)).collect::<Result<Vec<_>, _>>();
        Ok(BlockScalars {
            gamma: specialize(&self.gamma, p)?,
            v3: f(&self.v3)?,
            v3up: f(&self.v3up)?,
            l33: f(&self.l33)?,
            alpha1: f(&self.alpha1)?,
            up_amp: f(&self.up_amp)?,
            q: specialize(&self.q, p)?,
        })
    }
}

/// All generators of one block over a field.
#[derive(Clone)]
pub struct BlockGenerators<T> {
    pub block: BlockLabel,
    pub frame: Arc<Frame<T>>,
    pub gamma: T,
    /// `Λ_N^M` at `lambda[N][M]`, z-basis positions.
    pub lambda: Vec<Vec<FramedMatrix<T>>>,
    pub v3: FramedMatrix<T>,
    pub v3up: FramedMatrix<T>,
    pub vz: FramedMatrix<T>,
    pub vzb: FramedMatrix<T>,
    pub vzup: FramedMatrix<T>,
    pub vzbup: FramedMatrix<T>,
}

fn assemble<T: Field>(block: BlockLabel, s: BlockScalars<T>) -> BlockGenerators<T> {
    let n = block.dim();
    let frame = Arc::new(Frame::single(s.alpha1.clone()));
    let fm = |m: crate::linalg::Matrix<T>| FramedMatrix::new(frame.clone(), m);
    let diag = |d: &[T]| fm(crate::linalg::Matrix::diagonal(d.to_vec()));
    let raising = |amp: &dyn Fn(usize) -> T| {
        let mut m = crate::linalg::Matrix::zeros(n, n);
        for k in 0..n - 1 {
            m.set(k + 1, k, amp(k));
        }
        fm(m)
    };
    let id = FramedMatrix::identity(frame.clone());
    let vz = raising(&|_| T::one());
    let vzup = raising(&|k| s.up_amp[k].clone());
    let v3 = diag(&s.v3);
    let v3up = diag(&s.v3up);
    let g = s.gamma.clone();
    let inv_q = s.q.recip().expect("q is nonzero");
    let z0 = vz.scale(&g);
    let oz = vzup.scale(&g);
    let z3 = z0.scale(&s.q);
    let tz = oz.scale(&inv_q).neg();
    let two = id.scale(&T::from_int(2));
    let zero = FramedMatrix::zeros(frame.clone());
    let mut lambda = vec![vec![zero.clone(); 4]; 4];
    lambda[I0][I0] = id.scale(&g);
    lambda[I3][I0] = v3.scale(&g);
    lambda[I0][I3] = v3up.scale(&g);
    lambda[I3][I3] = diag(&s.l33);
    lambda[IZ][I0] = z0.clone();
    lambda[IZB][I0] = z0.adjoint();
    lambda[I0][IZ] = oz.clone();
    lambda[I0][IZB] = oz.adjoint();
    lambda[IZ][I3] = z3.clone();
    lambda[IZB][I3] = z3.adjoint();
    lambda[I3][IZ] = tz.clone();
    lambda[I3][IZB] = tz.adjoint();
    lambda[IZ][IZB] = two.clone();
    lambda[IZB][IZ] = two;
    BlockGenerators {
        block,
        frame,
        gamma: g,
        lambda,
        v3,
        v3up,
        vzb: vz.adjoint(),
        vz,
        vzbup: vzup.adjoint(),
        vzup,
    }
}

impl<T: Field> BlockGenerators<T> {
    pub fn get(&self, gen: GeneratorId) -> &FramedMatrix<T> {
        if let Some((n, m)) = gen.indices() {
            return &self.lambda[n][m];
        }
        match gen {
            GeneratorId::V3 => &self.v3,
            GeneratorId::V3up => &self.v3up,
            GeneratorId::Vz => &self.vz,
            GeneratorId::Vzb => &self.vzb,
            GeneratorId::Vzup => &self.vzup,
            _ => &self.vzbup,
        }
    }

    pub fn l(&self, n: usize, m: usize) -> &FramedMatrix<T> {
        &self.lambda[n][m]
    }
}

/// Generators over `Q(s)`, valid for every `q`.
pub fn block_generators_symbolic(block: BlockLabel) -> BlockGenerators<QScalar> {
    assemble(block, block_scalars(block))
}

/// Generators at a rational `q`, exact in `Q(√q)(i)` with square-root ladder weights.
pub fn block_generators(block: BlockLabel, p: &DeformationParameter) -> Result<BlockGenerators<CQuad>, QnumError> {
    Ok(assemble(block, block_scalars(block).specialize(p)?))
}

/// One generator on one block at `q`.
#[derive(Clone)]
pub struct RepMatrix {
    pub generator: GeneratorId,
    pub block: BlockLabel,
    pub q: DeformationParameter,
    pub matrix: FramedMatrix<CQuad>,
}

impl RepMatrix {
    /// Entry values as `f64` pairs.
    pub fn to_f64(&self) -> Vec<Vec<(f64, f64)>> {
        let n = self.matrix.dim();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if self.matrix.is_entry_zero(r, c) {
                            return (0.0, 0.0);
                        }
                        let w = self.matrix.frame().weight_sq(r, c).re.to_f64().sqrt();
                        let (re, im) = self.matrix.coeffs().get(r, c).to_f64_pair();
                        (re * w, im * w)
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact entry `coeff * sqrt(weight)` rendered as text.
    fn entry_text(&self, r: usize, c: usize) -> (String, String) {
        if self.matrix.is_entry_zero(r, c) {
            return ("0".into(), "0".into());
        }
        let w = self.matrix.frame().weight_sq(r, c).re;
        let x = self.matrix.coeffs().get(r, c);
        let part = |v: &crate::qnum::Quad| {
            if v.is_zero() {
                "0".to_string()
            } else if w.is_one() {
                v.to_string()
            } else {
                format!("({})*sqrt({})", v, w)
            }
        };
        (part(&x.re), part(&x.im))
    }

    /// JSON document with decimal values at `digits` significant digits next to the exact forms.
    pub fn to_json(&self, prec: usize, digits: usize) -> Result<Value, QnumError> {
        let n = self.matrix.dim();
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let (re, im) = self.entry_text(r, c);
                let val = if self.matrix.is_entry_zero(r, c) {
                    (numeric::zero(prec), numeric::zero(prec))
                } else {
                    let w = numeric::evaluate_signed_root(1, &self.matrix.frame().weight_sq(r, c).re, prec)?;
                    let x = self.matrix.coeffs().get(r, c);
                    (numeric::quad_to_float(&x.re, prec) * &w, numeric::quad_to_float(&x.im, prec) * &w)
                };
                entries.push(json!({
                    "re": re,
                    "im": im,
                    "value": [numeric::to_decimal_string(&val.0, digits), numeric::to_decimal_string(&val.1, digits)],
                }));
            }
        }
        let basis: Vec<String> = self.block.states().map(|s| s.m_string()).collect();
        Ok(json!({
            "tensor": self.generator.name(),
            "generator": self.generator.name(),
            "q": self.q.exact_string(),
            "l": self.block.to_string(),
            "shape": [n, n],
            "layout": "row=m' col=m, value <l,m'|X|l,m>",
            "basis": "m ascending",
            "m_values": basis,
            "entries": entries,
        }))
    }
}

pub fn build_generator(gen: GeneratorId, block: BlockLabel, p: &DeformationParameter) -> Result<RepMatrix, BoostError> {
    let g = block_generators(block, p)?;
    Ok(RepMatrix { generator: gen, block, q: p.clone(), matrix: g.get(gen).clone() })
}

/// `-(G^{ij}/G^{00}) V_i V_j` from the z-basis contraction of the metric.
fn velocity_form<T: Field>(g: &BlockGenerators<T>, coeff: &crate::linalg::Matrix<T>, g00: &T) -> Result<FramedMatrix<T>, QnumError> {
    let v = [None, Some(&g.vz), Some(&g.vzb), Some(&g.v3)];
    let scale = g00.recip()?.negated();
    let mut acc = FramedMatrix::zeros(g.frame.clone());
    for a in 1..4 {
        for b in 1..4 {
            let c = coeff.get(a, b);
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&v[a].unwrap().mul(v[b].unwrap()).scale(c));
        }
    }
    Ok(acc.scale(&scale))
}

fn scalar_of<T: Field>(m: &FramedMatrix<T>) -> Result<T, BoostError> {
    let n = m.dim();
    let d = m.coeffs().get(0, 0).clone();
    let ok = m.is_diagonal() && (0..n).all(|i| *m.coeffs().get(i, i) == d);
    if ok {
        Ok(d)
    } else {
        Err(BoostError::NotScalar)
    }
}

/// `|v|_q^2` on the block at `q`; checks `γ^2 (1 - |v|^2) = 1`.
pub fn velocity_length_sq(block: BlockLabel, p: &DeformationParameter) -> Result<CQuad, BoostError> {
    let g = block_generators(block, p)?;
    let metric = build_minkowski_metric(p)?;
    let coeff = ZBasis::exact().contraction_form(&metric.upper);
    let v2 = scalar_of(&velocity_form(&g, &coeff, metric.upper.get(0, 0))?)?;
    let check = g.gamma.times(&g.gamma).times(&CQuad::one().minus(&v2));
    if !check.is_one() {
        return Err(BoostError::NotScalar);
    }
    Ok(v2)
}

/// `|v|_q^2` as a rational function of `q`.
pub fn velocity_length_sq_symbolic(block: BlockLabel) -> Result<QScalar, BoostError> {
    let g = block_generators_symbolic(block);
    let metric = metric_closed_form();
    let coeff = ZBasis::symbolic().contraction_form(&metric.upper);
    scalar_of(&velocity_form(&g, &coeff, metric.upper.get(0, 0))?)
}

/// Residual of an exact identity `lhs = rhs`.
fn resid(lhs: &FramedMatrix<CQuad>, rhs: &FramedMatrix<CQuad>) -> f64 {
    lhs.sub(rhs).max_abs()
}

/// Deviation group names used by the printed-form checks.
pub const DEV_ALPHA: &str = "eq42-43 parenthesization";
pub const DEV_BETA: &str = "eq52 exponent";
pub const DEV_RELATIONS: &str = "eq23-24 right-hand sides";

/// Commutation, linear, quadratic, closed-form, centrality, adjoint and
/// orthogonality relations on a family `Λ_N^M` (z-basis positions), exact.
/// `printed` adds the entries for the printed right-hand sides that deviate.
pub fn relation_entries(
    lambda: &[Vec<FramedMatrix<CQuad>>],
    p: &DeformationParameter,
    context: &[(String, String)],
    printed: bool,
) -> Result<Vec<ReportEntry>, BoostError> {
    let mut out = Vec::new();
    let c = || context.to_vec();
    let mut push = |id: &str, tag: &str, r: f64| out.push(ReportEntry::measured(id, tag, c(), r, 0.0));
    let frame = lambda[I0][I0].frame().clone();
    let zero = FramedMatrix::zeros(frame.clone());
    let id = FramedMatrix::identity(frame);

    let q = CQuad::from_rational(p.q().clone());
    let qi = q.recip()?;
    let q2 = q.times(&q);
    let q2i = q2.recip()?;
    let bq = CQuad::from_rational(p.big_q());
    let dq = q.minus(&qi);
    let quarter_q = bq.times(&CQuad::from_rational(num_rational::BigRational::new(1.into(), 4.into())));
    let l = |n: usize, m: usize| lambda[n][m].clone();
    let (l00, l30, l03, l33) = (l(I0, I0), l(I3, I0), l(I0, I3), l(I3, I3));
    let (lz0, lb0, l0z, l0b) = (l(IZ, I0), l(IZB, I0), l(I0, IZ), l(I0, IZB));
    let (lzb, lbz) = (l(IZ, IZB), l(IZB, IZ));

    push("eq16", "eq16", resid(&l30.mul(&lz0).sub(&lz0.mul(&l30).scale(&q2)), &l00.mul(&lz0).scale(&dq)));
    push("eq17", "eq17", resid(&lz0.commutator(&lb0), &l30.mul(&l30.add(&l00.scale(&qi))).scale(&dq.times(&bq))));
    push("eq18", "eq18", resid(&l30.mul(&l0z).sub(&l0z.mul(&l30).scale(&q2)), &l00.mul(&l0z).scale(&dq)));
    push("eq19", "eq19", resid(&l0z.mul(&lb0).sub(&lb0.mul(&l0z).scale(&q2)), &l30.mul(&lbz).scale(&q2.times(&dq))));
    push("eq20", "eq20", resid(&l03.mul(&l0z).sub(&l0z.mul(&l03).scale(&q2i)), &l00.mul(&l0z).scale(&dq)));
    push("eq21", "eq21", resid(&l0b.commutator(&l0z).scale(&quarter_q), &l03.mul(&l03.sub(&l00.scale(&q))).scale(&dq)));
    push("eq22", "eq22", resid(&l0z.mul(&lz0).sub(&lz0.mul(&l0z).scale(&q2i)), &zero));

    let lhs23 = l33.mul(&lz0).sub(&lz0.mul(&l33).scale(&q2));
    let k23 = qi.times(&dq);
    push("eq23", "eq23", resid(&lhs23, &lz0.mul(&l03.scale(&bq).sub(&l00)).scale(&k23)));
    let lhs24 = l33.mul(&l0z).sub(&l0z.mul(&l33).scale(&q2i));
    let k24 = q.times(&dq);
    push("eq24", "eq24", resid(&lhs24, &l0z.mul(&l30.scale(&bq).add(&l00)).scale(&k24)));
    if printed {
        let r23 = resid(&lhs23, &lz0.mul(&l03.add(&lzb.scale(&quarter_q))).scale(&k23));
        let r24 = resid(&lhs24, &l0z.mul(&l30.sub(&lbz.scale(&bq.recip()?))).scale(&k24.negated()));
        out.push(ReportEntry::measured("eq23-printed", "eq23", c(), r23, 0.0).literal(DEV_RELATIONS));
        out.push(ReportEntry::measured("eq24-printed", "eq24", c(), r24, 0.0).literal(DEV_RELATIONS));
    }
    let mut push = |id: &str, tag: &str, r: f64| out.push(ReportEntry::measured(id, tag, c(), r, 0.0));

    let r25 = resid(&l(IZ, I3), &lz0.scale(&q))
        .max(resid(&l(I3, IZ), &l0z.scale(&qi).neg()))
        .max(resid(&l(IZB, I3), &lb0.scale(&q)))
        .max(resid(&l(I3, IZB), &l0b.scale(&qi).neg()))
        .max(resid(&l33.add(&l03.scale(&qi)), &l00.add(&l30.scale(&q))));
    push("eq25", "eq25", r25);

    let right = l00.scale(&qi).add(&l30);
    push("eq26a", "eq26", resid(&lz0, &lzb.mul(&l0z).mul(&right).scale(&quarter_q)));
    push("eq26b", "eq26", resid(&lb0, &lbz.mul(&l0b).mul(&right).scale(&quarter_q.times(&q2i))));
    let right27 = l00.scale(&q).sub(&l03);
    push("eq27a", "eq27", resid(&l0z, &lbz.mul(&lz0).mul(&right27).scale(&bq.recip()?)));
    push("eq27b", "eq27", resid(&l0b, &lzb.mul(&lb0).mul(&right27).scale(&q2.times(&bq.recip()?))));
    let base = l00.add(&l30.scale(&q));
    push("eq28a", "eq28", resid(&l33.sub(&l30.scale(&q)).mul(&base), &id));
    push("eq28b", "eq28", resid(&l00.scale(&q).sub(&l03).mul(&base), &id.scale(&q)));

    let mut central00: f64 = 0.0;
    let mut central_zb: f64 = 0.0;
    for row in lambda {
        for x in row {
            central00 = central00.max(l00.commutator(x).max_abs());
            central_zb = central_zb.max(lzb.commutator(x).max_abs());
        }
    }
    push("central-L00", "central", central00);
    push("central-Lzzb", "central", central_zb);

    let adj = resid(&lb0, &lz0.adjoint()).max(resid(&l0b, &l0z.adjoint()));
    push("adjoint-pairs", "adjoint", adj);

    let metric = build_minkowski_metric(p)?;
    let zb = ZBasis::exact();
    let (up_c, up_f) = (zb.contraction_form(&metric.upper), zb.to_z_tensor(&metric.upper));
    let (lo_c, lo_f) = (zb.contraction_form(&metric.lower), zb.to_z_tensor(&metric.lower));
    let mut r_up: f64 = 0.0;
    let mut r_lo: f64 = 0.0;
    for x in 0..4 {
        for y in 0..4 {
            let mut acc_up = zero.clone();
            let mut acc_lo = zero.clone();
            for a in 0..4 {
                for b in 0..4 {
                    if !up_c.get(a, b).is_zero() {
                        acc_up = acc_up.add(&lambda[a][x].mul(&lambda[b][y]).scale(up_c.get(a, b)));
                    }
                    if !lo_c.get(a, b).is_zero() {
                        acc_lo = acc_lo.add(&lambda[x][a].mul(&lambda[y][b]).scale(lo_c.get(a, b)));
                    }
                }
            }
            r_up = r_up.max(resid(&acc_up, &id.scale(up_f.get(x, y))));
            r_lo = r_lo.max(resid(&acc_lo, &id.scale(lo_f.get(x, y))));
        }
    }
    push("orthogonality-upper", "eq5", r_up);
    push("orthogonality-lower", "eq5", r_lo);
    Ok(out)
}

/// All relations on one block at `q`, exact.
pub fn verify_relations(block: BlockLabel, p: &DeformationParameter) -> Result<VerificationReport, BoostError> {
    let g = block_generators(block, p)?;
    let mut rep = VerificationReport::new();
    let ls = block.to_string();
    let qs = p.exact_string();
    let c = || crate::report::ctx(&[("l", &ls), ("q", &qs)]);
    let push = |rep: &mut VerificationReport, id: &str, tag: &str, r: f64| {
        rep.push(ReportEntry::measured(id, tag, c(), r, 0.0));
    };
    for e in relation_entries(&g.lambda, p, &c(), true)? {
        rep.push(e);
    }
    let q = CQuad::from_rational(p.q().clone());
    let bq = CQuad::from_rational(p.big_q());
    let vel_adj = resid(&g.vzb, &g.vz.adjoint()).max(resid(&g.vzbup, &g.vzup.adjoint()));
    push(&mut rep, "adjoint-velocities", "adjoint", vel_adj);
    let metric = build_minkowski_metric(p)?;
    let up_c = ZBasis::exact().contraction_form(&metric.upper);
    let v2 = velocity_form(&g, &up_c, metric.upper.get(0, 0))?;
    match scalar_of(&v2) {
        Ok(x) => {
            push(&mut rep, "velocity-length-scalar", "eq29", 0.0);
            let r = g.gamma.times(&g.gamma).times(&CQuad::one().minus(&x)).minus(&CQuad::one());
            push(&mut rep, "gamma-velocity", "eq29", r.abs_sq().to_f64().sqrt());
        }
        Err(_) => rep.push(ReportEntry::boolean("velocity-length-scalar", "eq29", c(), false).with_note("central element not scalar")),
    }

    let mut r_spec: f64 = 0.0;
    let mut r_edge: f64 = 0.0;
    let mut r_beta: f64 = 0.0;
    let mut r_a42: f64 = 0.0;
    let mut r_a43: f64 = 0.0;
    let mut r_b52: f64 = 0.0;
    let mut neg = true;
    let sp = |x: &QScalar| specialize(x, p);
    let tl = block.twice_l as i64;
    let mut top_printed = None;
    for st in block.states() {
        let gam = sp(&gamma_of(block))?;
        let v3 = sp(&spectrum_eigen(st, Spectrum::V3))?;
        let lhs = gam.times(&CQuad::one().plus(&q.times(&v3)));
        let qm = sp(&QScalar::q_pow(st.twice_m))?;
        let l33v = sp(&spectrum_eigen(st, Spectrum::Lambda33))?;
        let alt = q.times(&gam).times(&v3).plus(&sp(&QScalar::q_pow(-st.twice_m))?);
        r_spec = r_spec.max(lhs.minus(&qm).abs_sq().to_f64().sqrt()).max(l33v.minus(&alt).abs_sq().to_f64().sqrt());
        let a1 = sp(&ladder_alpha(st, 1))?;
        let a2 = sp(&ladder_alpha(st, 2))?;
        let b1 = sp(&ladder_beta(st, 1))?;
        let b2 = sp(&ladder_beta(st, 2))?;
        if st.twice_m == tl {
            r_edge = r_edge.max(a1.abs_sq().to_f64().sqrt()).max(b1.abs_sq().to_f64().sqrt());
        }
        if st.twice_m == -tl {
            r_edge = r_edge.max(a2.abs_sq().to_f64().sqrt()).max(b2.abs_sq().to_f64().sqrt());
        }
        if st.twice_m < tl && !p.is_classical() {
            neg &= a1.re.signum() > 0 && b1.re.signum() > 0;
        }
        let bq2 = bq.times(&bq);
        let expect_b1 = CQuad::from_int(4).times(&sp(&QScalar::q_pow(2 - 2 * st.twice_m))?).times(&a1).divide(&bq2)?;
        r_beta = r_beta.max(b1.minus(&expect_b1).abs_sq().to_f64().sqrt());
        let p42 = sp(&ladder_alpha_printed(st, 1))?;
        let p43 = sp(&ladder_alpha_printed(st, 2))?;
        let p52 = sp(&ladder_beta2_printed(st))?;
        if st.twice_m == tl {
            top_printed = Some(p42.re.to_f64());
        }
        r_a42 = r_a42.max(p42.minus(&a1).abs_sq().to_f64().sqrt());
        r_a43 = r_a43.max(p43.minus(&a2).abs_sq().to_f64().sqrt());
        r_b52 = r_b52.max(p52.minus(&b2).abs_sq().to_f64().sqrt());
    }
    push(&mut rep, "spectral-consistency", "eq37", r_spec);
    push(&mut rep, "ladder-edges", "eq47", r_edge);
    push(&mut rep, "beta-alpha-relation", "eq49", r_beta);
    rep.push(ReportEntry::boolean("ladder-positivity", "eq47", c(), neg));
    let mut e42 = ReportEntry::measured("eq42-printed", "eq42", c(), r_a42, 0.0).literal(DEV_ALPHA);
    if let Some(v) = top_printed {
        e42 = e42.with_note(format!("printed alpha1 at m=l: {:.4}", v));
    }
    rep.push(e42);
    rep.push(ReportEntry::measured("eq43-printed", "eq43", c(), r_a43, 0.0).literal(DEV_ALPHA));
    rep.push(ReportEntry::measured("eq52-printed", "eq52", c(), r_b52, 0.0).literal(DEV_BETA));
    Ok(rep.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    fn q(s: &str) -> DeformationParameter {
        s.parse().unwrap()
    }

    fn f(x: &QScalar, p: &str) -> f64 {
        specialize(x, &q(p)).unwrap().re.to_f64()
    }

    #[test]
    fn gamma_values() {
        assert!(gamma_of(BlockLabel::from_twice(0)).is_one());
        assert!((f(&gamma_of(BlockLabel::from_twice(1)), "2") - 1.7).abs() < 1e-15);
    }

    #[test]
    fn alpha_example() {
        let st = BasisState::parse("1/2", "-1/2").unwrap();
        assert!((f(&ladder_alpha(st, 1), "2") - 0.5625 / 2.89).abs() < 1e-15);
        assert!((f(&ladder_beta(st, 1), "2") - 36.0 / 18.0625).abs() < 1e-14);
    }

    #[test]
    fn printed_alpha_top_value() {
        let st = BasisState::parse("1/2", "1/2").unwrap();
        assert!((f(&ladder_alpha_printed(st, 1), "2") + 0.0566).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_states() {
        assert!(BasisState::parse("1/2", "0").is_err());
        assert!(BasisState::parse("1", "2").is_err());
        assert!("1/3".parse::<BlockLabel>().is_err());
        assert!("Lq".parse::<GeneratorId>().is_err());
    }

    #[test]
    fn vz_example() {
        let m = build_generator(GeneratorId::Vz, BlockLabel::from_twice(1), &q("2")).unwrap();
        let v = m.to_f64();
        assert!((v[1][0].0 - 0.441177).abs() < 1e-6);
        assert_eq!(v[0][1], (0.0, 0.0));
    }

    #[test]
    fn velocity_length_half() {
        let v = velocity_length_sq(BlockLabel::from_twice(1), &q("2")).unwrap();
        assert!((v.re.to_f64() - (1.0 - 1.0 / 2.89)).abs() < 1e-15);
    }

    #[test]
    fn relations_hold_exactly() {
        for p in ["1/2", "1", "3/2"] {
            for tl in 0..4 {
                let r = verify_relations(BlockLabel::from_twice(tl), &q(p)).unwrap();
                let bad: Vec<_> = r.failures().map(|e| e.id.clone()).collect();
                assert!(bad.is_empty(), "q={} 2l={} {:?}", p, tl, bad);
            }
        }
    }

    #[test]
    fn printed_forms_deviate() {
        let r = verify_relations(BlockLabel::from_twice(2), &q("2")).unwrap();
        for id in ["eq23-printed", "eq24-printed", "eq42-printed", "eq43-printed", "eq52-printed"] {
            assert_eq!(r.find(id).next().unwrap().verdict, Verdict::ExpectedDeviation, "{}", id);
        }
    }
}
