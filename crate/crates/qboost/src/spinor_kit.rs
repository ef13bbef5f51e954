//! Constant tensors: spinor metric, `R^±`, the Pauli basis, the q-Minkowski
//! metric and the 16×16 Lorentz `ℛ^±`.
//!
//! Layouts: 2-index spinor tensors are `row = first index`. `R^±` rows are
//! `(δ, β)` and columns `(α, γ)`, flattened as `2 * first + second`. `ℛ^±`
//! rows are `(N, M)` and columns `(K, L)`, flattened as `4 * first + second`.

use crate::linalg::Matrix;
use crate::qnum::{specialize, CQuad, DeformationParameter, Field, QScalar, QnumError};
use crate::report::{ctx, ReportEntry, VerificationReport};
use serde_json::{json, Value};
use std::sync::OnceLock;
use thiserror::Error;

pub const LAYOUT_SPINOR: &str = "row=first index, col=second index";
pub const LAYOUT_R: &str = "row=(delta,beta) col=(alpha,gamma), index=2*first+second";
pub const LAYOUT_METRIC: &str = "row=I col=J, order (0,1,2,3)";
pub const LAYOUT_LORENTZ_R: &str = "row=(N,M) col=(K,L), index=4*first+second";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpinorError {
    #[error("metric construction inconsistency: {0}")]
    MetricInconsistency(String),
    #[error(transparent)]
    Qnum(#[from] QnumError),
}

/// `G^{IJ}` and `G_{IJ}`.
#[derive(Clone, PartialEq)]
pub struct MinkowskiMetric<T> {
    pub upper: Matrix<T>,
    pub lower: Matrix<T>,
}

/// `σ^N` (indices `α β̇`) and the barred families `σ̄_{±N}` (indices `α̇ β`).
#[derive(Clone)]
pub struct Pauli<T> {
    pub sigma: Vec<Matrix<T>>,
    pub bar_plus: Vec<Matrix<T>>,
    pub bar_minus: Vec<Matrix<T>>,
}

/// A named tensor ready for serialization.
pub struct SpinorTensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub layout: &'static str,
    pub entries: Vec<CQuad>,
}

impl SpinorTensor {
    pub fn from_matrix(name: &str, shape: Vec<usize>, layout: &'static str, m: &Matrix<CQuad>) -> Self {
        assert_eq!(shape.iter().product::<usize>(), m.entries().len(), "shape does not match entry count");
        SpinorTensor { name: name.to_string(), shape, layout, entries: m.entries().to_vec() }
    }

    pub fn to_json(&self, p: &DeformationParameter) -> Value {
        let entries: Vec<Value> =
            self.entries.iter().map(|x| json!({"re": x.re.to_string(), "im": x.im.to_string()})).collect();
        json!({
            "tensor": self.name,
            "q": p.exact_string(),
            "shape": self.shape,
            "layout": self.layout,
            "entries": entries,
        })
    }
}

fn m2(a: QScalar, b: QScalar, c: QScalar, d: QScalar) -> Matrix<QScalar> {
    Matrix::from_rows(vec![vec![a, b], vec![c, d]])
}

fn zero() -> QScalar {
    QScalar::zero()
}

/// `(ε_{αβ}, ε^{αβ})` with `ε_{12} = -q^(-1/2)`, `ε_{21} = q^(1/2)`.
pub fn spinor_metric_symbolic() -> (Matrix<QScalar>, Matrix<QScalar>) {
    let lower = m2(zero(), -QScalar::s_pow(-1), QScalar::s_pow(1), zero());
    let upper = m2(zero(), QScalar::s_pow(-1), -QScalar::s_pow(1), zero());
    (lower, upper)
}

/// `R^{±δβ}_{αγ} = δ^δ_α δ^β_γ + q^(±1) ε^{δβ} ε_{αγ}`.
pub fn r_matrices_symbolic() -> (Matrix<QScalar>, Matrix<QScalar>) {
    let (el, eu) = spinor_metric_symbolic();
    let build = |k: QScalar| {
        Matrix::from_fn(4, 4, |row, col| {
            let (d, b) = (row / 2, row % 2);
            let (a, g) = (col / 2, col % 2);
            let id = if d == a && b == g { QScalar::one() } else { zero() };
            id + k.clone() * eu.get(d, b).clone() * el.get(a, g).clone()
        })
    };
    (build(QScalar::q()), build(QScalar::q_pow(-1)))
}

/// Weight `diag(q^(-1), q)` of the twisted trace.
fn trace_weight() -> Matrix<QScalar> {
    Matrix::diagonal(vec![QScalar::q_pow(-1), QScalar::q()])
}

/// `Tr(A) = -tr(diag(q^(-1), q) A)`.
pub fn twisted_trace<T: Field>(a: &Matrix<T>, weight: &Matrix<T>) -> T {
    weight.mul(a).trace().negated()
}

pub fn pauli_symbolic() -> Pauli<QScalar> {
    let i = QScalar::i;
    let sigma = vec![
        Matrix::identity(2),
        m2(zero(), QScalar::one(), QScalar::one(), zero()),
        m2(zero(), -i(), i(), zero()),
        m2(QScalar::q(), zero(), zero(), -QScalar::q_pow(-1)),
    ];
    let half = QScalar::ratio(1, 2);
    let s4 = QScalar::s_pow(4);
    let s4p1 = s4.clone() + QScalar::one();
    let bar_plus = vec![
        Matrix::identity(2).scale(&QScalar::int(-1)),
        m2(zero(), -(s4p1.clone() * half.clone() * QScalar::s_pow(-4)), -(s4p1.clone() * half.clone()), zero()),
        m2(
            zero(),
            i() * half.clone() * (QScalar::one() + QScalar::s_pow(-4)),
            -(i() * half.clone() * s4p1),
            zero(),
        ),
        m2(-QScalar::q(), zero(), zero(), QScalar::q_pow(-1)),
    ];
    let bar_minus = bar_plus.iter().map(|m| m.map(|x| x.invert_q().conj())).collect();
    Pauli { sigma, bar_plus, bar_minus }
}

/// Listed closed forms of `G^{IJ}` and `G_{IJ}`.
pub fn metric_closed_form() -> MinkowskiMetric<QScalar> {
    let s = QScalar::s_pow;
    let bq = QScalar::big_q();
    let qm = QScalar::q() - QScalar::q_pow(-1);
    let i = QScalar::i();
    let mut upper = Matrix::zeros(4, 4);
    upper.set(0, 0, -s(-3));
    for k in 1..4 {
        upper.set(k, k, s(1));
    }
    let g12 = -(i.clone() * s(1) * qm.clone() / bq.clone());
    upper.set(1, 2, g12.clone());
    upper.set(2, 1, -g12);
    let mut lower = Matrix::zeros(4, 4);
    lower.set(0, 0, -s(3));
    let q2 = bq.clone() * bq.clone() * QScalar::ratio(1, 4);
    lower.set(1, 1, s(-1) * q2.clone());
    lower.set(2, 2, s(-1) * q2);
    lower.set(3, 3, s(-1));
    let l12 = i * s(-1) * qm * bq * QScalar::ratio(1, 4);
    lower.set(1, 2, l12.clone());
    lower.set(2, 1, -l12);
    MinkowskiMetric { upper, lower }
}

/// `G_-`: the `q -> 1/q` image of `G`, conjugated.
pub fn metric_minus_symbolic() -> MinkowskiMetric<QScalar> {
    let g = metric_closed_form();
    let f = |x: &QScalar| x.invert_q().conj();
    MinkowskiMetric { upper: g.upper.map(f), lower: g.lower.map(f) }
}

/// `G^{IJ} = (1/Q) Tr(σ^I σ̄^J)` with `σ̄^J = σ̄_K G^{KJ}`.
pub fn metric_from_trace<T: Field>(
    sigma: &[Matrix<T>],
    bar: &[Matrix<T>],
    upper: &Matrix<T>,
    weight: &Matrix<T>,
    big_q: &T,
) -> Result<Matrix<T>, QnumError> {
    let inv_q = big_q.recip()?;
    let raised: Vec<Matrix<T>> = (0..4)
        .map(|j| (0..4).fold(Matrix::zeros(2, 2), |acc, k| acc.add(&bar[k].scale(upper.get(k, j)))))
        .collect();
    Ok(Matrix::from_fn(4, 4, |i, j| twisted_trace(&sigma[i].mul(&raised[j]), weight).times(&inv_q)))
}

/// `(1/Q) Tr(σ^I σ̄_N)`, which must be `δ^I_N`.
pub fn trace_pairing<T: Field>(sigma: &[Matrix<T>], bar: &[Matrix<T>], weight: &Matrix<T>, big_q: &T) -> Result<Matrix<T>, QnumError> {
    let inv_q = big_q.recip()?;
    Ok(Matrix::from_fn(4, 4, |i, n| twisted_trace(&sigma[i].mul(&bar[n]), weight).times(&inv_q)))
}

struct SymbolicChecks {
    problems: Vec<String>,
}

/// Exact q-independent consistency of the metric; computed once.
fn symbolic_metric_checks() -> &'static SymbolicChecks {
    static CELL: OnceLock<SymbolicChecks> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut problems = Vec::new();
        let g = metric_closed_form();
        let pauli = pauli_symbolic();
        let w = trace_weight();
        let bq = QScalar::big_q();
        if !g.upper.mul(&g.lower).is_identity() {
            problems.push("upper·lower is not the identity".into());
        }
        if g.upper.adjoint() != g.upper || g.lower.adjoint() != g.lower {
            problems.push("metric is not Hermitian".into());
        }
        match trace_pairing(&pauli.sigma, &pauli.bar_plus, &w, &bq) {
            Ok(m) if m.is_identity() => {}
            _ => problems.push("barred basis is not dual under the twisted trace".into()),
        }
        match metric_from_trace(&pauli.sigma, &pauli.bar_plus, &g.upper, &w, &bq) {
            Ok(m) if m == g.upper => {}
            _ => problems.push("trace formula disagrees with the listed upper metric".into()),
        }
        SymbolicChecks { problems }
    })
}

fn at(m: &Matrix<QScalar>, p: &DeformationParameter) -> Result<Matrix<CQuad>, QnumError> {
    m.try_map(|x| specialize(x, p))
}

pub fn build_spinor_metric(p: &DeformationParameter) -> Result<(Matrix<CQuad>, Matrix<CQuad>), QnumError> {
    let (l, u) = spinor_metric_symbolic();
    Ok((at(&l, p)?, at(&u, p)?))
}

pub fn build_r_matrices(p: &DeformationParameter) -> Result<(Matrix<CQuad>, Matrix<CQuad>), QnumError> {
    let (rp, rm) = r_matrices_symbolic();
    Ok((at(&rp, p)?, at(&rm, p)?))
}

pub fn build_pauli(p: &DeformationParameter) -> Result<Pauli<CQuad>, QnumError> {
    let s = pauli_symbolic();
    let f = |v: &[Matrix<QScalar>]| v.iter().map(|m| at(m, p)).collect::<Result<Vec<_>, _>>();
    Ok(Pauli { sigma: f(&s.sigma)?, bar_plus: f(&s.bar_plus)?, bar_minus: f(&s.bar_minus)? })
}

/// The metric at `q`, after the exact trace-formula, inverse and Hermiticity checks.
pub fn build_minkowski_metric(p: &DeformationParameter) -> Result<MinkowskiMetric<CQuad>, SpinorError> {
    let checks = symbolic_metric_checks();
    if !checks.problems.is_empty() {
        return Err(SpinorError::MetricInconsistency(checks.problems.join("; ")));
    }
    let g = metric_closed_form();
    let out = MinkowskiMetric { upper: at(&g.upper, p)?, lower: at(&g.lower, p)? };
    if !out.upper.mul(&out.lower).is_identity() {
        return Err(SpinorError::MetricInconsistency(format!("upper·lower is not the identity at q={}", p)));
    }
    Ok(out)
}

pub fn build_minkowski_metric_minus(p: &DeformationParameter) -> Result<MinkowskiMetric<CQuad>, QnumError> {
    let g = metric_minus_symbolic();
    Ok(MinkowskiMetric { upper: at(&g.upper, p)?, lower: at(&g.lower, p)? })
}

fn embed<T: Field>(m: &Matrix<T>, slot: usize) -> Matrix<T> {
    let e = Matrix::identity(2);
    match slot {
        0 => m.kron(&e).kron(&e),
        1 => e.kron(m).kron(&e),
        _ => e.kron(&e).kron(m),
    }
}

/// `ℛ^±` from the spinor data: the four `R` factors act on the spinor index
/// slots `(α, α̇, β, β̇)` and are transported to vector indices by the Pauli basis.
pub fn lorentz_r_from<T: Field>(
    r_plus: &Matrix<T>,
    r_minus: &Matrix<T>,
    sigma: &[Matrix<T>],
    eps_upper: &Matrix<T>,
) -> Result<(Matrix<T>, Matrix<T>), QnumError> {
    let s = Matrix::from_fn(4, 4, |r, c| sigma[c].get(r / 2, r % 2).clone());
    let id2 = Matrix::identity(2);
    let raise = id2.kron(eps_upper).kron(&id2).kron(eps_upper);
    let pp = raise.mul(&s.kron(&s));
    let pp_inv = pp.inverse()?;
    let make = |c: [&Matrix<T>; 4]| {
        let b = embed(c[0], 1).mul(&embed(c[1], 0)).mul(&embed(c[2], 2)).mul(&embed(c[3], 1));
        pp_inv.mul(&b).mul(&pp).transpose()
    };
    Ok((make([r_minus, r_minus, r_plus, r_plus]), make([r_plus, r_plus, r_minus, r_minus])))
}

pub fn build_lorentz_r(p: &DeformationParameter) -> Result<(Matrix<CQuad>, Matrix<CQuad>), QnumError> {
    let (rp, rm) = build_r_matrices(p)?;
    let (_, eu) = build_spinor_metric(p)?;
    let pauli = build_pauli(p)?;
    lorentz_r_from(&rp, &rm, &pauli.sigma, &eu)
}

fn vec16(m: &Matrix<CQuad>) -> Vec<CQuad> {
    m.entries().to_vec()
}

fn vec_residual(a: &[CQuad], b: &[CQuad]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.minus(y).abs_sq().to_f64().sqrt()).fold(0.0, f64::max)
}

/// One entry per identity, exact at `q`.
pub fn check_spinor_identities(p: &DeformationParameter) -> Result<VerificationReport, QnumError> {
    let mut rep = VerificationReport::new();
    let qs = p.exact_string();
    let c = || ctx(&[("q", &qs)]);
    let exact = |id: &str, tag: &str, r: f64| ReportEntry::measured(id, tag, c(), r, 0.0);

    let (el, eu) = build_spinor_metric(p)?;
    rep.push(exact("spinor-metric-contraction", "spinor-metric", el.mul(&eu).sub(&Matrix::identity(2)).max_abs()));

    let (rp, rm) = build_r_matrices(p)?;
    let id4 = Matrix::identity(4);
    rep.push(exact("r-inverse", "r-matrix", rp.mul(&rm).sub(&id4).max_abs()));
    let qq = CQuad::from_rational(p.q().clone());
    let q2 = qq.times(&qq);
    for (name, r, k) in [("plus", &rp, q2.clone()), ("minus", &rm, q2.recip()?)] {
        let h = r.add(&id4.scale(&k)).mul(&r.sub(&id4));
        rep.push(exact(&format!("r-hecke-{}", name), "hecke", h.max_abs()));
        let id2 = Matrix::identity(2);
        let r12 = r.kron(&id2);
        let r23 = id2.kron(r);
        let yb = r12.mul(&r23).mul(&r12).sub(&r23.mul(&r12).mul(&r23));
        rep.push(exact(&format!("r-yang-baxter-{}", name), "yang-baxter", yb.max_abs()));
    }

    let pauli = build_pauli(p)?;
    rep.push(exact("sigma-bar-zero", "sigma-bar", pauli.bar_plus[0].add(&pauli.sigma[0]).max_abs()));
    let w = at(&trace_weight(), p)?;
    let bq = CQuad::from_rational(p.big_q());
    let mut r_bar: f64 = 0.0;
    let mut r_sig: f64 = 0.0;
    for n in 0..4 {
        let expect = if n == 0 { bq.clone() } else { CQuad::zero() };
        r_bar = r_bar.max(w.mul(&pauli.bar_plus[n]).trace().plus(&expect).abs_sq().to_f64().sqrt());
        r_sig = r_sig.max(w.mul(&pauli.sigma[n]).trace().minus(&expect).abs_sq().to_f64().sqrt());
    }
    rep.push(exact("sigma-bar-trace", "sigma-bar", r_bar));
    rep.push(exact("sigma-trace", "sigma", r_sig));
    let pairing = trace_pairing(&pauli.sigma, &pauli.bar_plus, &w, &bq)?;
    rep.push(exact("sigma-dual-pairing", "metric-trace", pairing.sub(&Matrix::identity(4)).max_abs()));

    match build_minkowski_metric(p) {
        Ok(g) => {
            rep.push(exact("metric-inverse", "metric", g.upper.mul(&g.lower).sub(&Matrix::identity(4)).max_abs()));
            let herm = g.upper.adjoint().sub(&g.upper).max_abs().max(g.lower.adjoint().sub(&g.lower).max_abs());
            rep.push(exact("metric-hermitian", "metric", herm));
            let traced = metric_from_trace(&pauli.sigma, &pauli.bar_plus, &g.upper, &w, &bq)?;
            rep.push(exact("metric-trace-formula", "metric-trace", traced.sub(&g.upper).max_abs()));
            if p.is_classical() {
                let classical = Matrix::diagonal(vec![CQuad::from_int(-1), CQuad::one(), CQuad::one(), CQuad::one()]);
                rep.push(exact("metric-classical", "metric", g.upper.sub(&classical).max_abs()));
            }
            let gm = build_minkowski_metric_minus(p)?;
            let (lp, lm) = build_lorentz_r(p)?;
            for (name, l, metric) in [("plus", &lp, &g), ("minus", &lm, &gm)] {
                let up = vec16(&metric.upper);
                let lo = vec16(&metric.lower);
                let r_up = vec_residual(&l.apply(&up), &up);
                let r_lo = vec_residual(&l.transpose().apply(&lo), &lo);
                rep.push(exact(&format!("lorentz-r-symmetrization-{}", name), "lorentz-r", r_up.max(r_lo)));
            }
            let id16 = Matrix::identity(16);
            for (name, l, a, b) in [("plus", &lp, q2.clone(), q2.recip()?), ("minus", &lm, q2.recip()?, q2.clone())] {
                let cubic = l.add(&id16.scale(&a)).mul(&l.add(&id16.scale(&b))).mul(&l.sub(&id16));
                rep.push(exact(&format!("lorentz-r-cubic-hecke-{}", name), "cubic-hecke", cubic.max_abs()));
            }
        }
        Err(e) => rep.push(ReportEntry::boolean("metric-construction", "metric", c(), false).with_note(e.to_string())),
    }
    Ok(rep.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    fn at_q(q: &str) -> DeformationParameter {
        q.parse().unwrap()
    }

    #[test]
    fn classical_spinor_metric() {
        let (l, _) = build_spinor_metric(&at_q("1")).unwrap();
        assert_eq!(l.get(0, 1), &CQuad::from_int(-1));
        assert_eq!(l.get(1, 0), &CQuad::from_int(1));
    }

    #[test]
    fn eps12_at_four() {
        let (l, _) = build_spinor_metric(&at_q("4")).unwrap();
        assert_eq!(l.get(0, 1), &CQuad::from_rational(num_rational::BigRational::new((-1).into(), 2.into())));
    }

    #[test]
    fn r_plus_equals_r_minus_classically() {
        let (rp, rm) = build_r_matrices(&at_q("1")).unwrap();
        assert!(rp == rm);
    }

    #[test]
    fn symbolic_r_identities() {
        let (rp, rm) = r_matrices_symbolic();
        assert!(rp.mul(&rm).is_identity());
        let id = Matrix::identity(4);
        let h = rp.add(&id.scale(&QScalar::q_pow(2))).mul(&rp.sub(&id));
        assert!(h.is_zero());
    }

    #[test]
    fn metric_checks_hold_symbolically() {
        assert!(symbolic_metric_checks().problems.is_empty(), "{:?}", symbolic_metric_checks().problems);
    }

    #[test]
    fn g00_at_two() {
        let g = build_minkowski_metric(&at_q("2")).unwrap();
        let v = g.upper.get(0, 0).re.to_f64();
        assert!((v + 2f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn classical_lorentz_r_squares_to_one() {
        let (lp, lm) = build_lorentz_r(&at_q("1")).unwrap();
        assert!(lp.mul(&lp).is_identity());
        assert!(lm.mul(&lm).is_identity());
    }

    #[test]
    fn identities_pass_at_sample_points() {
        for q in ["3/2", "1", "1/2"] {
            let r = check_spinor_identities(&at_q(q)).unwrap();
            let bad: Vec<_> = r.entries.iter().filter(|e| e.verdict != Verdict::Pass).map(|e| e.id.clone()).collect();
            assert!(bad.is_empty(), "q={} failing {:?}", q, bad);
        }
    }
}
