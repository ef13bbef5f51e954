//! Acceptance criteria, one line each.

use qboost::boost_rep::{gamma_of, ladder_alpha, ladder_alpha_printed, ladder_beta, velocity_length_sq_symbolic, DEV_ALPHA, DEV_BETA};
use qboost::coupling::cg::{cg_decompose, symbolic_squares};
use qboost::coupling::classical::cg_classical_limit;
use qboost::coupling::coproduct::TensorBlock;
use qboost::coupling::tables::{embedded_golden, normalization_sums, paper_tables, DEV_KETS};
use qboost::linalg::{Matrix, RMatrix};
use qboost::qnum::{numeric, parse_expr, specialize, Field};
use qboost::spinor_kit::{build_lorentz_r, build_minkowski_metric, build_minkowski_metric_minus, build_r_matrices, metric_closed_form, metric_from_trace, pauli_symbolic};
use qboost::{run_suite, verify_relations, BasisState, BlockLabel, CQuad, DeformationParameter, QScalar, SuiteConfig, Verdict, VerificationReport};
use rand::{Rng, SeedableRng};
use std::time::{Duration, Instant};

const PREC: usize = 128;
const UNITARITY_TOL: f64 = 1e-20;
const CLASSICAL_TOL: f64 = 1e-6;
const PRINTED_ALPHA_TOP: f64 = -0.0566;

type Outcome = Result<String, String>;

fn q(s: &str) -> DeformationParameter {
    s.parse().expect("valid q")
}

fn label(twice: u32) -> BlockLabel {
    BlockLabel::from_twice(twice)
}

fn samples() -> Vec<DeformationParameter> {
    ["1/2", "5/4", "2"].iter().map(|s| q(s)).collect()
}

fn expr(s: &str) -> QScalar {
    parse_expr(s).expect("valid expression")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, budget: Duration) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e <= budget, || format!("runtime {:.2?} exceeds {:.0?}", e, budget))
}

fn no_failures(rep: &VerificationReport, what: &str) -> Result<(), String> {
    let bad: Vec<String> = rep.failures().map(|e| format!("{} [{}]", e.id, e.context_string())).collect();
    ensure(bad.is_empty(), || format!("{}: {}", what, bad.join("; ")))
}

fn require_exact(rep: &VerificationReport, ids: &[&str], what: &str) -> Result<(), String> {
    for id in ids {
        let found: Vec<_> = rep.find(id).collect();
        ensure(!found.is_empty(), || format!("{}: no `{}` entries", what, id))?;
        for e in found {
            ensure(e.verdict == Verdict::Pass && e.residual.is_none_or(|r| r == 0.0), || {
                format!("{}: `{}` residual {:?} [{}]", what, id, e.residual, e.context_string())
            })?;
        }
    }
    Ok(())
}

fn metric_reproduction() -> Outcome {
    let t = Instant::now();
    let g = metric_closed_form();
    let s = |k: i64| QScalar::s_pow(k);
    let bq = QScalar::big_q();
    let dq = QScalar::q() - QScalar::q_pow(-1);
    let i = QScalar::i();
    let listed = [
        ((0, 0), -s(-3)),
        ((1, 1), s(1)),
        ((2, 2), s(1)),
        ((3, 3), s(1)),
        ((1, 2), -(i.clone() * s(1) * dq.clone() / bq.clone())),
        ((2, 1), i.clone() * s(1) * dq / bq),
    ];
    for r in 0..4 {
        for c in 0..4 {
            let want = listed.iter().find(|(k, _)| *k == (r, c)).map(|(_, v)| v.clone()).unwrap_or_else(QScalar::zero);
            ensure((g.upper.get(r, c).clone() - want).is_zero(), || format!("G^{}{} differs from the listed value", r, c))?;
        }
    }
    let pauli = pauli_symbolic();
    let w = Matrix::diagonal(vec![QScalar::q_pow(-1), QScalar::q()]);
    let traced = metric_from_trace(&pauli.sigma, &pauli.bar_plus, &g.upper, &w, &QScalar::big_q()).map_err(|e| e.to_string())?;
    ensure(traced == g.upper, || "trace formula does not reproduce G^IJ".into())?;
    ensure(g.upper.mul(&g.lower).is_identity(), || "G G^-1 is not the identity".into())?;
    ensure(g.lower.mul(&g.upper).is_identity(), || "G^-1 G is not the identity".into())?;
    let classical = build_minkowski_metric(&q("1")).map_err(|e| e.to_string())?;
    let diag = Matrix::diagonal(vec![CQuad::from_int(-1), CQuad::one(), CQuad::one(), CQuad::one()]);
    ensure(classical.upper == diag && classical.lower == diag, || "q = 1 metric is not diag(-1,1,1,1)".into())?;
    within(t, Duration::from_secs(1))?;
    Ok(format!("trace formula, inverse and q=1 limit exact ({:.2?})", t.elapsed()))
}

fn r_identities_at(p: &DeformationParameter) -> Result<(), String> {
    let err = |e: qboost::QnumError| e.to_string();
    let (rp, rm) = build_r_matrices(p).map_err(err)?;
    let id2 = Matrix::<CQuad>::identity(2);
    let id4 = Matrix::<CQuad>::identity(4);
    let qq = CQuad::from_rational(p.q().clone());
    let q2 = qq.times(&qq);
    let q2i = q2.recip().map_err(err)?;
    let ctx = p.exact_string();
    ensure(rp.mul(&rm).is_identity(), || format!("R+ R- != 1 at q={}", ctx))?;
    for (r, k) in [(&rp, &q2), (&rm, &q2i)] {
        ensure(r.add(&id4.scale(k)).mul(&r.sub(&id4)).is_zero(), || format!("Hecke fails at q={}", ctx))?;
        let r12 = r.kron(&id2);
        let r23 = id2.kron(r);
        ensure(r12.mul(&r23).mul(&r12) == r23.mul(&r12).mul(&r23), || format!("Yang-Baxter fails at q={}", ctx))?;
    }
    let (lp, lm) = build_lorentz_r(p).map_err(err)?;
    let g = build_minkowski_metric(p).map_err(|e| e.to_string())?;
    let gm = build_minkowski_metric_minus(p).map_err(err)?;
    let id16 = Matrix::<CQuad>::identity(16);
    for (l, metric, a, b) in [(&lp, &g, &q2, &q2i), (&lm, &gm, &q2i, &q2)] {
        let up = metric.upper.entries().to_vec();
        let lo = metric.lower.entries().to_vec();
        ensure(l.apply(&up) == up && l.transpose().apply(&lo) == lo, || format!("metric symmetrization fails at q={}", ctx))?;
        let cubic = l.add(&id16.scale(a)).mul(&l.add(&id16.scale(b))).mul(&l.sub(&id16));
        ensure(cubic.is_zero(), || format!("cubic Hecke fails at q={}", ctx))?;
    }
    Ok(())
}

fn r_matrix_identities() -> Outcome {
    let t = Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut qs = samples();
    while qs.len() < 23 {
        let n: i64 = rng.gen_range(1..=40);
        let d: i64 = rng.gen_range(1..=40);
        qs.push(DeformationParameter::from_ratio(n, d).map_err(|e| e.to_string())?);
    }
    for p in &qs {
        r_identities_at(p)?;
    }
    within(t, Duration::from_secs(10))?;
    Ok(format!("{} values of q, all exact ({:.2?})", qs.len(), t.elapsed()))
}

fn representation_relations() -> Outcome {
    let t = Instant::now();
    let ids = [
        "eq16", "eq17", "eq18", "eq19", "eq20", "eq21", "eq22", "eq23", "eq24", "eq25", "eq26a", "eq26b", "eq27a", "eq27b", "eq28a", "eq28b",
        "central-L00", "central-Lzzb", "orthogonality-upper", "orthogonality-lower",
    ];
    let mut n = 0;
    for p in samples() {
        for tl in 0..=6 {
            let rep = verify_relations(label(tl), &p).map_err(|e| e.to_string())?;
            let what = format!("l={} q={}", label(tl), p.exact_string());
            require_exact(&rep, &ids, &what)?;
            n += 1;
        }
    }
    within(t, Duration::from_secs(30))?;
    Ok(format!("{} relations on {} (block, q) pairs, residual 0 ({:.2?})", ids.len(), n, t.elapsed()))
}

fn spectral_consistency() -> Outcome {
    for tl in 0..=8u32 {
        let b = label(tl);
        let v2 = velocity_length_sq_symbolic(b).map_err(|e| format!("l={}: {}", b, e))?;
        let g = gamma_of(b);
        let lhs = g.clone() * g * (QScalar::one() - v2);
        ensure(lhs.is_one(), || format!("l={}: gamma^2 (1 - |v|^2) != 1", b))?;
        let top = BasisState::new(b, tl as i64).map_err(|e| e.to_string())?;
        let bottom = BasisState::new(b, -(tl as i64)).map_err(|e| e.to_string())?;
        ensure(ladder_alpha(top, 1).is_zero() && ladder_beta(top, 1).is_zero(), || format!("l={}: top ladder not nilpotent", b))?;
        ensure(ladder_alpha(bottom, 2).is_zero(), || format!("l={}: bottom ladder not nilpotent", b))?;
    }
    Ok("gamma and edge nilpotency exact for l <= 4".into())
}

fn golden_tables() -> Outcome {
    let t = Instant::now();
    let golden = embedded_golden();
    let hh = TensorBlock::new(label(1), label(1));
    let sq = symbolic_squares(hh).map_err(|e| e.to_string())?;
    let eq72: Vec<QScalar> = sq.iter().filter(|(k, _)| k.0 == 2 && k.1 == 0).map(|(_, v)| v.clone()).collect();
    let want72 = [expr("1/(q*Q)"), expr("q/Q")];
    ensure(eq72.len() == 2 && want72.iter().all(|w| eq72.iter().any(|v| (v.clone() - w.clone()).is_zero())), || "|1,0> squares of 1/2 x 1/2".into())?;
    let h1 = TensorBlock::new(label(1), label(2));
    let sq = symbolic_squares(h1).map_err(|e| e.to_string())?;
    let eq77: Vec<QScalar> = sq.iter().filter(|(k, _)| k.0 == 3 && k.1 == 1).map(|(_, v)| v.clone()).collect();
    let want77 = [expr("q^(-1)*Q/(Q^2-1)"), expr("q^2/(Q^2-1)")];
    ensure(eq77.len() == 2 && want77.iter().all(|w| eq77.iter().any(|v| (v.clone() - w.clone()).is_zero())), || "|3/2,1/2> squares of 1/2 x 1".into())?;
    for p in [q("5/4"), q("2"), q("1/2"), q("3/2")] {
        let rep = paper_tables(&p, qboost::Variant::Corrected, &golden, PREC).map_err(|e| e.to_string())?;
        no_failures(&rep, &format!("q={}", p.exact_string()))?;
        ensure(rep.summary().expected_deviation == 0, || "corrected variant carries deviations".into())?;
        for e in rep.find("golden-signed") {
            ensure(e.residual.is_some_and(|r| r < UNITARITY_TOL), || format!("signed value off [{}]", e.context_string()))?;
        }
    }
    let sums = normalization_sums(&golden, qboost::Variant::Corrected).map_err(|e| e.to_string())?;
    ensure(sums.iter().all(|s| s.3.is_one()), || "a multiplet's squares do not sum to 1".into())?;
    within(t, Duration::from_secs(10))?;
    Ok(format!("{} golden tables exact, {} multiplets normalized ({:.2?})", golden.len(), sums.len(), t.elapsed()))
}

fn max_offdiag(m: &RMatrix) -> f64 {
    let n = m.rows();
    let mut r: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { 1.0 } else { 0.0 };
            r = r.max((numeric::to_f64(m.get(i, j)) - want).abs());
        }
    }
    r
}

fn coupling_structure() -> Outcome {
    let t = Instant::now();
    let ids = [
        "cg-unitarity",
        "selection-rule-coproduct",
        "selection-rule-numeric",
        "triangle-rule",
        "multiplicity-one",
        "dimension-count",
        "coupled-blocks",
        "cg-recursion-raising",
        "cg-recursion-lowering",
    ];
    let mut n = 0;
    for p in [q("5/4"), q("2")] {
        for a in 1..=3 {
            for b in 1..=3 {
                let block = TensorBlock::new(label(a), label(b));
                let what = format!("{} q={}", block, p.exact_string());
                let rep = qboost::verify_coupling(block, &p, PREC).map_err(|e| e.to_string())?;
                no_failures(&rep, &what)?;
                for id in ids {
                    ensure(rep.find(id).next().is_some(), || format!("{}: no `{}` entry", what, id))?;
                }
                let table = cg_decompose(block, &p, PREC).map_err(|e| e.to_string())?;
                let u = max_offdiag(&table.values.transpose().mul(&table.values));
                ensure(u < UNITARITY_TOL, || format!("{}: unitarity residual {:e}", what, u))?;
                let dims: usize = block.l3_values().iter().map(|l| l.dim()).sum();
                ensure(dims == block.dim() && table.columns.len() == block.dim(), || format!("{}: dimension count", what))?;
                n += 1;
            }
        }
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("{} (pair, q) cases ({:.2?})", n, t.elapsed()))
}

fn fact(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `⟨j1 m1 j2 m2 | j m⟩` in floating point; doubled arguments.
fn classical_cg(tj1: i64, tm1: i64, tj2: i64, tm2: i64, tj: i64, tm: i64) -> f64 {
    if tm1 + tm2 != tm {
        return 0.0;
    }
    let h = |x: i64| x / 2;
    let norm = ((tj + 1) as f64 * fact(h(tj1 + tj2 - tj)) * fact(h(tj1 - tj2 + tj)) * fact(h(-tj1 + tj2 + tj)) / fact(h(tj1 + tj2 + tj) + 1)).sqrt();
    let w = (fact(h(tj1 + tm1)) * fact(h(tj1 - tm1)) * fact(h(tj2 + tm2)) * fact(h(tj2 - tm2)) * fact(h(tj + tm)) * fact(h(tj - tm))).sqrt();
    let mut sum = 0.0;
    for k in 0..=h(tj1 + tj2 + tj) {
        let args = [k, h(tj1 + tj2 - tj) - k, h(tj1 - tm1) - k, h(tj2 + tm2) - k, h(tj - tj2 + tm1) + k, h(tj - tj1 - tm2) + k];
        if args.iter().any(|&x| x < 0) {
            continue;
        }
        let den: f64 = args.iter().map(|&x| fact(x)).product();
        sum += if k % 2 == 0 { 1.0 } else { -1.0 } / den;
    }
    norm * w * sum
}

fn classical_limit() -> Outcome {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for (a, b) in [(1, 1), (1, 2), (2, 2)] {
        let block = TensorBlock::new(label(a), label(b));
        let lim = cg_classical_limit(block, PREC).map_err(|e| format!("{}: {}", block, e))?;
        let states = block.states();
        for col in &lim.columns {
            let tl = col.l3.twice_l() as i64;
            let mut oracle: Vec<f64> = states.iter().map(|&(m2, m1)| classical_cg(a as i64, m2, b as i64, m1, tl, col.twice_m3)).collect();
            let lead = states.iter().zip(&oracle).filter(|(_, v)| v.abs() > 1e-12).max_by_key(|((m2, _), _)| *m2).map(|(_, v)| *v);
            if lead.is_some_and(|v| v < 0.0) {
                oracle.iter_mut().for_each(|v| *v = -*v);
            }
            for (&(m2, m1), want) in states.iter().zip(&oracle) {
                let got = lim.coefficient(col.l3, col.twice_m3, m2, m1);
                worst = worst.max((got - want).abs());
            }
        }
    }
    ensure(worst <= CLASSICAL_TOL, || format!("max deviation {:e}", worst))?;
    within(t, Duration::from_secs(60))?;
    Ok(format!("max deviation {:.1e} ({:.2?})", worst, t.elapsed()))
}

fn documented_deviations() -> Outcome {
    let top = BasisState::new(label(1), 1).map_err(|e| e.to_string())?;
    let printed = numeric::to_f64(&numeric::evaluate(&ladder_alpha_printed(top, 1), &q("2"), PREC).map_err(|e| e.to_string())?.re);
    let exact = specialize(&ladder_alpha(top, 1), &q("2")).map_err(|e| e.to_string())?;
    ensure(exact.is_zero() && (printed - PRINTED_ALPHA_TOP).abs() < 5e-5, || format!("printed alpha at l=m=1/2, q=2 is {}", printed))?;
    let mut cfg = SuiteConfig::new(samples(), label(2), PREC, embedded_golden());
    cfg.coupling_max = label(2);
    let rep = run_suite(&cfg).map_err(|e| e.to_string())?;
    ensure(rep.passed(false), || "suite fails outside the documented deviations".into())?;
    ensure(!rep.passed(true), || "strict-literal run passes".into())?;
    let groups: Vec<String> = rep.deviation_groups().keys().cloned().collect();
    let mut expected = vec![DEV_ALPHA.to_string(), DEV_BETA.to_string(), DEV_KETS.to_string()];
    expected.sort();
    ensure(groups == expected, || format!("{} deviation groups {:?}, expected {:?}", groups.len(), groups, expected))?;
    Ok(format!("printed alpha {:.4}, groups {:?}", printed, groups))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("metric reproduction", metric_reproduction),
        ("R-matrix identities", r_matrix_identities),
        ("representation relations", representation_relations),
        ("spectral consistency", spectral_consistency),
        ("CG golden tables", golden_tables),
        ("coupling structure", coupling_structure),
        ("classical limit", classical_limit),
        ("documented deviations", documented_deviations),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str())) {
            continue;
        }
        match f() {
            Ok(msg) => println!("criterion {} PASS {}: {}", i + 1, name, msg),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL {}: {}", i + 1, name, msg);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
