//! Golden coupling tables and their comparison against computed decompositions.

use super::cg::{cg_decompose, symbolic_squares, CGTable, CouplingError};
use super::coproduct::TensorBlock;
use crate::boost_rep::{BasisState, BlockLabel};
use crate::qnum::numeric;
use crate::qnum::{parse_expr, specialize, DeformationParameter, Field, QScalar};
use crate::report::{ctx, ReportEntry, VerificationReport};
use crate::tolerances;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

pub const DEV_KETS: &str = "eq77-79 ket labels";

const EMBEDDED: [(&str, &str); 9] = [
    ("eq72", include_str!("../../../../golden/eq72.json")),
    ("eq73", include_str!("../../../../golden/eq73.json")),
    ("eq74", include_str!("../../../../golden/eq74.json")),
    ("eq75", include_str!("../../../../golden/eq75.json")),
    ("eq76", include_str!("../../../../golden/eq76.json")),
    ("eq77", include_str!("../../../../golden/eq77.json")),
    ("eq78", include_str!("../../../../golden/eq78.json")),
    ("eq79", include_str!("../../../../golden/eq79.json")),
    ("eq80", include_str!("../../../../golden/eq80.json")),
];

#[derive(Debug, Error)]
pub enum TableError {
    #[error("missing golden file {0}")]
    Missing(String),
    #[error("malformed golden file {file}: {msg}")]
    Malformed { file: String, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTerm {
    pub m2: String,
    pub m1: String,
    pub sign: i8,
    pub square: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenState {
    pub l3: String,
    pub m3: String,
    pub terms: Vec<GoldenTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenVariant {
    pub states: Vec<GoldenState>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub source_eq: String,
    pub l2: String,
    pub l1: String,
    pub literal: GoldenVariant,
    pub corrected: GoldenVariant,
    pub note: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Literal,
    Corrected,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Literal => "literal",
            Variant::Corrected => "corrected",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "literal" => Ok(Variant::Literal),
            "corrected" => Ok(Variant::Corrected),
            other => Err(format!("unknown variant `{}` (expected literal or corrected)", other)),
        }
    }
}

impl GoldenTable {
    pub fn variant(&self, v: Variant) -> &GoldenVariant {
        match v {
            Variant::Literal => &self.literal,
            Variant::Corrected => &self.corrected,
        }
    }

    pub fn block(&self) -> Result<TensorBlock, TableError> {
        let parse = |s: &str| s.parse::<BlockLabel>().map_err(|e| self.malformed(e.to_string()));
        Ok(TensorBlock::new(parse(&self.l2)?, parse(&self.l1)?))
    }

    fn malformed(&self, msg: String) -> TableError {
        TableError::Malformed { file: self.source_eq.clone(), msg }
    }
}

fn parse_table(name: &str, text: &str) -> Result<GoldenTable, TableError> {
    serde_json::from_str(text).map_err(|e| TableError::Malformed { file: name.to_string(), msg: e.to_string() })
}

/// The tables shipped with the library.
pub fn embedded_golden() -> Vec<GoldenTable> {
    EMBEDDED.iter().map(|(n, t)| parse_table(n, t).expect("embedded golden data parses")).collect()
}

/// `eq72.json` through `eq80.json` from `dir`.
pub fn load_golden_dir(dir: &Path) -> Result<Vec<GoldenTable>, TableError> {
    EMBEDDED
        .iter()
        .map(|(n, _)| {
            let path = dir.join(format!("{}.json", n));
            let text = std::fs::read_to_string(&path).map_err(|_| TableError::Missing(path.display().to_string()))?;
            parse_table(n, &text)
        })
        .collect()
}

struct Key {
    l3: BlockLabel,
    twice_m3: i64,
    twice_m2: i64,
    twice_m1: i64,
}

fn term_key(table: &GoldenTable, state: &GoldenState, term: &GoldenTerm) -> Result<Key, TableError> {
    let block = table.block()?;
    let bad = |e: crate::boost_rep::BoostError| table.malformed(e.to_string());
    let s3 = BasisState::parse(&state.l3, &state.m3).map_err(bad)?;
    let s2 = BasisState::parse(&table.l2, &term.m2).map_err(bad)?;
    let s1 = BasisState::parse(&table.l1, &term.m1).map_err(bad)?;
    debug_assert_eq!(s2.block(), block.l2);
    Ok(Key { l3: s3.block(), twice_m3: s3.twice_m(), twice_m2: s2.twice_m(), twice_m1: s1.twice_m() })
}

fn in_variant(v: &GoldenVariant, state: &GoldenState, term: &GoldenTerm) -> bool {
    v.states.iter().any(|s| s.l3 == state.l3 && s.m3 == state.m3 && s.terms.contains(term))
}

/// Exact sum of the golden squares of each state.
pub fn normalization_sums(golden: &[GoldenTable], variant: Variant) -> Result<Vec<(String, String, String, QScalar)>, CouplingError> {
    let mut out = Vec::new();
    for t in golden {
        for s in &t.variant(variant).states {
            let mut acc = QScalar::zero();
            for term in &s.terms {
                acc = acc.plus(&parse_expr(&term.square)?);
            }
            out.push((t.source_eq.clone(), s.l3.clone(), s.m3.clone(), acc));
        }
    }
    Ok(out)
}

/// Per-term comparison of golden squares and signs with computed tables.
///
/// Squares are compared as rational functions of `q` and exactly at `p`.
/// Signs are compared up to one phase per `(l2, l1, l3)` multiplet.
pub fn paper_tables(p: &DeformationParameter, variant: Variant, golden: &[GoldenTable], prec: usize) -> Result<VerificationReport, CouplingError> {
    let mut rep = VerificationReport::new();
    let mut computed: BTreeMap<TensorBlock, (CGTable, Vec<((u32, i64, i64, i64), QScalar)>)> = BTreeMap::new();
    let mut phases: BTreeMap<(TensorBlock, BlockLabel), i8> = BTreeMap::new();
    let q = p.exact_string();
    for t in golden {
        let block = t.block().map_err(|e| CouplingError::Golden(e.to_string()))?;
        if let std::collections::btree_map::Entry::Vacant(e) = computed.entry(block) {
            e.insert((cg_decompose(block, p, prec)?, symbolic_squares(block)?));
        }
        let (table, sym) = &computed[&block];
        for state in &t.variant(variant).states {
            let mut norm = QScalar::zero();
            for term in &state.terms {
                let k = term_key(t, state, term).map_err(|e| CouplingError::Golden(e.to_string()))?;
                let deviates = variant == Variant::Literal && !in_variant(&t.corrected, state, term);
                let c = ctx(&[
                    ("l2", &t.l2),
                    ("l1", &t.l1),
                    ("l3", &state.l3),
                    ("m3", &state.m3),
                    ("m2", &term.m2),
                    ("m1", &term.m1),
                    ("q", &q),
                    ("variant", variant.name()),
                ]);
                let mark = |e: ReportEntry| if deviates { e.literal(DEV_KETS) } else { e };
                let golden_sq = parse_expr(&term.square)?;
                norm = norm.plus(&golden_sq);
                let sym_sq = sym
                    .iter()
                    .find(|(key, _)| *key == (k.l3.twice_l(), k.twice_m3, k.twice_m2, k.twice_m1))
                    .map(|(_, v)| v.clone())
                    .unwrap_or_else(QScalar::zero);
                let at_q = table
                    .exact_coefficient(k.l3, k.twice_m3, k.twice_m2, k.twice_m1)
                    .map(|e| e.square.clone())
                    .unwrap_or_else(crate::qnum::Quad::zero);
                let golden_at_q = specialize(&golden_sq, p)?;
                let exact_ok = golden_sq.minus(&sym_sq).is_zero() && golden_at_q.re == at_q && golden_at_q.im.is_zero();
                let note = if k.twice_m2 + k.twice_m1 != k.twice_m3 {
                    "label violates m3 = m2 + m1".to_string()
                } else {
                    format!("computed square {:.12}", at_q.to_f64())
                };
                rep.push(mark(ReportEntry::boolean("golden-square", &t.source_eq, c.clone(), exact_ok).with_note(note)));

                let value = table.coefficient(k.l3, k.twice_m3, k.twice_m2, k.twice_m1);
                let want = numeric::evaluate_signed_root(term.sign, &golden_at_q.re, prec)?;
                let phase = if deviates {
                    1
                } else {
                    *phases.entry((block, k.l3)).or_insert(if numeric::signum(&value) * numeric::signum(&want) < 0 { -1 } else { 1 })
                };
                let resid = numeric::to_f64(&numeric::abs(&(value - want * numeric::from_f64_exact(phase as f64, prec))));
                let e = ReportEntry::measured("golden-signed", &t.source_eq, c, resid, tolerances::COUPLING).with_note(format!("multiplet phase {:+}", phase));
                rep.push(mark(e));
            }
            let c = ctx(&[("l2", &t.l2), ("l1", &t.l1), ("l3", &state.l3), ("m3", &state.m3), ("q", &q), ("variant", variant.name())]);
            rep.push(ReportEntry::boolean("golden-normalization", &t.source_eq, c, norm.is_one()));
        }
    }
    Ok(rep.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn embedded_parses() {
        let g = embedded_golden();
        assert_eq!(g.len(), 9);
        assert_eq!(g[5].source_eq, "eq77");
        assert_ne!(g[5].literal, g[5].corrected);
        assert_eq!(g[0].literal, g[0].corrected);
    }

    #[test]
    fn corrected_tables_match() {
        let g = embedded_golden();
        for q in ["2", "3/2", "1/2"] {
            let r = paper_tables(&q.parse().unwrap(), Variant::Corrected, &g, 128).unwrap();
            assert_eq!(r.summary().fail, 0, "{}", r.to_pretty());
            assert_eq!(r.summary().expected_deviation, 0);
        }
    }

    #[test]
    fn literal_labels_flagged() {
        let g = embedded_golden();
        let r = paper_tables(&"2".parse().unwrap(), Variant::Literal, &g, 128).unwrap();
        assert_eq!(r.summary().fail, 0, "{}", r.to_pretty());
        let devs = r.deviation_groups();
        assert_eq!(devs.keys().collect::<Vec<_>>(), [DEV_KETS]);
        assert!(r.entries.iter().any(|e| e.verdict == Verdict::ExpectedDeviation && e.eq_tag == "eq79"));
    }

    #[test]
    fn squares_sum_to_one() {
        for (_, _, _, s) in normalization_sums(&embedded_golden(), Variant::Corrected).unwrap() {
            assert!(s.is_one());
        }
    }
}
