//! Aggregated verification across sample deformations and block sizes.

use crate::boost_rep::{verify_relations, BlockLabel};
use crate::coupling::cg::{check_coassociativity, verify_coupling, CouplingError};
use crate::coupling::classical::classical_limit_check;
use crate::coupling::coproduct::TensorBlock;
use crate::coupling::tables::{paper_tables, GoldenTable, Variant};
use crate::qnum::DeformationParameter;
use crate::report::{ctx, ReportEntry, VerificationReport};
use crate::spinor_kit::check_spinor_identities;

#[derive(Clone)]
pub struct SuiteConfig {
    pub q_samples: Vec<DeformationParameter>,
    pub l_max: BlockLabel,
    /// Largest `l2`, `l1` in coupling checks.
    pub coupling_max: BlockLabel,
    pub precision: usize,
    pub golden: Vec<GoldenTable>,
    pub spinor: bool,
    pub relations: bool,
    pub coupling: bool,
    pub tables: bool,
}

impl SuiteConfig {
    pub fn new(q_samples: Vec<DeformationParameter>, l_max: BlockLabel, precision: usize, golden: Vec<GoldenTable>) -> Self {
        let coupling_max = BlockLabel::from_twice(l_max.twice_l().min(3));
        SuiteConfig { q_samples, l_max, coupling_max, precision, golden, spinor: true, relations: true, coupling: true, tables: true }
    }

    pub fn default_samples() -> Vec<DeformationParameter> {
        ["1/2", "5/4", "2"].iter().map(|s| s.parse().expect("valid sample")).collect()
    }
}

/// Ordered pairs `(l2, l1)` with `1/2 <= l2, l1 <= max`.
pub fn coupling_pairs(max: BlockLabel) -> Vec<TensorBlock> {
    let mut out = Vec::new();
    for a in 1..=max.twice_l() {
        for b in 1..=max.twice_l() {
            out.push(TensorBlock::new(BlockLabel::from_twice(a), BlockLabel::from_twice(b)));
        }
    }
    out
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport, CouplingError> {
    let mut rep = VerificationReport::new();
    let pairs = coupling_pairs(cfg.coupling_max);
    for p in &cfg.q_samples {
        if cfg.spinor {
            rep.extend(check_spinor_identities(p)?);
        }
        if cfg.relations {
            for l in BlockLabel::up_to(cfg.l_max) {
                rep.extend(verify_relations(l, p)?);
            }
        }
        if p.is_classical() {
            if cfg.coupling {
                for b in &pairs {
                    let c = ctx(&[("l2", &b.l2.to_string()), ("l1", &b.l1.to_string()), ("q", "1")]);
                    rep.push(ReportEntry::skipped("coupling", "eq59", c, "SKIPPED(q=1)"));
                    if b.l2.twice_l() + b.l1.twice_l() <= 4 {
                        rep.extend(classical_limit_check(*b, cfg.precision)?);
                    }
                }
            }
            if cfg.tables {
                rep.push(ReportEntry::skipped("golden-tables", "eq72-80", ctx(&[("q", "1")]), "SKIPPED(q=1)"));
            }
            continue;
        }
        if cfg.coupling {
            for b in &pairs {
                rep.extend(verify_coupling(*b, p, cfg.precision)?);
            }
            let h = BlockLabel::from_twice(1);
            rep.extend(check_coassociativity(h, h, h, p, cfg.precision)?);
        }
        if cfg.tables {
            rep.extend(paper_tables(p, Variant::Corrected, &cfg.golden, cfg.precision)?);
            rep.extend(paper_tables(p, Variant::Literal, &cfg.golden, cfg.precision)?);
        }
    }
    rep.echo("q_samples", cfg.q_samples.iter().map(|p| p.exact_string()).collect::<Vec<_>>().join(","));
    rep.echo("lmax", cfg.l_max);
    rep.echo("coupling_lmax", cfg.coupling_max);
    rep.echo("precision", cfg.precision);
    Ok(rep.sorted())
}
