//! Subcommand bodies.

use crate::config::{parse_label, parse_q, warn_decimal, Format, RunConfig};
use crate::output::{cg_csv, csv_string, grid, pretty_json, report_in, Artifacts, EntryRow};
use crate::CliError;
use qboost::boost_rep::{build_generator, gamma_of, verify_relations, GeneratorId};
use qboost::coupling::cg::{cg_decompose, verify_coupling, SIGN_CONVENTION};
use qboost::coupling::classical::{cg_classical_limit, classical_limit_check};
use qboost::coupling::tables::{embedded_golden, load_golden_dir, normalization_sums, paper_tables, Variant};
use qboost::linalg::Matrix;
use qboost::qnum::numeric;
use qboost::qnum::{specialize, CQuad, DeformationParameter, Field};
use qboost::spinor_kit::{
    build_lorentz_r, build_minkowski_metric, build_pauli, build_r_matrices, build_spinor_metric, check_spinor_identities, SpinorTensor,
    LAYOUT_LORENTZ_R, LAYOUT_METRIC, LAYOUT_R, LAYOUT_SPINOR,
};
use qboost::suite::{run_suite, SuiteConfig};
use qboost::{TensorBlock, VerificationReport};
use serde_json::json;
use std::path::PathBuf;

const DIGITS: usize = 30;

fn finish(cfg: &RunConfig, rep: VerificationReport) -> VerificationReport {
    let mut rep = match cfg.tolerance {
        Some(t) => rep.with_numeric_tolerance(t),
        None => rep,
    };
    rep.echo("precision", cfg.precision);
    rep.echo("convention", &cfg.convention);
    if let Some(t) = cfg.tolerance {
        rep.echo("tolerance", t);
    }
    rep
}

fn f64_rows(m: &Matrix<CQuad>) -> Vec<Vec<(f64, f64)>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).to_f64_pair()).collect()).collect()
}

fn entry_rows(t: &SpinorTensor) -> Vec<EntryRow> {
    let cols = *t.shape.last().unwrap_or(&1);
    t.entries
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let (re, im) = x.to_f64_pair();
            EntryRow { tensor: t.name.clone(), row: i / cols, col: i % cols, re: format!("{:e}", re), im: format!("{:e}", im) }
        })
        .collect()
}

pub fn metrics(cfg: &RunConfig) -> Result<Artifacts, CliError> {
    let p = cfg.q()?;
    let report = check_spinor_identities(&p).map_err(CliError::lib)?;
    let (eps_lower, eps_upper) = build_spinor_metric(&p).map_err(CliError::lib)?;
    let (rp, rm) = build_r_matrices(&p).map_err(CliError::lib)?;
    let pauli = build_pauli(&p).map_err(CliError::lib)?;
    let g = build_minkowski_metric(&p).map_err(CliError::lib)?;
    let (lp, lm) = build_lorentz_r(&p).map_err(CliError::lib)?;
    let mut mats: Vec<(String, Vec<usize>, &'static str, &Matrix<CQuad>)> = vec![
        ("spinor_metric_lower".into(), vec![2, 2], LAYOUT_SPINOR, &eps_lower),
        ("spinor_metric_upper".into(), vec![2, 2], LAYOUT_SPINOR, &eps_upper),
        ("r_plus".into(), vec![4, 4], LAYOUT_R, &rp),
        ("r_minus".into(), vec![4, 4], LAYOUT_R, &rm),
    ];
    for (n, s) in pauli.sigma.iter().enumerate() {
        mats.push((format!("sigma_{}", n), vec![2, 2], LAYOUT_SPINOR, s));
    }
    for (n, s) in pauli.bar_plus.iter().enumerate() {
        mats.push((format!("sigma_bar_{}", n), vec![2, 2], LAYOUT_SPINOR, s));
    }
    mats.push(("metric_upper".into(), vec![4, 4], LAYOUT_METRIC, &g.upper));
    mats.push(("metric_lower".into(), vec![4, 4], LAYOUT_METRIC, &g.lower));
    mats.push(("lorentz_r_plus".into(), vec![16, 16], LAYOUT_LORENTZ_R, &lp));
    mats.push(("lorentz_r_minus".into(), vec![16, 16], LAYOUT_LORENTZ_R, &lm));
    let tensors: Vec<SpinorTensor> = mats.iter().map(|(n, s, l, m)| SpinorTensor::from_matrix(n, s.clone(), l, m)).collect();

    let report = finish(cfg, report);
    let mut files: Vec<(String, String)> = tensors.iter().map(|t| (format!("{}.json", t.name), pretty_json(&t.to_json(&p)))).collect();
    let stdout = match cfg.format {
        Format::Json => {
            let ts: Vec<_> = tensors.iter().map(|t| t.to_json(&p)).collect();
            pretty_json(&json!({"q": p.exact_string(), "tensors": ts, "report": report.to_json()}))
        }
        Format::Csv => {
            let rows: Vec<EntryRow> = tensors.iter().flat_map(entry_rows).collect();
            csv_string(&rows)?
        }
        Format::Pretty => {
            let mut s = format!("q = {}\n", p.exact_string());
            for (n, _, _, m) in mats.iter().filter(|(_, s, _, _)| s[0] <= 4) {
                s.push_str(&grid(n, &f64_rows(m)));
            }
            s.push_str(&report.to_pretty());
            s
        }
    };
    files.push(("report.json".into(), pretty_json(&report.to_json())));
    Ok(Artifacts { stdout, files, report })
}

pub struct RepArgs {
    pub l: String,
    pub generator: Option<String>,
    pub suite: String,
}

pub fn rep(cfg: &RunConfig, args: RepArgs) -> Result<Artifacts, CliError> {
    let p = cfg.q()?;
    let l = parse_label(&args.l, "l")?;
    cfg.check_l(l, "l")?;
    let gens: Vec<GeneratorId> = match &args.generator {
        Some(g) => vec![g.parse().map_err(|e: qboost::BoostError| CliError::Usage(e.to_string()))?],
        None => GeneratorId::ALL.to_vec(),
    };
    let report = match args.suite.as_str() {
        "relations" => verify_relations(l, &p).map_err(CliError::lib)?,
        "none" => VerificationReport::new(),
        other => return Err(CliError::Usage(format!("unknown suite `{}` (expected relations or none)", other))),
    };
    let report = finish(cfg, report);
    let mats = gens.iter().map(|g| build_generator(*g, l, &p)).collect::<Result<Vec<_>, _>>().map_err(CliError::lib)?;
    let docs = mats.iter().map(|m| m.to_json(cfg.precision, DIGITS)).collect::<Result<Vec<_>, _>>().map_err(CliError::lib)?;
    let gamma = numeric::to_f64(&numeric::quad_to_float(&specialize(&gamma_of(l), &p).map_err(CliError::lib)?.re, cfg.precision));
    let mut files: Vec<(String, String)> = mats.iter().zip(&docs).map(|(m, d)| (format!("rep_l{}_{}.json", slug(&l.to_string()), m.generator.name()), pretty_json(d))).collect();
    let stdout = match cfg.format {
        Format::Json => pretty_json(&json!({"q": p.exact_string(), "l": l.to_string(), "gamma": gamma, "matrices": docs, "report": report.to_json()})),
        Format::Csv => {
            let rows: Vec<EntryRow> = mats
                .iter()
                .flat_map(|m| {
                    let vals = m.to_f64();
                    let name = m.generator.name().to_string();
                    vals.into_iter().enumerate().flat_map(move |(r, row)| {
                        let name = name.clone();
                        row.into_iter().enumerate().map(move |(c, (re, im))| EntryRow { tensor: name.clone(), row: r, col: c, re: format!("{:e}", re), im: format!("{:e}", im) })
                    })
                })
                .collect();
            csv_string(&rows)?
        }
        Format::Pretty => {
            let mut s = format!("q = {}  l = {}  gamma = {:.12}\n", p.exact_string(), l, gamma);
            for m in &mats {
                s.push_str(&grid(m.generator.name(), &m.to_f64()));
            }
            s.push_str(&report.to_pretty());
            s
        }
    };
    files.push(("report.json".into(), pretty_json(&report.to_json())));
    Ok(Artifacts { stdout, files, report })
}

fn slug(s: &str) -> String {
    s.replace('/', "_")
}

pub struct CgArgs {
    pub l2: String,
    pub l1: String,
    pub limit: bool,
}

pub fn cg(cfg: &RunConfig, args: CgArgs) -> Result<Artifacts, CliError> {
    let l2 = parse_label(&args.l2, "l2")?;
    let l1 = parse_label(&args.l1, "l1")?;
    cfg.check_l(l2, "l2")?;
    cfg.check_l(l1, "l1")?;
    let block = TensorBlock::new(l2, l1);
    let p = cfg.q()?;
    if args.limit {
        return cg_limit(cfg, block);
    }
    if p.is_classical() {
        return Err(CliError::Usage("degenerate coupling at q=1: use cg_classical_limit (pass --limit)".into()));
    }
    let table = cg_decompose(block, &p, cfg.precision).map_err(CliError::lib)?;
    let report = finish(cfg, verify_coupling(block, &p, cfg.precision).map_err(CliError::lib)?);
    let rows = table.rows(DIGITS);
    let header = table.header_json();
    let csv = cg_csv(&rows)?;
    let stem = format!("cg_{}_{}", slug(&l2.to_string()), slug(&l1.to_string()));
    let files = vec![
        (format!("{}.csv", stem), csv.clone()),
        (format!("{}.header.json", stem), pretty_json(&header)),
        ("report.json".to_string(), pretty_json(&report.to_json())),
    ];
    let stdout = match cfg.format {
        Format::Json => pretty_json(&json!({"header": header, "rows": rows, "report": report.to_json()})),
        Format::Csv => csv,
        Format::Pretty => {
            let mut s = format!("{}  q = {}  convention {}\n", block, p.exact_string(), SIGN_CONVENTION);
            let dims: Vec<String> = block.l3_values().iter().map(|l| l.dim().to_string()).collect();
            s.push_str(&format!("dimension {} = {}\n", block.dim(), dims.join(" + ")));
            s.push_str(&format!("{:>5} {:>5} {:>5} {:>5}  {:>24}  {}\n", "l3", "m3", "m2", "m1", "value", "square"));
            for r in &rows {
                let sq = match (&r.value_sq_num, &r.value_sq_den) {
                    (Some(n), Some(d)) if d == "1" => n.clone(),
                    (Some(n), Some(d)) => format!("{}/{}", n, d),
                    _ => "-".into(),
                };
                let v: f64 = r.value_re.parse().unwrap_or(f64::NAN);
                s.push_str(&format!("{:>5} {:>5} {:>5} {:>5}  {:>24.18}  {}\n", r.l3, r.m3, r.m2, r.m1, v, sq));
            }
            s.push_str(&report.to_pretty());
            s
        }
    };
    Ok(Artifacts { stdout, files, report })
}

fn cg_limit(cfg: &RunConfig, block: TensorBlock) -> Result<Artifacts, CliError> {
    let lim = cg_classical_limit(block, cfg.precision).map_err(CliError::lib)?;
    let report = finish(cfg, classical_limit_check(block, cfg.precision).map_err(CliError::lib)?);
    let states = block.states();
    #[derive(serde::Serialize)]
    struct Row {
        l3: String,
        m3: String,
        m2: String,
        m1: String,
        value: String,
    }
    let mut rows = Vec::new();
    for (j, c) in lim.columns.iter().enumerate() {
        for (r, &(m2, m1)) in states.iter().enumerate() {
            if m2 + m1 != c.twice_m3 {
                continue;
            }
            rows.push(Row {
                l3: c.l3.to_string(),
                m3: c.m3_string(),
                m2: qboost::boost_rep::half_string(m2),
                m1: qboost::boost_rep::half_string(m1),
                value: numeric::to_decimal_string(lim.values.get(r, j), 12),
            });
        }
    }
    let csv = csv_string(&rows)?;
    let header = json!({"l2": block.l2.to_string(), "l1": block.l1.to_string(), "q": "1", "method": "extrapolated", "spread": lim.spread, "convention": SIGN_CONVENTION});
    let stem = format!("cg_{}_{}_limit", slug(&block.l2.to_string()), slug(&block.l1.to_string()));
    let files = vec![
        (format!("{}.csv", stem), csv.clone()),
        (format!("{}.header.json", stem), pretty_json(&header)),
        ("report.json".to_string(), pretty_json(&report.to_json())),
    ];
    let stdout = match cfg.format {
        Format::Json => pretty_json(&json!({"header": header, "rows": rows, "report": report.to_json()})),
        Format::Csv => csv,
        Format::Pretty => {
            let mut s = format!("{}  q -> 1  convention {}\n", block, SIGN_CONVENTION);
            for r in &rows {
                s.push_str(&format!("{:>5} {:>5} {:>5} {:>5}  {}\n", r.l3, r.m3, r.m2, r.m1, r.value));
            }
            s.push_str(&report.to_pretty());
            s
        }
    };
    Ok(Artifacts { stdout, files, report })
}

pub struct VerifyArgs {
    pub q_samples: Option<String>,
    pub coupling_lmax: Option<String>,
    pub golden_dir: Option<PathBuf>,
}

fn golden(dir: &Option<PathBuf>) -> Result<Vec<qboost::GoldenTable>, CliError> {
    match dir {
        Some(d) => load_golden_dir(d).map_err(|e| CliError::Usage(e.to_string())),
        None => Ok(embedded_golden()),
    }
}

pub fn verify(cfg: &RunConfig, args: VerifyArgs) -> Result<Artifacts, CliError> {
    let samples: Vec<DeformationParameter> = match &args.q_samples {
        None => SuiteConfig::default_samples(),
        Some(list) => list
            .split(',')
            .map(|t| {
                let p = parse_q(t.trim())?;
                warn_decimal(t, &p);
                Ok(p)
            })
            .collect::<Result<_, CliError>>()?,
    };
    if samples.is_empty() {
        return Err(CliError::Usage("empty q sample list".into()));
    }
    let mut suite = SuiteConfig::new(samples, cfg.l_max, cfg.precision, golden(&args.golden_dir)?);
    if let Some(c) = &args.coupling_lmax {
        let c = parse_label(c, "coupling-lmax")?;
        cfg.check_l(c, "coupling-lmax")?;
        suite.coupling_max = c;
    }
    let report = finish(cfg, run_suite(&suite).map_err(CliError::lib)?);
    let stdout = report_in(&report, cfg.format)?;
    let files = vec![("report.json".to_string(), pretty_json(&report.to_json()))];
    Ok(Artifacts { stdout, files, report })
}

pub struct TablesArgs {
    pub variant: Variant,
    pub check_normalization: bool,
    pub golden_dir: Option<PathBuf>,
}

pub fn tables(cfg: &RunConfig, args: TablesArgs) -> Result<Artifacts, CliError> {
    let p = cfg.q()?;
    let gold = golden(&args.golden_dir)?;
    if p.is_classical() {
        return Err(CliError::Usage("tables need q != 1".into()));
    }
    let report = finish(cfg, paper_tables(&p, args.variant, &gold, cfg.precision).map_err(CliError::lib)?);
    let mut stdout = report_in(&report, cfg.format)?;
    let mut files = vec![("report.json".to_string(), pretty_json(&report.to_json()))];
    if args.check_normalization {
        let sums = normalization_sums(&gold, args.variant).map_err(CliError::lib)?;
        let mut text = String::new();
        for (eq, l3, m3, s) in &sums {
            text.push_str(&format!("{} |{},{}> sum of squares = {}\n", eq, l3, m3, if s.is_one() { "1".to_string() } else { s.to_string() }));
        }
        if cfg.format == Format::Pretty {
            stdout.push_str(&text);
        }
        files.push(("normalization.txt".into(), text));
    }
    Ok(Artifacts { stdout, files, report })
}
