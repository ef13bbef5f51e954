//! Run configuration: flags, then `key=value` config file, then environment, then defaults.

use crate::CliError;
use qboost::{BlockLabel, DeformationParameter};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const PRECISION_ENV: &str = "QBOOST_PRECISION";
pub const DEFAULT_PRECISION: usize = 128;
pub const MIN_PRECISION: usize = 64;
pub const L_MAX_CAP: u32 = 12;
pub const DEFAULT_L_MAX: u32 = 8;
pub const CONVENTION: &str = qboost::coupling::cg::SIGN_CONVENTION;

const KNOWN_KEYS: [&str; 19] = [
    "q",
    "precision",
    "tolerance",
    "lmax",
    "format",
    "out",
    "convention",
    "l",
    "generator",
    "suite",
    "l2",
    "l1",
    "limit",
    "q-samples",
    "coupling-lmax",
    "strict-literal",
    "variant",
    "check-normalization",
    "golden-dir",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            other => Err(format!("unknown format `{}` (expected json, csv or pretty)", other)),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Pretty => "pretty",
        })
    }
}

/// Values from a config file.
#[derive(Clone, Debug, Default)]
pub struct FileValues(BTreeMap<String, String>);

impl FileValues {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {}", path.display(), e)))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
            let k = k.trim().trim_start_matches("--").replace('_', "-");
            if !KNOWN_KEYS.contains(&k.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key `{}`", n + 1, k)));
            }
            map.insert(k, v.trim().to_string());
        }
        Ok(FileValues(map))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key) {
            None => Ok(false),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(v) => Err(CliError::Usage(format!("config key `{}`: expected true or false, got `{}`", key, v))),
        }
    }

    /// Flag value if given, else the config value.
    pub fn pick(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.get(key).map(str::to_string))
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub q_text: String,
    pub precision: usize,
    pub tolerance: Option<f64>,
    pub l_max: BlockLabel,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub convention: String,
}

pub struct GlobalFlags {
    pub q: Option<String>,
    pub precision: Option<String>,
    pub tolerance: Option<String>,
    pub lmax: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub convention: Option<String>,
}

pub fn parse_q(text: &str) -> Result<DeformationParameter, CliError> {
    text.parse::<DeformationParameter>().map_err(|e| CliError::Usage(format!("invalid q `{}`: {}", text, e)))
}

pub fn parse_label(text: &str, what: &str) -> Result<BlockLabel, CliError> {
    text.parse::<BlockLabel>().map_err(|e| CliError::Usage(format!("{}: {}", what, e)))
}

impl RunConfig {
    pub fn resolve(flags: GlobalFlags, file: &FileValues, env_precision: Option<String>) -> Result<Self, CliError> {
        let q_text = file.pick(flags.q, "q").unwrap_or_else(|| "2".to_string());
        let precision = match file.pick(flags.precision, "precision").or(env_precision) {
            None => DEFAULT_PRECISION,
            Some(p) => p.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("invalid precision `{}`", p)))?,
        };
        if precision < MIN_PRECISION {
            return Err(CliError::Usage(format!("precision must be at least {} bits", MIN_PRECISION)));
        }
        let tolerance = match file.pick(flags.tolerance, "tolerance") {
            None => None,
            Some(t) => {
                let v = t.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("invalid tolerance `{}`", t)))?;
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(CliError::Usage(format!("invalid tolerance `{}`", t)));
                }
                Some(v)
            }
        };
        let l_max = match file.pick(flags.lmax, "lmax") {
            None => BlockLabel::from_twice(DEFAULT_L_MAX),
            Some(t) => parse_label(&t, "lmax")?,
        };
        if l_max.twice_l() > L_MAX_CAP {
            return Err(CliError::Usage(format!("lmax {} exceeds the cap {}", l_max, BlockLabel::from_twice(L_MAX_CAP))));
        }
        let format = match file.pick(flags.format, "format") {
            None => Format::Pretty,
            Some(f) => f.parse().map_err(CliError::Usage)?,
        };
        let out = flags.out.or_else(|| file.get("out").map(PathBuf::from));
        let convention = file.pick(flags.convention, "convention").unwrap_or_else(|| CONVENTION.to_string());
        if convention != CONVENTION {
            return Err(CliError::Usage(format!("unsupported sign convention `{}` (only {})", convention, CONVENTION)));
        }
        Ok(RunConfig { q_text, precision, tolerance, l_max, format, out, convention })
    }

    pub fn q(&self) -> Result<DeformationParameter, CliError> {
        let p = parse_q(&self.q_text)?;
        warn_decimal(&self.q_text, &p);
        Ok(p)
    }

    pub fn check_l(&self, l: BlockLabel, what: &str) -> Result<(), CliError> {
        if l > self.l_max {
            return Err(CliError::Usage(format!("{} = {} exceeds lmax = {}", what, l, self.l_max)));
        }
        Ok(())
    }
}

/// Decimal input is read as an exact rational; say so.
pub fn warn_decimal(text: &str, p: &DeformationParameter) {
    let t = text.trim();
    if t.contains('.') || t.contains('e') || t.contains('E') {
        eprintln!("warning: decimal q `{}` read exactly as {}", t, p.exact_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty_flags() -> GlobalFlags {
        GlobalFlags { q: None, precision: None, tolerance: None, lmax: None, format: None, out: None, convention: None }
    }

    #[test]
    fn flags_win_over_file() {
        let file = FileValues::parse("q = 5/4\nprecision=192\n# comment\nformat=json\n").unwrap();
        let mut flags = empty_flags();
        flags.q = Some("2".into());
        let cfg = RunConfig::resolve(flags, &file, Some("256".into())).unwrap();
        assert_eq!(cfg.q_text, "2");
        assert_eq!(cfg.precision, 192);
        assert_eq!(cfg.format, Format::Json);
    }

    #[test]
    fn env_precision_is_a_default() {
        let cfg = RunConfig::resolve(empty_flags(), &FileValues::default(), Some("160".into())).unwrap();
        assert_eq!(cfg.precision, 160);
        let cfg = RunConfig::resolve(empty_flags(), &FileValues::default(), None).unwrap();
        assert_eq!(cfg.precision, DEFAULT_PRECISION);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(FileValues::parse("colour=red").is_err());
        assert!(FileValues::parse("q").is_err());
        let mut flags = empty_flags();
        flags.precision = Some("32".into());
        assert!(RunConfig::resolve(flags, &FileValues::default(), None).is_err());
        let mut flags = empty_flags();
        flags.lmax = Some("7".into());
        assert!(RunConfig::resolve(flags, &FileValues::default(), None).is_err());
    }
}
