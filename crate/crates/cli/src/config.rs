//! Line-oriented `key = value` run configuration. Flags override it.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// Values read from a configuration file; every field is optional.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub cache: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub t_max: Option<f64>,
    pub file: Option<PathBuf>,
    pub limit: Option<usize>,
    pub n: Option<usize>,
    pub theta: Option<f64>,
    pub xi: Option<Vec<f64>>,
    pub betas: Option<Vec<f64>>,
    pub cutoffs: Option<Vec<f64>>,
}

pub const KEYS: [&str; 10] = [
    "cache", "out", "t_max", "file", "limit", "n", "theta", "xi", "betas", "cutoffs",
];

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// Blank lines and `#` comments are skipped; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key = value, got {raw:?}", i + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            let at = || format!("line {}: bad value for {key}: {value:?}", i + 1);
            match key {
                "cache" => cfg.cache = Some(value.into()),
                "out" => cfg.out = Some(value.into()),
                "file" => cfg.file = Some(value.into()),
                "t_max" => cfg.t_max = Some(value.parse().with_context(at)?),
                "limit" => cfg.limit = Some(value.parse().with_context(at)?),
                "n" => cfg.n = Some(value.parse().with_context(at)?),
                "theta" => cfg.theta = Some(value.parse().with_context(at)?),
                "xi" => cfg.xi = Some(parse_list(value).with_context(at)?),
                "betas" => cfg.betas = Some(parse_list(value).with_context(at)?),
                "cutoffs" => cfg.cutoffs = Some(parse_list(value).with_context(at)?),
                _ => bail!(
                    "line {}: unknown key {key:?} (known: {})",
                    i + 1,
                    KEYS.join(", ")
                ),
            }
        }
        Ok(cfg)
    }
}

/// Comma-separated reals.
pub fn parse_list(value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("not a number: {s:?}"))
        })
        .collect()
}
