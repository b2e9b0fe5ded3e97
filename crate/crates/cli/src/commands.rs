use std::fmt;
use std::path::{Path, PathBuf};

use zeta_fluct::expsum::{
    experiments_report, phase_frequency, prime_phase_sum, run_experiment, Battery, BatterySpec,
    Phase, PhaseGrid,
};
use zeta_fluct::predictor::{GFunction, PredictedGrid};
use zeta_fluct::report::CsvReport;
use zeta_fluct::s_functions::PrimeSieve;
use zeta_fluct::sampler::{
    fluctuations, two_point_samples, two_point_x_samples, x_samples, OffsetSpec, WindowSpec,
};
use zeta_fluct::stats::{covariance_report, empirical_cdf_vs_gaussian, moment_report, S_GRID};
use zeta_fluct::zeros::{compute_table, ingest_table, verify_count, MAX_HEIGHT, MIN_HEIGHT};
use zeta_fluct::{Error, ZeroCache, ZeroTable};

use crate::config::RunConfig;

/// Process exit status with its message.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_COVERAGE: u8 = 3;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn coverage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_COVERAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::HeightExceeded { .. } | Error::IndexOutOfRange { .. } => EXIT_COVERAGE,
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::NoZeros(_)
            | Error::NotMonotone { .. }
            | Error::NotPositive { .. }
            | Error::InvalidParameter(_)
            | Error::Domain(_)
            | Error::TooFewSamples { .. } => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        Self::usage(format!("{e:#}"))
    }
}

pub type CmdResult = Result<(), CliError>;

/// Settings shared by every command after merging flags over the config.
pub struct Context {
    pub cache: ZeroCache,
    pub out: PathBuf,
    pub config: RunConfig,
}

impl Context {
    fn load_table(&self) -> Result<ZeroTable, CliError> {
        if !self.cache.exists() {
            return Err(CliError::coverage(format!(
                "no zero cache at {}; run `zeta-fluct zeros compute` or `zeta-fluct zeros ingest` first",
                self.cache.path().display()
            )));
        }
        Ok(self.cache.load()?)
    }

    fn save(&self, name: &str, report: &CsvReport) -> CmdResult {
        let path = self.out.join(name);
        report.save(&path)?;
        println!("wrote {}", path.display());
        Ok(())
    }
}

fn table_meta(report: &mut CsvReport, command: &str, table: &ZeroTable) {
    report
        .meta("command", command)
        .meta("zeros", table.len())
        .meta("zero_source", table.source())
        .meta("max_height", table.max_height())
        .meta("cache_fingerprint", format!("{:016x}", table.fingerprint()));
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Fails with exit 3 unless the table holds `last_index` zeros and covers
/// `height`.
fn require_coverage(table: &ZeroTable, last_index: usize, height: f64) -> CmdResult {
    if table.len() < last_index || table.max_height() < height {
        return Err(CliError::coverage(format!(
            "insufficient zero coverage: need {last_index} zeros and max height {height:.6}; \
             cache has {} zeros up to height {:.6}",
            table.len(),
            table.max_height()
        )));
    }
    Ok(())
}

fn max_evaluation_point(grid: &PredictedGrid<f64>, xis: &[f64]) -> f64 {
    grid.entries
        .iter()
        .flat_map(|p| xis.iter().map(move |&xi| p.t + xi * p.sigma))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn with_xi(grid: &PredictedGrid<f64>, xi: f64) -> PredictedGrid<f64> {
    PredictedGrid { xi, ..grid.clone() }
}

pub fn zeros_compute(ctx: &Context, t_max: Option<f64>) -> CmdResult {
    let t_max = t_max
        .or(ctx.config.t_max)
        .ok_or_else(|| CliError::usage("zeros compute needs --t-max"))?;
    if !(t_max > MIN_HEIGHT && t_max <= MAX_HEIGHT) {
        return Err(CliError::usage(format!(
            "--t-max must lie in ({MIN_HEIGHT}, {MAX_HEIGHT:e}], got {t_max}"
        )));
    }
    let (table, diagnostics) = compute_table(t_max)?;
    for d in &diagnostics {
        eprintln!("warning: {d:?}");
    }
    let path = ctx.cache.store(&table)?;
    let check = verify_count(&table, t_max)?;
    println!(
        "computed {} zeros below height {t_max} (N(T) - round(M(T)) = {}); cache {}",
        table.len(),
        check.discrepancy,
        path.display()
    );
    Ok(())
}

pub fn zeros_ingest(ctx: &Context, file: Option<PathBuf>, limit: Option<usize>) -> CmdResult {
    let file = file
        .or_else(|| ctx.config.file.clone())
        .ok_or_else(|| CliError::usage("zeros ingest needs --file"))?;
    let limit = limit.or(ctx.config.limit).unwrap_or(usize::MAX);
    let table = ingest_table(&file, limit)?;
    let path = ctx.cache.store(&table)?;
    println!(
        "ingested {} zeros up to height {} from {}; cache {}",
        table.len(),
        table.max_height(),
        file.display(),
        path.display()
    );
    Ok(())
}

pub struct FluctParams {
    pub n: Option<usize>,
    pub theta: Option<f64>,
    pub xi: Option<Vec<f64>>,
}

pub fn fluct(ctx: &Context, p: FluctParams) -> CmdResult {
    let n = p.n.or(ctx.config.n).unwrap_or(100_000);
    let theta = p.theta.or(ctx.config.theta).unwrap_or(1.0);
    let xis =
        p.xi.or_else(|| ctx.config.xi.clone())
            .unwrap_or_else(|| vec![-1.0, 0.0, 1.0]);
    let window = WindowSpec::new(n, theta)
        .map_err(|_| CliError::usage(format!("--theta must satisfy 1/2 < θ ≤ 1, got {theta}")))?;
    let table = ctx.load_table()?;
    let grid = PredictedGrid::build(window.base(), window.last(), 0.0);
    require_coverage(&table, window.last(), max_evaluation_point(&grid, &xis))?;

    let samples = fluctuations(&table, &grid, &window)?;
    let xs: Vec<Vec<f64>> = xis
        .iter()
        .map(|&xi| x_samples(&table, &with_xi(&grid, xi), &window))
        .collect::<Result<_, _>>()?;
    let x_names: Vec<String> = xis.iter().map(|xi| format!("X[xi={xi}]")).collect();

    let stamp = |report: &mut CsvReport| {
        table_meta(report, "fluct", &table);
        report
            .meta("n", n)
            .meta("theta", theta)
            .meta("window", format!("{}..={}", window.base(), window.last()))
            .meta("xi", join(&xis));
    };

    let mut header: Vec<String> = ["k", "gamma", "t", "sigma", "f"].map(String::from).to_vec();
    header.extend(x_names.iter().cloned());
    let mut rows = CsvReport::new(header);
    stamp(&mut rows);
    for (i, s) in samples.iter().enumerate() {
        let mut cells = vec![
            s.k.to_string(),
            s.gamma.to_string(),
            s.t.to_string(),
            s.sigma.to_string(),
            s.f.to_string(),
        ];
        cells.extend(xs.iter().map(|x| x[i].to_string()));
        rows.row(cells);
    }
    ctx.save("samples.csv", &rows)?;

    let f: Vec<f64> = samples.iter().map(|s| s.f).collect();
    let variables: Vec<(&str, &[f64])> = std::iter::once(("f", f.as_slice()))
        .chain(
            x_names
                .iter()
                .map(String::as_str)
                .zip(xs.iter().map(Vec::as_slice)),
        )
        .collect();

    let mut moments = CsvReport::new([
        "variable",
        "order",
        "empirical",
        "target",
        "deviation",
        "count",
    ]);
    stamp(&mut moments);
    let mut cdf = CsvReport::new(["variable", "s", "empirical", "gaussian", "deviation"]);
    stamp(&mut cdf);
    for (name, values) in &variables {
        for row in moment_report(values, 8)?.rows {
            moments.row([
                name.to_string(),
                row.label.clone(),
                row.empirical.to_string(),
                row.target.to_string(),
                row.deviation().to_string(),
                row.count.to_string(),
            ]);
        }
        let report = empirical_cdf_vs_gaussian(values, &S_GRID)?;
        for row in &report.rows {
            cdf.row([
                name.to_string(),
                row.label.clone(),
                row.empirical.to_string(),
                row.target.to_string(),
                row.deviation().to_string(),
            ]);
        }
        cdf.row([
            name.to_string(),
            "sup".into(),
            report.ks.to_string(),
            "".into(),
            report.ks.to_string(),
        ]);
        println!("{name}: KS distance {:.4}", report.ks);
    }
    ctx.save("moments.csv", &moments)?;
    ctx.save("cdf.csv", &cdf)
}

pub struct CovParams {
    pub n: Option<usize>,
    pub theta: Option<f64>,
    pub betas: Option<Vec<f64>>,
    pub xi: Option<f64>,
}

/// Order-preserving removal of repeated values, reporting each repeat.
pub fn dedupe(values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut kept: Vec<f64> = Vec::new();
    let mut dropped = Vec::new();
    for &v in values {
        if kept.contains(&v) {
            dropped.push(v);
        } else {
            kept.push(v);
        }
    }
    (kept, dropped)
}

pub fn cov(ctx: &Context, p: CovParams) -> CmdResult {
    let n = p.n.or(ctx.config.n).unwrap_or(100_000);
    let xi =
        p.xi.or_else(|| ctx.config.xi.as_ref().and_then(|v| v.first().copied()))
            .unwrap_or(0.0);
    let requested = p
        .betas
        .or_else(|| ctx.config.betas.clone())
        .unwrap_or_else(|| vec![0.25, 0.5, 1.0, 2.0]);
    if requested.is_empty() {
        return Err(CliError::usage("--betas must not be empty"));
    }
    let (betas, dropped) = dedupe(&requested);
    for b in dropped {
        eprintln!("warning: duplicate beta {b} ignored");
    }
    let offsets: Vec<OffsetSpec> = betas
        .iter()
        .map(|&b| {
            OffsetSpec::new(b).map_err(|_| CliError::usage(format!("beta must be > 0, got {b}")))
        })
        .collect::<Result<_, _>>()?;
    let theta = p.theta.or(ctx.config.theta).unwrap_or(1.0);
    let window = WindowSpec::new(n, theta)?;
    let max_offset = offsets.iter().map(|o| o.offset(n)).max().unwrap_or(0);
    let top = window.last() + max_offset;

    let table = ctx.load_table()?;
    let grid = PredictedGrid::build(n, top, xi);
    require_coverage(&table, top, max_evaluation_point(&grid, &[xi]))?;

    let mut report = CsvReport::new(["beta", "offset", "pairs", "corr_f", "corr_x", "target"]);
    table_meta(&mut report, "cov", &table);
    report
        .meta("n", n)
        .meta("theta", theta)
        .meta("xi", xi)
        .meta("betas", join(&betas));
    for o in &offsets {
        let offset = o.offset(n);
        let f = covariance_report(
            &two_point_samples(&table, &grid, &window, o)?,
            o.beta(),
            offset,
        )?;
        let x = covariance_report(
            &two_point_x_samples(&table, &grid, &window, o)?,
            o.beta(),
            offset,
        )?;
        println!(
            "beta {}: offset {offset}, corr f {:.4}, corr X {:.4}, target {}",
            o.beta(),
            f.correlation,
            x.correlation,
            f.target
        );
        report.row([
            o.beta().to_string(),
            offset.to_string(),
            f.pairs.to_string(),
            f.correlation.to_string(),
            x.correlation.to_string(),
            f.target.to_string(),
        ]);
    }
    ctx.save("cov.csv", &report)
}

pub struct ExpsumParams {
    pub primes: Option<Vec<u64>>,
    pub split: Option<usize>,
    pub k: Option<usize>,
    pub h: Option<usize>,
    pub seed: u64,
    pub per_height: usize,
    pub xi: f64,
    pub betas: Option<Vec<f64>>,
    pub cutoffs: Option<Vec<f64>>,
}

/// Largest prime-sum cutoff accepted, to bound the sieve.
pub const MAX_CUTOFF: f64 = 1e8;

pub fn expsum(ctx: &Context, p: ExpsumParams) -> CmdResult {
    if let (Some(k), Some(h)) = (p.k, p.h) {
        if h > k {
            return Err(CliError::usage(format!(
                "H ≤ K is required, got H = {h} > K = {k}"
            )));
        }
    }
    if p.h == Some(0) || p.k == Some(0) {
        return Err(CliError::usage("K and H must be ≥ 1"));
    }
    let g = GFunction::new(p.xi);
    let mut report_meta: Vec<(&str, String)> = vec![("xi", p.xi.to_string())];

    let (experiments, fitted, inequality) = match &p.primes {
        Some(primes) => {
            let k = p.k.unwrap_or(10_000);
            let h = p.h.unwrap_or(k);
            if h > k {
                return Err(CliError::usage(format!(
                    "H ≤ K is required, got H = {h} > K = {k}"
                )));
            }
            let split = p.split.unwrap_or(primes.len() / 2);
            let grid = PhaseGrid::new(&g, k, h)?;
            let phase = Phase::PrimeTuple {
                primes: primes.clone(),
                split,
            };
            let e = run_experiment(0, phase, k, h, &g, &grid)?;
            let ratio = e.ratio();
            report_meta.push((
                "primes",
                primes
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ));
            report_meta.push(("split", split.to_string()));
            (vec![e], ratio, None)
        }
        None => {
            let mut spec = BatterySpec {
                seed: p.seed,
                per_height: p.per_height,
                xi: p.xi,
                h: p.h,
                ..BatterySpec::default()
            };
            if let Some(k) = p.k {
                spec.heights = vec![k];
            }
            if let Some(h) = p.h {
                if let Some(&k) = spec.heights.iter().find(|&&k| h > k) {
                    return Err(CliError::usage(format!(
                        "H ≤ K is required, got H = {h} > K = {k}"
                    )));
                }
            }
            let battery = Battery::generate(&spec)?;
            report_meta.push(("seed", spec.seed.to_string()));
            report_meta.push(("y", spec.y.to_string()));
            report_meta.push(("max_n", spec.max_n.to_string()));
            let c = battery.fitted_constant();
            let ok = battery.factorization_inequality_holds();
            (battery.experiments, c, Some(ok))
        }
    };

    let mut report = experiments_report(&experiments);
    report.meta("command", "expsum");
    for (k, v) in &report_meta {
        report.meta(*k, v);
    }
    report.meta("fitted_constant", fitted);
    if let Some(ok) = inequality {
        report.meta("factorization_inequality", ok);
    }
    println!(
        "{} experiments, fitted constant C = {fitted:.6}",
        experiments.len()
    );
    ctx.save("expsum.csv", &report)?;

    let betas = p
        .betas
        .or_else(|| ctx.config.betas.clone())
        .unwrap_or_else(|| vec![0.5, 2.0]);
    let cutoffs = p
        .cutoffs
        .or_else(|| ctx.config.cutoffs.clone())
        .unwrap_or_else(|| vec![1e4, 1e5, 1e6]);
    if let Some(&x) = cutoffs.iter().find(|&&x| !(3.0..=MAX_CUTOFF).contains(&x)) {
        return Err(CliError::usage(format!(
            "cutoffs must lie in [3, {MAX_CUTOFF:e}], got {x}"
        )));
    }
    if let Some(&b) = betas.iter().find(|&&b| !(b > 0.0)) {
        return Err(CliError::usage(format!("beta must be > 0, got {b}")));
    }
    let sieve = PrimeSieve::new(cutoffs.iter().fold(0.0f64, |a, &b| a.max(b)) as u64);
    let mut phase = CsvReport::new(["beta", "x", "s", "re", "im", "ratio", "target"]);
    phase
        .meta("command", "expsum")
        .meta("betas", join(&betas))
        .meta("cutoffs", join(&cutoffs));
    for &beta in &betas {
        for &x in &cutoffs {
            let s = phase_frequency(x, beta);
            let sum = prime_phase_sum(x, s, &sieve)?;
            phase.row([
                beta,
                x,
                s,
                sum.re,
                sum.im,
                sum.re / x.ln().ln(),
                (1.0 - beta).max(0.0),
            ]);
        }
    }
    ctx.save("phase.csv", &phase)
}

pub fn resolve_cache(flag: Option<PathBuf>, config: &RunConfig) -> PathBuf {
    flag.or_else(|| config.cache.clone())
        .unwrap_or_else(|| Path::new("zeta-fluct-cache").to_path_buf())
}
