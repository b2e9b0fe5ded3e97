//! Direct evaluation of the exponential sums `Σ e^{iθ g_k}`, their van der
//! Corput bounds, and prime sums of Mertens type.
//!
//! The van der Corput bound is reported with absolute constant 1; the
//! hidden constant is fitted over a battery, never assumed.

use num_complex::Complex;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::predictor::GFunction;
use crate::report::CsvReport;
use crate::s_functions::PrimeSieve;
use crate::scalar::{CompensatedSum, Real};

/// Safety margin applied to endpoint values of `|f''|`.
pub const SECOND_DERIVATIVE_MARGIN: f64 = 0.1;

/// `g_K, …, g_{K+len−1}`, precomputed so that many phases share one grid.
#[derive(Clone, Debug)]
pub struct PhaseGrid<T> {
    k0: usize,
    values: Vec<T>,
}

impl<T: Real> PhaseGrid<T> {
    pub fn new(g: &GFunction<T>, k0: usize, len: usize) -> Result<Self> {
        let values = (k0..k0 + len)
            .into_par_iter()
            .map(|k| g.eval(T::from_count(k)))
            .collect::<Result<_>>()?;
        Ok(Self { k0, values })
    }

    pub fn start(&self) -> usize {
        self.k0
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `g_k`, when `k` is on the grid.
    pub fn get(&self, k: usize) -> Option<T> {
        k.checked_sub(self.k0)
            .and_then(|i| self.values.get(i).copied())
    }

    fn slice(&self, k: usize, h: usize) -> Result<&[T]> {
        let lo = k.checked_sub(self.k0);
        match lo {
            Some(lo) if lo + h <= self.values.len() => Ok(&self.values[lo..lo + h]),
            _ => Err(Error::IndexOutOfRange {
                index: k + h,
                len: self.k0 + self.values.len(),
            }),
        }
    }

    /// `Σ_{k=K}^{K+H−1} e^{iθ g_k}`.
    pub fn exp_sum(&self, theta: T, k: usize, h: usize) -> Result<Complex<T>> {
        Ok(complex_sum(self.slice(k, h)?.iter().map(|&g| theta * g)))
    }

    /// `Σ_{k=K}^{K+H−1} e^{−i(g_k log p₁ − g_{k+u} log p₂)}`.
    pub fn two_point_sum(
        &self,
        p1: u64,
        p2: u64,
        k: usize,
        h: usize,
        u: usize,
    ) -> Result<Complex<T>> {
        let a = self.slice(k, h)?;
        let b = self.slice(k + u, h)?;
        let (l1, l2) = (T::lit((p1 as f64).ln()), T::lit((p2 as f64).ln()));
        Ok(complex_sum(a.iter().zip(b).map(|(&x, &y)| y * l2 - x * l1)))
    }
}

fn complex_sum<T: Real>(phases: impl Iterator<Item = T>) -> Complex<T> {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for phase in phases {
        let (s, c) = phase.sin_cos();
        re.add(c);
        im.add(s);
    }
    Complex::new(re.value(), im.value())
}

/// `Σ_{k=K}^{K+H−1} e^{iθ g_k}`, requiring `H ≥ 1`.
pub fn direct_exp_sum<T: Real>(
    theta: T,
    k: usize,
    h: usize,
    g: &GFunction<T>,
) -> Result<Complex<T>> {
    require_length(h)?;
    PhaseGrid::new(g, k, h)?.exp_sum(theta, k, h)
}

/// `Σ_{k=K}^{K+H−1} e^{−i(g_k log p₁ − g_{k+u} log p₂)}` for primes `p₁ ≠ p₂`.
pub fn two_point_phase_sum<T: Real>(
    p1: u64,
    p2: u64,
    k: usize,
    h: usize,
    u: usize,
    g: &GFunction<T>,
) -> Result<Complex<T>> {
    require_length(h)?;
    require_distinct_primes(p1, p2)?;
    PhaseGrid::new(g, k, h + u)?.two_point_sum(p1, p2, k, h, u)
}

fn require_length(h: usize) -> Result<()> {
    if h == 0 {
        return Err(Error::InvalidParameter("sum length H must be ≥ 1".into()));
    }
    Ok(())
}

fn require_distinct_primes(p1: u64, p2: u64) -> Result<()> {
    for p in [p1, p2] {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
    }
    if p1 == p2 {
        return Err(Error::InvalidParameter(format!(
            "primes must differ, both are {p1}"
        )));
    }
    Ok(())
}

/// Trial division; meant for the small primes of phase specifications.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `κ|I|λ^{1/2} + λ^{−1/2}`, requiring `λ > 0` and `κ ≥ 1`.
pub fn vdc_bound<T: Real>(lambda: T, kappa: T, interval_len: usize) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(Error::Domain(format!("lambda = {lambda} must be > 0")));
    }
    if !(kappa >= T::one()) {
        return Err(Error::Domain(format!("kappa = {kappa} must be ≥ 1")));
    }
    Ok(kappa * T::from_count(interval_len) * lambda.sqrt() + lambda.sqrt().recip())
}

/// `H n y^{n/2} log y / (K^{1/2} log K) + y^{n/2} K^{1/2} log K`.
pub fn prime_tuple_bound(h: usize, n: u32, y: f64, k: usize) -> f64 {
    let (h, n, k) = (h as f64, n as f64, k as f64);
    let yn2 = y.powf(n / 2.0);
    h * n * yn2 * y.ln() / (k.sqrt() * k.ln()) + yn2 * k.sqrt() * k.ln()
}

/// `H y^{1/2} log y / (K^{1/2} log K) + y^{1/2} K^{1/2} log K`.
pub fn two_point_bound(h: usize, y: f64, k: usize) -> f64 {
    prime_tuple_bound(h, 1, y, k)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureBounds {
    pub theta: f64,
    pub lambda: f64,
    pub kappa: f64,
}

/// `λ, κ` with `λ ≤ |f''| ≤ κλ` from endpoint values and the safety margin.
fn curvature_from_endpoints(theta: f64, a: f64, b: f64) -> Result<CurvatureBounds> {
    let (lo, hi) = (a.abs().min(b.abs()), a.abs().max(b.abs()));
    let lambda = (1.0 - SECOND_DERIVATIVE_MARGIN) * lo;
    if !(lambda > 0.0) {
        return Err(Error::Domain(
            "second derivative vanishes on the interval".into(),
        ));
    }
    Ok(CurvatureBounds {
        theta,
        lambda,
        kappa: (1.0 + SECOND_DERIVATIVE_MARGIN) * hi / lambda,
    })
}

fn checked_product(primes: &[u64]) -> Option<u128> {
    primes
        .iter()
        .try_fold(1u128, |acc, &p| acc.checked_mul(p as u128))
}

/// `θ = log(p_{l+1}⋯p_{2n} / (p_1⋯p_l))`.
pub fn tuple_theta(primes: &[u64], split: usize) -> Result<f64> {
    if primes.is_empty() || primes.len() % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "prime tuple must have even positive length, got {}",
            primes.len()
        )));
    }
    if split == 0 || split > primes.len() {
        return Err(Error::InvalidParameter(format!(
            "split {split} outside 1..={}",
            primes.len()
        )));
    }
    if let Some(p) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    let (lower, upper) = primes.split_at(split);
    let mut a = lower.to_vec();
    let mut b = upper.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a == b {
        return Err(Error::InvalidParameter(
            "prime multisets coincide, so θ = 0".into(),
        ));
    }
    match (checked_product(lower), checked_product(upper)) {
        (Some(den), Some(num)) => {
            // log(num/den) = log1p((num − den)/den) keeps near-cancelling
            // products accurate.
            let diff = num as i128 - den as i128;
            Ok((diff as f64 / den as f64).ln_1p())
        }
        _ => {
            let s = |ps: &[u64]| ps.iter().map(|&p| (p as f64).ln()).sum::<f64>();
            Ok(s(upper) - s(lower))
        }
    }
}

/// `θ` for the tuple and `λ, κ` bracketing `|θ g''|` over `[K, 2K]`.
pub fn lambda_kappa_for_prime_tuple(
    primes: &[u64],
    split: usize,
    k: usize,
    g: &GFunction<f64>,
) -> Result<CurvatureBounds> {
    let theta = tuple_theta(primes, split)?;
    let a = theta * g.second_derivative_exact(k as f64)?;
    let b = theta * g.second_derivative_exact(2.0 * k as f64)?;
    curvature_from_endpoints(theta, a, b)
}

/// `λ, κ` bracketing `|g''(x) log p₁ − g''(x + u) log p₂|` over `[K, K + H]`.
pub fn lambda_kappa_two_point(
    p1: u64,
    p2: u64,
    k: usize,
    h: usize,
    u: usize,
    g: &GFunction<f64>,
) -> Result<CurvatureBounds> {
    require_distinct_primes(p1, p2)?;
    let (l1, l2) = ((p1 as f64).ln(), (p2 as f64).ln());
    let f2 = |x: f64| -> Result<f64> {
        Ok(g.second_derivative_exact(x)? * l1 - g.second_derivative_exact(x + u as f64)? * l2)
    };
    let (a, b) = (f2(k as f64)?, f2((k + h) as f64)?);
    if a.signum() != b.signum() {
        return Err(Error::Domain(
            "second derivative changes sign on the interval".into(),
        ));
    }
    curvature_from_endpoints(l2 - l1, a, b)
}

/// `Σ_{p≤x} p^{is}/p`.
pub fn prime_phase_sum(x: f64, s: f64, sieve: &PrimeSieve) -> Result<Complex<f64>> {
    if !(x >= 3.0) {
        return Err(Error::Domain(format!(
            "prime phase sum needs x ≥ 3, got {x}"
        )));
    }
    if (sieve.limit() as f64) < x.floor() {
        return Err(Error::SieveTooSmall {
            limit: sieve.limit(),
            required: x,
        });
    }
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for &p in sieve.up_to(x) {
        let pf = p as f64;
        let (sn, cs) = (s * pf.ln()).sin_cos();
        re.add(cs / pf);
        im.add(sn / pf);
    }
    Ok(Complex::new(re.value(), im.value()))
}

/// `s(x) = 2π (log x)^{β−1}`.
pub fn phase_frequency(x: f64, beta: f64) -> f64 {
    std::f64::consts::TAU * x.ln().powf(beta - 1.0)
}

/// `Re Σ_{p≤x} p^{is(x)}/p / log log x` at each cutoff.
pub fn phase_sum_ratios(beta: f64, cutoffs: &[f64], sieve: &PrimeSieve) -> Result<Vec<f64>> {
    cutoffs
        .iter()
        .map(|&x| Ok(prime_phase_sum(x, phase_frequency(x, beta), sieve)?.re / x.ln().ln()))
        .collect()
}

/// `(Σ_{p<y} log p / p, Σ_{p<y} 1/p)`.
pub fn mertens_sums(y: f64, sieve: &PrimeSieve) -> Result<(f64, f64)> {
    if !(y >= 2.0) {
        return Err(Error::Domain(format!("Mertens sums need y ≥ 2, got {y}")));
    }
    if (sieve.limit() as f64) < y.ceil() - 1.0 {
        return Err(Error::SieveTooSmall {
            limit: sieve.limit(),
            required: y,
        });
    }
    let mut a = CompensatedSum::new();
    let mut b = CompensatedSum::new();
    for &p in sieve.below(y) {
        let pf = p as f64;
        a.add(pf.ln() / pf);
        b.add(1.0 / pf);
    }
    Ok((a.value(), b.value()))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Phase {
    Theta(f64),
    PrimeTuple { primes: Vec<u64>, split: usize },
    TwoPoint { p1: u64, p2: u64, offset: usize },
}

impl Phase {
    /// Comma-free description for reports.
    pub fn label(&self) -> String {
        match self {
            Phase::Theta(t) => format!("theta={t}"),
            Phase::PrimeTuple { primes, split } => {
                let ps: Vec<String> = primes.iter().map(u64::to_string).collect();
                format!("tuple={} split={split}", ps.join(" "))
            }
            Phase::TwoPoint { p1, p2, offset } => format!("p1={p1} p2={p2} u={offset}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpSumExperiment {
    pub id: usize,
    pub k: usize,
    pub h: usize,
    pub phase: Phase,
    pub theta: f64,
    pub magnitude: f64,
    /// van der Corput bound with constant 1.
    pub bound: f64,
}

impl ExpSumExperiment {
    pub fn ratio(&self) -> f64 {
        self.magnitude / self.bound
    }
}

/// Runs one experiment on a grid covering the sum.
pub fn run_experiment(
    id: usize,
    phase: Phase,
    k: usize,
    h: usize,
    g: &GFunction<f64>,
    grid: &PhaseGrid<f64>,
) -> Result<ExpSumExperiment> {
    require_length(h)?;
    let (sum, curv) = match &phase {
        Phase::Theta(theta) => {
            let a = theta * g.second_derivative_exact(k as f64)?;
            let b = theta * g.second_derivative_exact(2.0 * k as f64)?;
            (
                grid.exp_sum(*theta, k, h)?,
                curvature_from_endpoints(*theta, a, b)?,
            )
        }
        Phase::PrimeTuple { primes, split } => {
            let curv = lambda_kappa_for_prime_tuple(primes, *split, k, g)?;
            (grid.exp_sum(curv.theta, k, h)?, curv)
        }
        Phase::TwoPoint { p1, p2, offset } => (
            grid.two_point_sum(*p1, *p2, k, h, *offset)?,
            lambda_kappa_two_point(*p1, *p2, k, h, *offset, g)?,
        ),
    };
    Ok(ExpSumExperiment {
        id,
        k,
        h,
        phase,
        theta: curv.theta,
        magnitude: sum.norm(),
        bound: vdc_bound(curv.lambda, curv.kappa, h)?,
    })
}

/// Randomized prime-tuple experiments and their fitted constant.
#[derive(Clone, Debug)]
pub struct Battery {
    pub experiments: Vec<ExpSumExperiment>,
    /// Prime bound `y`: every tuple prime is below it.
    pub y: u64,
}

/// Shape of a generated battery.
#[derive(Clone, Debug, PartialEq)]
pub struct BatterySpec {
    pub seed: u64,
    pub heights: Vec<usize>,
    pub per_height: usize,
    pub y: u64,
    pub max_n: usize,
    pub xi: f64,
    /// Fixed sum length; drawn uniformly from `1..=K` when absent.
    pub h: Option<usize>,
}

impl Default for BatterySpec {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            heights: vec![1_000, 10_000, 100_000],
            per_height: 40,
            y: 100,
            max_n: 2,
            xi: 0.0,
            h: None,
        }
    }
}

impl Battery {
    pub fn generate(spec: &BatterySpec) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let primes: Vec<u64> = (2..spec.y).filter(|&p| is_prime(p)).collect();
        if primes.len() < 2 || spec.max_n == 0 {
            return Err(Error::InvalidParameter(
                "battery needs two primes and n ≥ 1".into(),
            ));
        }
        let g = GFunction::new(spec.xi);
        let mut experiments = Vec::new();
        for &k in &spec.heights {
            let grid = PhaseGrid::new(&g, k, k)?;
            for _ in 0..spec.per_height {
                let n = rng.random_range(1..=spec.max_n);
                let (tuple, split) = loop {
                    let tuple: Vec<u64> = (0..2 * n)
                        .map(|_| *primes.choose(&mut rng).expect("nonempty"))
                        .collect();
                    let split = rng.random_range(1..=2 * n);
                    if tuple_theta(&tuple, split).is_ok() {
                        break (tuple, split);
                    }
                };
                let h = match spec.h {
                    Some(h) if h <= k => h,
                    Some(h) => {
                        return Err(Error::InvalidParameter(format!("H = {h} exceeds K = {k}")))
                    }
                    None => rng.random_range(1..=k),
                };
                let phase = Phase::PrimeTuple {
                    primes: tuple,
                    split,
                };
                experiments.push(run_experiment(experiments.len(), phase, k, h, &g, &grid)?);
            }
        }
        Ok(Self {
            experiments,
            y: spec.y,
        })
    }

    /// Least `C` with `|sum| ≤ C · bound` for every experiment.
    pub fn fitted_constant(&self) -> f64 {
        self.experiments
            .iter()
            .map(ExpSumExperiment::ratio)
            .fold(0.0, f64::max)
    }

    /// Whether `|θ| ≥ 1/yⁿ` holds for every tuple of length `2n`.
    pub fn factorization_inequality_holds(&self) -> bool {
        self.experiments.iter().all(|e| match &e.phase {
            Phase::PrimeTuple { primes, .. } => {
                e.theta.abs() >= (self.y as f64).powi(primes.len() as i32 / 2).recip()
            }
            _ => true,
        })
    }
}

/// Columns `id,K,H,phase,theta,abs_sum,bound,ratio`.
pub fn experiments_report(experiments: &[ExpSumExperiment]) -> CsvReport {
    let mut report = CsvReport::new([
        "id", "K", "H", "phase", "theta", "abs_sum", "bound", "ratio",
    ]);
    for e in experiments {
        report.row([
            e.id.to_string(),
            e.k.to_string(),
            e.h.to_string(),
            e.phase.label(),
            e.theta.to_string(),
            e.magnitude.to_string(),
            e.bound.to_string(),
            e.ratio().to_string(),
        ]);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_phase_counts_terms() {
        let g = GFunction::new(0.0);
        let s = direct_exp_sum(0.0, 1000, 37, &g).unwrap();
        assert_eq!(s.re, 37.0);
        assert_eq!(s.im, 0.0);
        assert!(direct_exp_sum(0.0, 1000, 0, &g).is_err());
    }

    #[test]
    fn conjugate_symmetry() {
        let g = GFunction::new(0.5);
        let a = direct_exp_sum(0.7, 2000, 300, &g).unwrap();
        let b = direct_exp_sum(-0.7, 2000, 300, &g).unwrap();
        assert!((a - b.conj()).norm() < 1e-10);
    }

    #[test]
    fn vdc_examples() {
        assert_eq!(vdc_bound(1.0, 1.0, 10).unwrap(), 11.0);
        let (kappa, len) = (3.0, 400usize);
        let star = 1.0 / (kappa * len as f64);
        let v = vdc_bound(star, kappa, len).unwrap();
        assert!((v - 2.0 * (kappa * len as f64).sqrt()).abs() < 1e-12);
        assert!(vdc_bound(0.0, 1.0, 10).is_err());
        assert!(vdc_bound(1.0, 0.5, 10).is_err());
    }

    #[test]
    fn tuple_bound_is_vdc_substitution() {
        for (h, n, y, k) in [(100usize, 1u32, 3.0f64, 1000usize), (5000, 2, 100.0, 20000)] {
            let kf = k as f64;
            let lambda = 1.0 / (y.powi(n as i32) * kf * kf.ln().powi(2));
            let kappa = n as f64 * y.powi(n as i32) * y.ln();
            let v = vdc_bound(lambda, kappa, h).unwrap();
            let shape = prime_tuple_bound(h, n, y, k);
            assert!((v - shape).abs() <= 1e-12 * shape, "{v} vs {shape}");
        }
    }

    #[test]
    fn tuple_theta_examples() {
        let t = tuple_theta(&[2, 3], 1).unwrap();
        assert!((t - 1.5f64.ln()).abs() < 1e-16);
        assert!(t >= 1.0 / 5.0);
        assert_eq!(
            tuple_theta(&[3, 2], 1).unwrap(),
            -tuple_theta(&[2, 3], 1).unwrap()
        );
        assert!(tuple_theta(&[2, 3, 3, 2], 2).is_err());
        assert!(tuple_theta(&[2, 4], 1).is_err());
        assert!(tuple_theta(&[2, 3, 5], 1).is_err());
    }

    #[test]
    fn lambda_kappa_bracket_curvature() {
        let g = GFunction::new(0.0);
        let c = lambda_kappa_for_prime_tuple(&[2, 3], 1, 10_000, &g).unwrap();
        assert!(c.kappa >= 1.0);
        for x in [10_000.0, 12_500.0, 15_000.0, 20_000.0] {
            let f2 = (c.theta * g.second_derivative_exact(x).unwrap()).abs();
            assert!(c.lambda <= f2 && f2 <= c.kappa * c.lambda);
        }
    }

    #[test]
    fn two_point_reduces_to_direct_sum() {
        let g = GFunction::new(0.0);
        let a = two_point_phase_sum(2, 3, 10_000, 500, 0, &g).unwrap();
        let b = direct_exp_sum(1.5f64.ln(), 10_000, 500, &g).unwrap();
        assert!((a - b).norm() < 1e-8, "{a} vs {b}");
        assert!(two_point_phase_sum(3, 3, 10_000, 10, 1, &g).is_err());
        assert!(two_point_phase_sum(2, 9, 10_000, 10, 1, &g).is_err());
    }

    #[test]
    fn small_prime_sums() {
        let sieve = PrimeSieve::new(100);
        let s = prime_phase_sum(3.0, 0.0, &sieve).unwrap();
        assert!((s.re - 5.0 / 6.0).abs() < 1e-15 && s.im == 0.0);
        assert!(prime_phase_sum(2.0, 0.0, &sieve).is_err());
        assert!(prime_phase_sum(1000.0, 0.0, &sieve).is_err());
        let (a, b) = mertens_sums(3.0, &sieve).unwrap();
        assert!((a - 2f64.ln() / 2.0).abs() < 1e-16);
        assert_eq!(b, 0.5);
    }

    #[test]
    fn battery_is_seeded() {
        let spec = BatterySpec {
            heights: vec![1000],
            per_height: 5,
            ..BatterySpec::default()
        };
        let a = Battery::generate(&spec).unwrap();
        let b = Battery::generate(&spec).unwrap();
        assert_eq!(a.experiments, b.experiments);
        assert_eq!(a.experiments.len(), 5);
        assert!(a.factorization_inequality_holds());
    }
}
