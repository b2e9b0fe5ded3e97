//! Empirical moments, distribution distances and correlations.

use crate::error::{Error, Result};
use crate::gaussian::{gauss_moment, gaussian_joint_moment_real};
use crate::scalar::{CompensatedSum, Real};

/// Evaluation grid `{−3, −2.5, …, 3}` for CDF comparisons.
pub const S_GRID: [f64; 13] = [
    -3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0,
];

/// Minimum pair count for a covariance report.
pub const MIN_PAIRS: usize = 1000;

/// Largest `a + b` for joint-moment reports.
pub const MAX_JOINT_ORDER: u32 = 6;

/// `Φ(x) = ½ erfc(−x/√2)`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

fn nonempty<T>(samples: &[T]) -> Result<()> {
    if samples.is_empty() {
        Err(Error::EmptySample)
    } else {
        Ok(())
    }
}

pub fn mean<T: Real>(samples: &[T]) -> Result<T> {
    nonempty(samples)?;
    let s: CompensatedSum<T> = samples.iter().copied().collect();
    Ok(s.value() / T::from_count(samples.len()))
}

/// `(1/n) Σ x^p`; `p = 0` gives exactly 1.
pub fn raw_moment<T: Real>(samples: &[T], p: u32) -> Result<T> {
    nonempty(samples)?;
    if p == 0 {
        return Ok(T::one());
    }
    let s: CompensatedSum<T> = samples.iter().map(|&x| x.powi(p as i32)).collect();
    Ok(s.value() / T::from_count(samples.len()))
}

/// `(1/n) Σ (x − x̄)^p`.
pub fn central_moment<T: Real>(samples: &[T], p: u32) -> Result<T> {
    let m = mean(samples)?;
    let s: CompensatedSum<T> = samples.iter().map(|&x| (x - m).powi(p as i32)).collect();
    Ok(s.value() / T::from_count(samples.len()))
}

/// Population variance.
pub fn variance<T: Real>(samples: &[T]) -> Result<T> {
    central_moment(samples, 2)
}

/// `m₄ / m₂²`; 3 for a Gaussian.
pub fn kurtosis_ratio<T: Real>(samples: &[T]) -> Result<T> {
    let m2 = central_moment(samples, 2)?;
    if m2 == T::zero() {
        return Err(Error::DegenerateVariance("kurtosis of constant sample"));
    }
    Ok(central_moment(samples, 4)? / (m2 * m2))
}

/// One empirical statistic against its target.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentRow {
    pub label: String,
    pub empirical: f64,
    pub target: f64,
    pub count: usize,
}

impl MomentRow {
    pub fn deviation(&self) -> f64 {
        (self.empirical - self.target).abs()
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct MomentReport {
    pub rows: Vec<MomentRow>,
}

impl MomentReport {
    pub fn max_deviation(&self) -> f64 {
        self.rows
            .iter()
            .map(MomentRow::deviation)
            .fold(0.0, f64::max)
    }
}

/// Raw moments of orders `0..=max_order` against `E Y^p`.
pub fn moment_report(samples: &[f64], max_order: u32) -> Result<MomentReport> {
    let rows = (0..=max_order)
        .map(|p| {
            Ok(MomentRow {
                label: p.to_string(),
                empirical: raw_moment(samples, p)?,
                target: gauss_moment(p)? as f64,
                count: samples.len(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(MomentReport { rows })
}

/// Kolmogorov–Smirnov distance to `Φ` plus the CDF comparison on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CdfReport {
    pub ks: f64,
    pub rows: Vec<MomentRow>,
}

/// `ks` is the exact supremum over the real line, not only over `grid`.
pub fn empirical_cdf_vs_gaussian(samples: &[f64], grid: &[f64]) -> Result<CdfReport> {
    nonempty(samples)?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let ks = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let phi = normal_cdf(x);
            let below = i as f64 / n;
            let upto = (i + 1) as f64 / n;
            (phi - below).max(upto - phi)
        })
        .fold(0.0, f64::max);
    let rows = grid
        .iter()
        .map(|&s| MomentRow {
            label: s.to_string(),
            empirical: sorted.partition_point(|&x| x <= s) as f64 / n,
            target: normal_cdf(s),
            count: sorted.len(),
        })
        .collect();
    Ok(CdfReport { ks, rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceReport {
    pub beta: f64,
    pub offset: usize,
    pub pairs: usize,
    /// Pearson correlation.
    pub correlation: f64,
    /// `E[f₁ f₂]`.
    pub product_moment: f64,
    /// `(1 − β)₊`.
    pub target: f64,
}

impl CovarianceReport {
    pub fn deviation(&self) -> f64 {
        (self.correlation - self.target).abs()
    }
}

/// Requires at least [`MIN_PAIRS`] pairs with nonzero spread on both sides.
pub fn covariance_report(
    pairs: &[(f64, f64)],
    beta: f64,
    offset: usize,
) -> Result<CovarianceReport> {
    if pairs.len() < MIN_PAIRS {
        return Err(Error::TooFewSamples {
            required: MIN_PAIRS,
            got: pairs.len(),
        });
    }
    let (a, b): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
    let (ma, mb) = (mean(&a)?, mean(&b)?);
    let (va, vb) = (variance(&a)?, variance(&b)?);
    if va == 0.0 || vb == 0.0 {
        return Err(Error::DegenerateVariance("covariance of constant sample"));
    }
    let n = pairs.len() as f64;
    let cov: CompensatedSum<f64> = pairs.iter().map(|&(x, y)| (x - ma) * (y - mb)).collect();
    let prod: CompensatedSum<f64> = pairs.iter().map(|&(x, y)| x * y).collect();
    Ok(CovarianceReport {
        beta,
        offset,
        pairs: pairs.len(),
        correlation: (cov.value() / n / (va * vb).sqrt()).clamp(-1.0, 1.0),
        product_moment: prod.value() / n,
        target: (1.0 - beta).max(0.0),
    })
}

/// `E[f₁^a f₂^b]` against the bivariate Gaussian moment at correlation `rho`.
pub fn joint_moment_report(pairs: &[(f64, f64)], a: u32, b: u32, rho: f64) -> Result<MomentRow> {
    nonempty(pairs)?;
    if a + b > MAX_JOINT_ORDER {
        return Err(Error::SizeGuard(format!(
            "joint order {} exceeds {MAX_JOINT_ORDER}",
            a + b
        )));
    }
    let s: CompensatedSum<f64> = pairs
        .iter()
        .map(|&(x, y)| x.powi(a as i32) * y.powi(b as i32))
        .collect();
    Ok(MomentRow {
        label: format!("{a},{b}"),
        empirical: s.value() / pairs.len() as f64,
        target: gaussian_joint_moment_real(a, b, rho)?,
        count: pairs.len(),
    })
}
