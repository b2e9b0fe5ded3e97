//! Window sampling of normalized zero fluctuations.
//!
//! The uniform index `k(N, ω)` is enumerated exactly: every atom of the
//! window contributes one sample, so probabilities are counting ratios.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::predictor::PredictedGrid;
use crate::s_functions::{count_zeros, s_of_t};
use crate::zeros::ZeroTable;

/// Index window `I_N = [N, N + H − 1]` with `H = ⌊N^θ⌋`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowSpec {
    n: usize,
    theta: f64,
}

impl WindowSpec {
    /// Requires `N ≥ 1` and `½ < θ ≤ 1`.
    pub fn new(n: usize, theta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("window base N must be ≥ 1".into()));
        }
        if !(theta > 0.5 && theta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "theta = {theta} outside (1/2, 1]"
            )));
        }
        Ok(Self { n, theta })
    }

    pub fn base(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn size(&self) -> usize {
        ((self.n as f64).powf(self.theta).floor() as usize).max(1)
    }

    /// Last index `N + H − 1`.
    pub fn last(&self) -> usize {
        self.n + self.size() - 1
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.n..=self.last()
    }
}

/// All of `I_N`; the window must lie within the first `table_len` indices.
pub fn sample_indices(w: &WindowSpec, table_len: usize) -> Result<Vec<usize>> {
    if w.last() > table_len {
        return Err(Error::IndexOutOfRange {
            index: w.last(),
            len: table_len,
        });
    }
    Ok(w.indices().collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluctuationSample {
    pub k: usize,
    pub gamma: f64,
    pub t: f64,
    pub sigma: f64,
    /// `(γ_k − t_k)/σ_k`.
    pub f: f64,
    pub x: Option<f64>,
}

fn grid_point(grid: &PredictedGrid<f64>, k: usize) -> Result<(f64, f64)> {
    grid.get(k)
        .map(|p| (p.t, p.sigma))
        .ok_or(Error::IndexOutOfRange {
            index: k,
            len: grid.entries.last().map_or(0, |p| p.k),
        })
}

/// `f_k` for every `k ∈ I_N`.
pub fn fluctuations(
    table: &ZeroTable,
    grid: &PredictedGrid<f64>,
    w: &WindowSpec,
) -> Result<Vec<FluctuationSample>> {
    let ks = sample_indices(w, table.len())?;
    ks.into_par_iter()
        .map(|k| {
            let gamma = table.gamma(k)?;
            let (t, sigma) = grid_point(grid, k)?;
            Ok(FluctuationSample {
                k,
                gamma,
                t,
                sigma,
                f: (gamma - t) / sigma,
                x: None,
            })
        })
        .collect()
}

/// `X_k = √2 π S(g_k) / √(log log t_k)` with `g_k = t_k + ξσ_k`, ξ taken
/// from the grid.
pub fn x_samples(table: &ZeroTable, grid: &PredictedGrid<f64>, w: &WindowSpec) -> Result<Vec<f64>> {
    let ks = sample_indices(w, table.len())?;
    ks.into_par_iter()
        .map(|k| x_value(table, grid, k))
        .collect()
}

fn x_value(table: &ZeroTable, grid: &PredictedGrid<f64>, k: usize) -> Result<f64> {
    let (t, sigma) = grid_point(grid, k)?;
    let s = s_of_t(table, t + grid.xi * sigma)?;
    Ok(std::f64::consts::SQRT_2 * std::f64::consts::PI * s / t.ln().ln().sqrt())
}

/// [`fluctuations`] with `x` filled from [`x_samples`].
pub fn fluctuations_with_x(
    table: &ZeroTable,
    grid: &PredictedGrid<f64>,
    w: &WindowSpec,
) -> Result<Vec<FluctuationSample>> {
    let mut samples = fluctuations(table, grid, w)?;
    let xs = x_samples(table, grid, w)?;
    for (s, x) in samples.iter_mut().zip(xs) {
        s.x = Some(x);
    }
    Ok(samples)
}

/// Both sides of `#{γ_k > g_k} = #{N(g_k) ≤ k − ½}` over `I_N`.
pub fn reduction_counts(
    table: &ZeroTable,
    grid: &PredictedGrid<f64>,
    w: &WindowSpec,
) -> Result<(usize, usize)> {
    let ks = sample_indices(w, table.len())?;
    let pairs: Vec<(bool, bool)> = ks
        .into_par_iter()
        .map(|k| {
            let (t, sigma) = grid_point(grid, k)?;
            let g = t + grid.xi * sigma;
            let above = table.gamma(k)? > g;
            let short = count_zeros(table, g)? <= k as f64 - 0.5;
            Ok((above, short))
        })
        .collect::<Result<_>>()?;
    Ok((
        pairs.iter().filter(|p| p.0).count(),
        pairs.iter().filter(|p| p.1).count(),
    ))
}

/// Index offset `⌊(log N)^β⌋` between the paired zeros.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OffsetSpec {
    beta: f64,
}

impl OffsetSpec {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta = {beta} must be > 0"
            )));
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn offset(&self, n: usize) -> usize {
        (n as f64).ln().powf(self.beta).floor() as usize
    }
}

/// `(f_{k₁}, f_{k₂})` for `k₁ ∈ I_N`, `k₂ = k₁ + ⌊(log N)^β⌋`. With `θ = 1`
/// the window is `[N, 2N − 1]`; smaller `θ` is an experimental knob.
pub fn two_point_samples(
    table: &ZeroTable,
    grid: &PredictedGrid<f64>,
    w: &WindowSpec,
    beta: &OffsetSpec,
) -> Result<Vec<(f64, f64)>> {
    let offset = pair_offset(table, w, beta)?;
    let f = |k: usize| -> Result<f64> {
        let (t, sigma) = grid_point(grid, k)?;
        Ok((table.gamma(k)? - t) / sigma)
    };
    w.indices()
        .into_par_iter()
        .map(|k| Ok((f(k)?, f(k + offset)?)))
        .collect()
}

/// `(X_{k₁}, X_{k₂})` on the same index pairs as [`two_point_samples`].
pub fn two_point_x_samples(
    table: &ZeroTable,
    grid: &PredictedGrid<f64>,
    w: &WindowSpec,
    beta: &OffsetSpec,
) -> Result<Vec<(f64, f64)>> {
    let offset = pair_offset(table, w, beta)?;
    w.indices()
        .into_par_iter()
        .map(|k| Ok((x_value(table, grid, k)?, x_value(table, grid, k + offset)?)))
        .collect()
}

fn pair_offset(table: &ZeroTable, w: &WindowSpec, beta: &OffsetSpec) -> Result<usize> {
    let offset = beta.offset(w.base());
    let top = w.last() + offset;
    if top > table.len() {
        return Err(Error::IndexOutOfRange {
            index: top,
            len: table.len(),
        });
    }
    Ok(offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::ZeroSource;

    fn synthetic(len: usize, shift: f64) -> (ZeroTable, PredictedGrid<f64>) {
        let grid = PredictedGrid::build(1, len + 200, 0.0);
        let zeros: Vec<f64> = (1..=len).map(|k| grid.get(k).unwrap().t + shift).collect();
        let top = *zeros.last().unwrap() + 1.0;
        (
            ZeroTable::new(zeros, ZeroSource::Ingested, top).unwrap(),
            grid,
        )
    }

    #[test]
    fn window_sizes() {
        assert_eq!(WindowSpec::new(100, 1.0).unwrap().size(), 100);
        assert_eq!(WindowSpec::new(100, 0.6).unwrap().size(), 15);
        assert!(WindowSpec::new(100, 0.5).is_err());
        assert!(WindowSpec::new(100, 1.01).is_err());
        let ks = sample_indices(&WindowSpec::new(100, 1.0).unwrap(), 500).unwrap();
        assert_eq!(ks, (100..=199).collect::<Vec<_>>());
        assert!(sample_indices(&WindowSpec::new(100, 1.0).unwrap(), 150).is_err());
    }

    #[test]
    fn zero_numerator_gives_zero_fluctuation() {
        let (table, grid) = synthetic(300, 0.0);
        let w = WindowSpec::new(100, 1.0).unwrap();
        let s = fluctuations(&table, &grid, &w).unwrap();
        assert_eq!(s.len(), 100);
        assert!(s.iter().all(|x| x.f == 0.0));
    }

    #[test]
    fn offsets() {
        assert_eq!(OffsetSpec::new(1.0).unwrap().offset(100_000), 11);
        assert_eq!(OffsetSpec::new(2.0).unwrap().offset(100_000), 132);
        assert_eq!(OffsetSpec::new(1e-9).unwrap().offset(100_000), 1);
        assert!(OffsetSpec::new(0.0).is_err());
    }

    #[test]
    fn adjacent_pairs() {
        let (table, grid) = synthetic(400, 0.01);
        let w = WindowSpec::new(100, 1.0).unwrap();
        let adjacent = OffsetSpec::new(1e-9).unwrap();
        let pairs = two_point_samples(&table, &grid, &w, &adjacent).unwrap();
        let single = fluctuations(&table, &grid, &WindowSpec::new(100, 1.0).unwrap()).unwrap();
        assert_eq!(pairs.len(), 100);
        for w in single.windows(2).zip(&pairs) {
            assert_eq!(w.0[0].f, w.1 .0);
            assert_eq!(w.0[1].f, w.1 .1);
        }
        let w = WindowSpec::new(300, 1.0).unwrap();
        assert!(two_point_samples(&table, &grid, &w, &adjacent).is_err());
        let narrow = WindowSpec::new(100, 0.6).unwrap();
        assert_eq!(
            two_point_samples(&table, &grid, &narrow, &adjacent)
                .unwrap()
                .len(),
            15
        );
    }

    #[test]
    fn reduction_identity_on_shifted_table() {
        for shift in [-0.05, 0.05] {
            let (table, grid) = synthetic(400, shift);
            let (a, b) =
                reduction_counts(&table, &grid, &WindowSpec::new(100, 1.0).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn x_needs_coverage() {
        let (table, _) = synthetic(200, 0.0);
        let grid = PredictedGrid::build(1, 400, 1.0e3);
        assert!(x_samples(&table, &grid, &WindowSpec::new(100, 1.0).unwrap()).is_err());
    }
}
