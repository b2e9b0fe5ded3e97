//! Exact Gaussian moment targets.
//!
//! Pairing counts are enumerated exhaustively in integer arithmetic; the
//! correlation is applied last, in whatever scalar the caller picks (an
//! exact rational works as well as `f64`).

use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_GAUSS_ORDER: u32 = 40;
pub const MAX_S_MOMENT_ORDER: u32 = 10;
pub const MAX_COMPLEX_SLOTS: u32 = 16;
pub const MAX_REAL_SLOTS: u32 = 12;

/// `E Y^p` for a standard normal `Y`: `(p − 1)!!` for even `p`, else 0.
pub fn gauss_moment(p: u32) -> Result<u128> {
    if p > MAX_GAUSS_ORDER {
        return Err(Error::SizeGuard(format!(
            "Gaussian moment order {p} exceeds {MAX_GAUSS_ORDER}"
        )));
    }
    if p % 2 == 1 {
        return Ok(0);
    }
    Ok((1..p).step_by(2).map(|k| k as u128).product())
}

/// `(2n)! / ((2π)^{2n} n!) = (2n − 1)!! / (2π²)^n`, the even-moment constant
/// of `S`.
pub fn s_moment_constant<T: Real>(n: u32) -> Result<T> {
    if n == 0 || n > MAX_S_MOMENT_ORDER {
        return Err(Error::SizeGuard(format!(
            "S-moment order {n} outside 1..={MAX_S_MOMENT_ORDER}"
        )));
    }
    let double_factorial = T::from_u128(gauss_moment(2 * n)?).expect("fits");
    let two_pi_sq = T::lit(2.0) * T::PI() * T::PI();
    Ok(double_factorial / two_pi_sq.powi(n as i32))
}

/// Counts `n(k, a₁, a₂, b₁, b₂)` of pairings between `a₁` copies of `η₁`,
/// `b₁` of `η₂` and `a₂` copies of `η̄₁`, `b₂` of `η̄₂` having exactly `k`
/// pairs with differing indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingCount {
    pub a1: u32,
    pub a2: u32,
    pub b1: u32,
    pub b2: u32,
    counts: Vec<u64>,
}

impl PairingCount {
    /// Number of pairings with exactly `k` cross pairs.
    pub fn n(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `Σ_k n_k ρ^k`.
    pub fn evaluate<T: Num + Clone + FromPrimitive>(&self, rho: T) -> T {
        polynomial(&self.counts, rho)
    }
}

fn polynomial<T: Num + Clone + FromPrimitive>(counts: &[u64], x: T) -> T {
    counts.iter().rev().fold(T::zero(), |acc, &c| {
        acc * x.clone() + T::from_u64(c).expect("count representable")
    })
}

/// Enumerates all bijections from unbarred to barred slots.
pub fn pairing_counts(a1: u32, a2: u32, b1: u32, b2: u32) -> Result<PairingCount> {
    let slots = a1 + a2 + b1 + b2;
    if slots > MAX_COMPLEX_SLOTS {
        return Err(Error::SizeGuard(format!(
            "{slots} slots exceed {MAX_COMPLEX_SLOTS}"
        )));
    }
    let n = (a1 + b1) as usize;
    let mut counts = vec![0u64; n + 1];
    if a1 + b1 == a2 + b2 {
        let unbarred: Vec<u8> = std::iter::repeat_n(1, a1 as usize)
            .chain(std::iter::repeat_n(2, b1 as usize))
            .collect();
        let barred: Vec<u8> = std::iter::repeat_n(1, a2 as usize)
            .chain(std::iter::repeat_n(2, b2 as usize))
            .collect();
        enumerate_bijections(&unbarred, &barred, 0, 0, 0, &mut counts);
    } else {
        counts.iter_mut().for_each(|c| *c = 0);
    }
    Ok(PairingCount {
        a1,
        a2,
        b1,
        b2,
        counts,
    })
}

fn enumerate_bijections(
    unbarred: &[u8],
    barred: &[u8],
    i: usize,
    used: u32,
    cross: usize,
    counts: &mut [u64],
) {
    if i == unbarred.len() {
        counts[cross] += 1;
        return;
    }
    for (j, &label) in barred.iter().enumerate() {
        if used & (1 << j) != 0 {
            continue;
        }
        let c = cross + usize::from(label != unbarred[i]);
        enumerate_bijections(unbarred, barred, i + 1, used | (1 << j), c, counts);
    }
}

/// `E η₁^{a₁} η̄₁^{a₂} η₂^{b₁} η̄₂^{b₂}` for the complex Gaussian pair with
/// `E η_i η̄_i = 1`, `E η₁ η̄₂ = E η̄₁ η₂ = ρ`, all other covariances 0.
pub fn wick_bivariate<T: Num + Clone + FromPrimitive>(
    a1: u32,
    a2: u32,
    b1: u32,
    b2: u32,
    rho: T,
) -> Result<T> {
    Ok(pairing_counts(a1, a2, b1, b2)?.evaluate(rho))
}

/// Perfect matchings of `a` slots labelled 1 and `b` labelled 2, counted by
/// the number of pairs joining different labels.
pub fn real_pairing_counts(a: u32, b: u32) -> Result<Vec<u64>> {
    if a + b > MAX_REAL_SLOTS {
        return Err(Error::SizeGuard(format!(
            "{} slots exceed {MAX_REAL_SLOTS}",
            a + b
        )));
    }
    let labels: Vec<u8> = std::iter::repeat_n(1, a as usize)
        .chain(std::iter::repeat_n(2, b as usize))
        .collect();
    let mut counts = vec![0u64; (a + b) as usize / 2 + 1];
    if labels.len().is_multiple_of(2) {
        enumerate_matchings(&labels, 0, 0, &mut counts);
    }
    Ok(counts)
}

fn enumerate_matchings(labels: &[u8], used: u32, cross: usize, counts: &mut [u64]) {
    let n = labels.len();
    let Some(first) = (0..n).find(|&i| used & (1 << i) == 0) else {
        counts[cross] += 1;
        return;
    };
    for j in first + 1..n {
        if used & (1 << j) != 0 {
            continue;
        }
        let c = cross + usize::from(labels[first] != labels[j]);
        enumerate_matchings(labels, used | (1 << first) | (1 << j), c, counts);
    }
}

/// `E Y₁^a Y₂^b` for standard normals with correlation `ρ`.
pub fn gaussian_joint_moment_real<T: Num + Clone + FromPrimitive>(
    a: u32,
    b: u32,
    rho: T,
) -> Result<T> {
    Ok(polynomial(&real_pairing_counts(a, b)?, rho))
}

/// `(1 − β)₊`.
pub fn covariance_target<T: Real>(beta: T) -> T {
    (T::one() - beta).max(T::zero())
}
