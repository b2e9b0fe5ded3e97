//! Zero counting `N(T)`, the fluctuation `S(T)`, the prime Dirichlet
//! polynomial `S_x(t)`, and the von Mangoldt weights `Λ`, `Λ_x`.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::predictor::{main_term, COUNTING_CONSTANT};
use crate::scalar::{CompensatedSum, Real};
use crate::zeros::{ZeroTable, MIN_HEIGHT};

/// Primes up to `limit`, by a segmented odd-only sieve of Eratosthenes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSieve {
    limit: u64,
    primes: Vec<u64>,
}

const SEGMENT: u64 = 1 << 18;

impl PrimeSieve {
    pub fn new(limit: u64) -> Self {
        let mut primes = Vec::new();
        if limit >= 2 {
            primes.push(2);
        }
        if limit < 3 {
            return Self { limit, primes };
        }
        let root = isqrt(limit);
        let base = simple_odd_sieve(root);

        // Segments cover odd numbers in [lo, hi).
        let mut lo = 3u64;
        let mut marks = vec![false; (SEGMENT / 2) as usize];
        while lo <= limit {
            let hi = (lo + SEGMENT).min(limit + 1);
            let len = (hi - lo).div_ceil(2) as usize;
            marks[..len].iter_mut().for_each(|m| *m = false);
            for &p in &base {
                let sq = p * p;
                if sq >= hi {
                    break;
                }
                let mut start = if sq >= lo { sq } else { lo.div_ceil(p) * p };
                if start % 2 == 0 {
                    start += p;
                }
                let mut j = start;
                while j < hi {
                    marks[((j - lo) / 2) as usize] = true;
                    j += 2 * p;
                }
            }
            for (i, &composite) in marks[..len].iter().enumerate() {
                let n = lo + 2 * i as u64;
                if !composite && n < hi {
                    primes.push(n);
                }
            }
            lo = hi + hi.is_multiple_of(2) as u64;
        }
        Self { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }

    /// Primes `p ≤ bound`.
    pub fn up_to(&self, bound: f64) -> &[u64] {
        let n = self.primes.partition_point(|&p| (p as f64) <= bound);
        &self.primes[..n]
    }

    /// Primes `p < bound`.
    pub fn below(&self, bound: f64) -> &[u64] {
        let n = self.primes.partition_point(|&p| (p as f64) < bound);
        &self.primes[..n]
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn simple_odd_sieve(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// `N(T)`: zeros with `0 < γ < T`, an ordinate on `T` counting 1/2.
pub fn count_zeros(table: &ZeroTable, height: f64) -> Result<f64> {
    if height > table.max_height() {
        return Err(Error::HeightExceeded {
            requested: height,
            max_height: table.max_height(),
        });
    }
    Ok(table.count_below(height))
}

/// `S(T) = N(T) − M(T)`, with the `O(1/(1+T))` term of the counting formula
/// absorbed.
pub fn s_of_t(table: &ZeroTable, height: f64) -> Result<f64> {
    if height < MIN_HEIGHT {
        return Err(Error::Domain(format!(
            "S(T) is evaluated for T ≥ {MIN_HEIGHT}, got {height}"
        )));
    }
    Ok(count_zeros(table, height)? - main_term(height, COUNTING_CONSTANT))
}

/// Cutoff of the Dirichlet polynomial; primes run to `x³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirichletParams<T> {
    pub x: T,
}

impl<T: Real> DirichletParams<T> {
    pub fn new(x: T) -> Self {
        Self { x }
    }

    pub fn prime_bound(&self) -> T {
        self.x * self.x * self.x
    }
}

/// `S_x(t) = −(1/π) Σ_{p ≤ x³} sin(t log p) / √p`, with `log p` and
/// `p^{-1/2}` tabulated once.
#[derive(Clone, Debug)]
pub struct DirichletPolynomial<T> {
    params: DirichletParams<T>,
    log_p: Vec<T>,
    weight: Vec<T>,
}

impl<T: Real> DirichletPolynomial<T> {
    pub fn new(params: DirichletParams<T>, sieve: &PrimeSieve) -> Result<Self> {
        let bound = params.prime_bound().as_f64();
        if (sieve.limit() as f64) < bound.floor() {
            return Err(Error::SieveTooSmall {
                limit: sieve.limit(),
                required: bound,
            });
        }
        let primes = sieve.up_to(bound);
        let log_p = primes.iter().map(|&p| T::lit((p as f64).ln())).collect();
        let weight = primes
            .iter()
            .map(|&p| T::lit(1.0 / (p as f64).sqrt()))
            .collect();
        Ok(Self {
            params,
            log_p,
            weight,
        })
    }

    pub fn params(&self) -> DirichletParams<T> {
        self.params
    }

    pub fn prime_count(&self) -> usize {
        self.log_p.len()
    }

    pub fn eval(&self, t: T) -> T {
        let acc: CompensatedSum<T> = self
            .log_p
            .iter()
            .zip(&self.weight)
            .map(|(&lp, &w)| w * (t * lp).sin())
            .collect();
        -acc.value() / T::PI()
    }

    pub fn eval_many(&self, ts: &[T]) -> Vec<T> {
        ts.par_iter().map(|&t| self.eval(t)).collect()
    }
}

/// One-shot `S_x(t)` by direct summation over the sieve.
pub fn s_x<T: Real>(t: T, x: T, sieve: &PrimeSieve) -> Result<T> {
    Ok(DirichletPolynomial::new(DirichletParams::new(x), sieve)?.eval(t))
}

/// `Λ(n)`: `log p` when `n = p^m`, else 0.
pub fn lambda<T: Real>(n: u64) -> T {
    assert!(n >= 1, "Λ is defined on positive integers");
    if n == 1 {
        return T::zero();
    }
    let p = smallest_prime_factor(n);
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    if m == 1 {
        T::lit((p as f64).ln())
    } else {
        T::zero()
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// Smoothed weight `Λ_x(n)`: `Λ(n)` on `[1, x)`, then the two quadratic
/// tapers on `[x, x²)` and `[x², x³]`, and 0 beyond `x³`.
pub fn lambda_x<T: Real>(n: u64, x: T) -> T {
    assert!(x >= T::lit(2.0), "Λ_x needs x ≥ 2");
    let base: T = lambda(n);
    if base == T::zero() {
        return base;
    }
    let nf = T::lit(n as f64);
    let lx = x.ln();
    let ln = nf.ln();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    if ln <= lx {
        base
    } else if ln < two * lx {
        let a = three * lx - ln;
        let b = two * lx - ln;
        base * (a * a - two * b * b) / (two * lx * lx)
    } else if ln <= three * lx {
        let a = three * lx - ln;
        base * a * a / (two * lx * lx)
    } else {
        T::zero()
    }
}

/// `(t, S(t), S_x(t))` rows for plotting.
pub fn write_s_csv<W: Write>(
    mut out: W,
    table: &ZeroTable,
    poly: &DirichletPolynomial<f64>,
    ts: &[f64],
) -> Result<()> {
    let sx = poly.eval_many(ts);
    let io_err = |e: io::Error| Error::io("<csv>", e);
    writeln!(out, "t,S,S_x").map_err(io_err)?;
    for (&t, &v) in ts.iter().zip(&sx) {
        writeln!(out, "{},{},{}", t, s_of_t(table, t)?, v).map_err(io_err)?;
    }
    Ok(())
}
