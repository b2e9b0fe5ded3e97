//! Predicted zero locations from the smooth counting term.
//!
//! `M(t) = (t/2π) log(t/2πe) + c` is increasing for `t > 2π`. With
//! `c = 7/8` the solution of `M(t) = k − 1/2` is the predicted ordinate
//! `t_k`; with `c = 11/8` the solution of `M(t) = x` interpolates the same
//! points and defines `g(x) = t(x) + ξ σ(t(x))`.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Constant of the zero-counting main term.
pub const COUNTING_CONSTANT: f64 = 7.0 / 8.0;
/// Constant used by the interpolating function `g`.
pub const UNBIASED_COUNTING_CONSTANT: f64 = 11.0 / 8.0;

/// `(t/2π) log(t/(2πe)) + c`.
pub fn main_term<T: Real>(t: T, c: T) -> T {
    let u = t / T::TAU();
    u * (u.ln() - T::one()) + c
}

#[inline]
fn main_term_slope<T: Real>(t: T) -> T {
    (t / T::TAU()).ln() / T::TAU()
}

/// Unique `t > 2π` with `main_term(t, c) = target`.
///
/// Newton from `2πx/log(x + 2) + 2πe`, kept inside a bisection bracket, then
/// polished over neighbouring representable values so the residual is as
/// small as the arithmetic allows.
pub fn inverse_main_term<T: Real>(target: T, c: T) -> Result<T> {
    let floor = c - T::one();
    if !(target > floor) || !target.is_finite() {
        return Err(Error::Domain(format!(
            "main term never reaches {target} on t > 2π (infimum {floor})"
        )));
    }
    let two = T::lit(2.0);
    let mut lo = T::TAU();
    let x = target.max(T::zero());
    let mut t = T::TAU() * x / (x + two).ln() + T::TAU() * T::E();
    let mut hi = t.max(T::TAU() * two);
    while main_term(hi, c) < target {
        hi = hi * two;
    }

    for _ in 0..100 {
        let f = main_term(t, c) - target;
        if f > T::zero() {
            hi = hi.min(t);
        } else {
            lo = lo.max(t);
        }
        let mut next = t - f / main_term_slope(t);
        if !(next > lo && next < hi) {
            next = (lo + hi) / two;
        }
        let done = (next - t).abs() <= T::epsilon() * t;
        t = next;
        if done {
            break;
        }
    }
    Ok(polish(t, |s| (main_term(s, c) - target).abs()))
}

fn polish<T: Real>(t: T, residual: impl Fn(T) -> T) -> T {
    let step = t * T::epsilon() / T::lit(2.0);
    let mut best = t;
    let mut best_r = residual(t);
    for j in -12i32..=12 {
        let cand = t + step * T::lit(j as f64);
        let r = residual(cand);
        if r < best_r {
            best = cand;
            best_r = r;
        }
    }
    best
}

/// Predicted ordinate `t_k`: the solution of `M(t) = k − 1/2` with `c = 7/8`.
pub fn solve_t<T: Real>(k: usize) -> T {
    assert!(k >= 1, "zero indices start at 1");
    inverse_main_term(T::from_count(k) - T::lit(0.5), T::lit(COUNTING_CONSTANT))
        .expect("k − 1/2 exceeds the infimum of the main term")
}

/// `σ(t) = √(2 log log t) / log t`, defined for `t > e`.
pub fn sigma<T: Real>(t: T) -> Result<T> {
    if !(t > T::E()) {
        return Err(Error::Domain(format!("σ(t) needs t > e, got {t}")));
    }
    let l = t.ln();
    Ok((T::lit(2.0) * l.ln()).sqrt() / l)
}

/// `g(x) = t(x) + ξ σ(t(x))` where `t(x)` inverts `main_term(·, c)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GFunction<T> {
    pub xi: T,
    pub counting_constant: T,
}

impl<T: Real> GFunction<T> {
    pub fn new(xi: T) -> Self {
        Self::with_counting_constant(xi, T::lit(UNBIASED_COUNTING_CONSTANT))
    }

    pub fn with_counting_constant(xi: T, counting_constant: T) -> Self {
        Self {
            xi,
            counting_constant,
        }
    }

    /// Least integer `x₀` with `t(x₀) > e + 0.01`; `g` is not defined below it.
    pub fn threshold(&self) -> i64 {
        let mut x = (self.counting_constant - T::one())
            .floor()
            .to_i64()
            .unwrap_or(0)
            + 1;
        let bound = T::E() + T::lit(0.01);
        while inverse_main_term(T::lit(x as f64), self.counting_constant)
            .map(|t| !(t > bound))
            .unwrap_or(true)
        {
            x += 1;
        }
        x
    }

    pub fn t_of(&self, x: T) -> Result<T> {
        if x < T::lit(self.threshold() as f64) {
            return Err(Error::Domain(format!(
                "g is only defined for x ≥ {}, got {x}",
                self.threshold()
            )));
        }
        inverse_main_term(x, self.counting_constant)
    }

    pub fn eval(&self, x: T) -> Result<T> {
        let t = self.t_of(x)?;
        Ok(t + self.xi * sigma(t)?)
    }

    /// Closed-form `g''(x)` from implicit differentiation of `t(x)`.
    pub fn second_derivative_exact(&self, x: T) -> Result<T> {
        let t = self.t_of(x)?;
        let tau = T::TAU();
        let big_l = (t / tau).ln();
        let t1 = tau / big_l;
        let t2 = -(tau * tau) / (t * big_l.powi(3));
        let l = t.ln();
        let q = l.ln();
        let sq = q.sqrt();
        let half = T::lit(0.5);
        let a = (half / sq - sq) / (l * l);
        let a_prime = (-T::lit(0.25) / (q * sq) - T::lit(1.5) / sq + T::lit(2.0) * sq) / l.powi(3);
        let root2 = T::SQRT_2();
        let h_t = self.xi * root2 * a / t;
        let h_tt = self.xi * root2 * (a_prime - a) / (t * t);
        Ok(t2 + h_tt * t1 * t1 + h_t * t2)
    }
}

/// `g(x)` for the default constant `11/8`.
pub fn g_eval<T: Real>(x: T, xi: T) -> Result<T> {
    GFunction::new(xi).eval(x)
}

/// Finite-difference `g''` next to the asymptotic form `−2π / (x log² x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondDerivative<T> {
    pub finite_difference: T,
    pub asymptotic: T,
    pub exact: T,
}

impl<T: Real> SecondDerivative<T> {
    /// Finite difference over the asymptotic form.
    pub fn ratio(&self) -> T {
        self.finite_difference / self.asymptotic
    }
}

/// Central second difference of `g` with step `h = x · 1e-5`.
pub fn g_second_derivative<T: Real>(g: &GFunction<T>, x: T) -> Result<SecondDerivative<T>> {
    if x < T::lit(1e3) {
        return Err(Error::Domain(format!(
            "g'' is reported for x ≥ 1000, got {x}"
        )));
    }
    let h = x * T::lit(1e-5);
    let fd = (g.eval(x + h)? - T::lit(2.0) * g.eval(x)? + g.eval(x - h)?) / (h * h);
    let lx = x.ln();
    Ok(SecondDerivative {
        finite_difference: fd,
        asymptotic: -T::TAU() / (x * lx * lx),
        exact: g.second_derivative_exact(x)?,
    })
}

/// Forward third difference `Δ_h³ g(x) / h³`.
pub fn g_third_difference<T: Real>(g: &GFunction<T>, x: T, h: T) -> Result<T> {
    let three = T::lit(3.0);
    let d = g.eval(x + three * h)? - three * g.eval(x + T::lit(2.0) * h)?
        + three * g.eval(x + h)?
        - g.eval(x)?;
    Ok(d / (h * h * h))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictedPoint<T> {
    pub k: usize,
    pub t: T,
    pub sigma: T,
}

/// Predicted ordinates `t_k` and normalisations `σ_k` over a range of `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictedGrid<T> {
    pub entries: Vec<PredictedPoint<T>>,
    pub xi: T,
    pub counting_constant: T,
}

impl<T: Real> PredictedGrid<T> {
    /// Grid for `k ∈ [k_lo, k_hi]`; `k_lo ≥ 1`.
    pub fn build(k_lo: usize, k_hi: usize, xi: T) -> Self {
        assert!(k_lo >= 1 && k_lo <= k_hi);
        let entries = (k_lo..=k_hi)
            .into_par_iter()
            .map(|k| {
                let t = solve_t::<T>(k);
                PredictedPoint {
                    k,
                    t,
                    // t_1 ≈ 17.8 > e, so σ is always defined here.
                    sigma: sigma(t).expect("t_k > e"),
                }
            })
            .collect();
        Self {
            entries,
            xi,
            counting_constant: T::lit(COUNTING_CONSTANT),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<&PredictedPoint<T>> {
        let first = self.entries.first()?.k;
        k.checked_sub(first).and_then(|i| self.entries.get(i))
    }

    /// Evaluation point `g_k = t_k + ξ σ_k`.
    pub fn evaluation_point(&self, k: usize) -> Option<T> {
        self.get(k).map(|p| p.t + self.xi * p.sigma)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,t_k,sigma_k")?;
        for p in &self.entries {
            writeln!(out, "{},{},{}", p.k, p.t, p.sigma)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn main_term_substitutions() {
        assert!((main_term(2.0 * PI, 0.875) + 0.125).abs() < 1e-15);
        assert!((main_term(2.0 * PI * E, 0.875) - 0.875).abs() < 1e-15);
        let v = main_term(2.0 * PI * E * E, 1.375);
        assert!((v - (E * E + 1.375)).abs() < 1e-13);
    }

    #[test]
    fn solve_t_residual() {
        for k in [1usize, 10, 1_000, 1_000_000] {
            let t: f64 = solve_t(k);
            let r = main_term(t, COUNTING_CONSTANT) - (k as f64 - 0.5);
            assert!(r.abs() < 1e-10, "k={k} residual {r}");
            assert!(t > 2.0 * PI);
        }
    }

    #[test]
    fn solve_t_increasing() {
        let mut prev = 0.0f64;
        for k in 1..=10_000 {
            let t: f64 = solve_t(k);
            assert!(t > prev);
            prev = t;
        }
    }

    /// Principal Lambert W by Newton on `w e^w = z`.
    fn lambert_w(z: f64) -> f64 {
        let mut w = z.ln() - z.ln().ln();
        for _ in 0..50 {
            let ew = w.exp();
            w -= (w * ew - z) / (ew * (w + 1.0));
        }
        w
    }

    #[test]
    fn matches_lambert_closed_form() {
        for k in [1_000usize, 100_000, 1_000_000] {
            let t: f64 = solve_t(k);
            let m = k as f64 - 11.0 / 8.0;
            let oracle = 2.0 * PI * m / lambert_w(m / std::f64::consts::E);
            assert!((t - oracle).abs() < 1e-9 * oracle, "k={k} {t} vs {oracle}");
        }
    }

    #[test]
    fn single_precision_grid() {
        let t: f32 = solve_t(1000);
        let t64: f64 = solve_t(1000);
        assert!(((t as f64) - t64).abs() < 1e-3 * t64);
    }

    #[test]
    fn sigma_values() {
        let t = E.powf(E);
        assert!((sigma(t).unwrap() - 2f64.sqrt() / E).abs() < 1e-15);
        assert!(sigma(E).is_err());
        let mut prev = sigma(100.0f64).unwrap();
        for i in 1..1000 {
            let s = sigma(100.0 + 10.0 * i as f64).unwrap();
            assert!(s < prev);
            prev = s;
        }
        let tk: f64 = solve_t(100_000);
        let s = sigma(tk).unwrap();
        let back = s * tk.ln() / (2.0 * tk.ln().ln()).sqrt();
        assert!((back - 1.0).abs() < 1e-15);
    }

    #[test]
    fn g_identities() {
        for x in [10.0f64, 1234.5, 1e5] {
            let t = GFunction::new(0.0).t_of(x).unwrap();
            assert_eq!(g_eval(x, 0.0).unwrap(), t);
            let diff = g_eval(x, 1.0).unwrap() - g_eval(x, -1.0).unwrap();
            assert!((diff - 2.0 * sigma(t).unwrap()).abs() < 1e-12 * t);
        }
        // With 11/8, g(k) reproduces t_k.
        for k in [1usize, 50, 5000] {
            let tk: f64 = solve_t(k);
            assert!((g_eval(k as f64, 0.0).unwrap() - tk).abs() < 1e-9 * tk);
        }
    }

    #[test]
    fn g_threshold() {
        let g = GFunction::new(0.0f64);
        assert_eq!(g.threshold(), 1);
        assert!(g.eval(0.5).is_err());
        assert!(g.eval(1.0).is_ok());
    }

    #[test]
    fn second_derivative_matches_closed_form() {
        for xi in [0.0f64, 1.0, -1.0] {
            let g = GFunction::new(xi);
            for x in [1e3, 1e4, 1e6] {
                let d = g_second_derivative(&g, x).unwrap();
                let rel = (d.finite_difference / d.exact - 1.0).abs();
                assert!(rel < 0.05, "xi={xi} x={x} rel={rel}");
                assert!(d.finite_difference < 0.0);
            }
        }
        // Closed form against a wide-step difference at a large argument.
        let g = GFunction::new(0.5f64);
        let x = 1e6;
        let h = 1e3;
        let fd =
            (g.eval(x + h).unwrap() - 2.0 * g.eval(x).unwrap() + g.eval(x - h).unwrap()) / (h * h);
        assert!((fd / g.second_derivative_exact(x).unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn concave_on_grid() {
        let g = GFunction::new(0.0f64);
        for i in 0..50 {
            let x = 1e3 * 1.2f64.powi(i);
            assert!(g.second_derivative_exact(x).unwrap() < 0.0);
        }
    }

    #[test]
    fn asymptotic_ratio_drifts_toward_one() {
        let g = GFunction::new(0.0f64);
        let ratios: Vec<f64> = [1e6f64, 1e10, 1e14, 1e18]
            .iter()
            .map(|&x| {
                let lx = x.ln();
                g.second_derivative_exact(x).unwrap() / (-2.0 * PI / (x * lx * lx))
            })
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
        assert!(ratios.iter().all(|&r| r > 1.0));
    }

    #[test]
    fn third_difference_positive() {
        let g = GFunction::new(0.0f64);
        let x = 1e6;
        let d3 = g_third_difference(&g, x, x * 1e-2).unwrap();
        assert!(d3 > 0.0);
        let lx = x.ln();
        let asym = 2.0 * PI / (x * x * lx * lx);
        assert!(d3 / asym > 0.5 && d3 / asym < 3.0, "ratio {}", d3 / asym);
    }

    #[test]
    fn grid_csv_shape() {
        let grid = PredictedGrid::<f64>::build(1, 5, 0.0);
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 6);
        assert!(text.starts_with("k,t_k,sigma_k\n1,"));
        assert_eq!(grid.get(3).unwrap().k, 3);
    }
}
