use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Lowest height the Riemann–Siegel machinery accepts.
pub const MIN_HEIGHT: f64 = 10.0;
/// Highest height at which double precision phases still give reliable signs.
pub const MAX_HEIGHT: f64 = 1e8;

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Riemann–Siegel phase `θ(t) = arg Γ(1/4 + it/2) − (t/2) log π`.
///
/// Stirling series through the `t^-5` term; the truncation error is below
/// `3e-11` for every `t ≥ 10`.
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    check_height(t)?;
    Ok(theta_unchecked(t))
}

pub(crate) fn check_height(t: f64) -> Result<()> {
    if !(MIN_HEIGHT..=MAX_HEIGHT).contains(&t) {
        return Err(Error::Domain(format!(
            "height {t} outside [{MIN_HEIGHT}, {MAX_HEIGHT}]"
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn theta_unchecked(t: f64) -> f64 {
    let half = 0.5 * t;
    // (t/2) log(t/2π) − t/2 = (t/2)(log(t/2) − log π − 1)
    let main = half * ((half.ln() - LN_PI) - 1.0);
    let r = 1.0 / t;
    let r2 = r * r;
    main - PI / 8.0 + r * (1.0 / 48.0 + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0)))
}

/// `θ'(t)`, accurate enough to drive Newton on Gram points.
#[inline]
pub(crate) fn theta_prime(t: f64) -> f64 {
    0.5 * ((0.5 * t).ln() - LN_PI) - 1.0 / (48.0 * t * t)
}

/// Gram point `g_n`, the solution of `θ(g_n) = nπ` on `t ≥ 10`.
pub fn gram_point(n: i64) -> Result<f64> {
    if n < 0 {
        return Err(Error::Domain(format!(
            "Gram point g_{n} lies below {MIN_HEIGHT}"
        )));
    }
    Ok(gram_point_from(n, initial_gram_guess(n)))
}

fn initial_gram_guess(n: i64) -> f64 {
    // θ(t) ≈ (t/2) log(t/2πe); a few fixed-point sweeps seed Newton.
    let target = (n as f64 + 0.125) * PI;
    let mut t = 18.0f64.max(2.0 * target / (target.max(2.0).ln()));
    for _ in 0..8 {
        let lt = (t / (2.0 * PI)).ln() - 1.0;
        t = 2.0 * target / lt.max(0.5);
    }
    t.max(MIN_HEIGHT)
}

/// Newton iteration for `θ(t) = nπ` from a nearby starting point.
pub(crate) fn gram_point_from(n: i64, start: f64) -> f64 {
    let target = n as f64 * PI;
    let mut t = start;
    for _ in 0..60 {
        let step = (theta_unchecked(t) - target) / theta_prime(t);
        t -= step;
        if t < MIN_HEIGHT {
            t = MIN_HEIGHT;
        }
        if step.abs() <= 1e-13 * t {
            break;
        }
    }
    t
}

/// Index of the last Gram point not exceeding `t` (`floor(θ(t)/π)`).
pub(crate) fn gram_index_below(t: f64) -> i64 {
    (theta_unchecked(t) / PI).floor() as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_term_dominates_at_one_million() {
        let t = 1e6;
        let lead = 0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0;
        let ratio = riemann_siegel_theta(t).unwrap() / lead;
        assert!((ratio - 1.0).abs() <= 1e-9, "ratio {ratio}");
    }

    #[test]
    fn first_gram_point_between_17_and_18() {
        // Bisection on θ, independent of the Newton path.
        let (mut lo, mut hi) = (17.0, 18.0);
        assert!(theta_unchecked(lo) < 0.0 && theta_unchecked(hi) > 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if theta_unchecked(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let g0 = gram_point(0).unwrap();
        assert!((g0 - lo).abs() < 1e-10);
        // Published value of the first Gram point.
        assert!((g0 - 17.845_599_540_410_3).abs() < 1e-8, "g0 = {g0}");
    }

    #[test]
    fn strictly_increasing_on_grid() {
        let mut prev = theta_unchecked(20.0);
        for i in 1..=1000 {
            let t = 20.0 + i as f64 * (1e6 - 20.0) / 1000.0;
            let cur = theta_unchecked(t);
            assert!(cur > prev);
            assert!(theta_unchecked(t + 1.0) > cur);
            prev = cur;
        }
    }

    #[test]
    fn rejects_low_heights() {
        assert!(matches!(riemann_siegel_theta(9.99), Err(Error::Domain(_))));
        assert!(riemann_siegel_theta(f64::NAN).is_err());
        assert!(gram_point(-1).is_err());
    }

    #[test]
    fn gram_points_solve_phase_equation() {
        for n in [0i64, 1, 10, 1000, 100_000] {
            let g = gram_point(n).unwrap();
            let resid = theta_unchecked(g) - n as f64 * PI;
            assert!(resid.abs() < 1e-8 * (1.0 + n as f64), "n={n} resid={resid}");
            assert_eq!(gram_index_below(g + 1e-6), n);
        }
    }
}
