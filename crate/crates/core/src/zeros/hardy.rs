//! Hardy's function `Z(t) = e^{iθ(t)} ζ(1/2 + it)`.
//!
//! Above [`EULER_MACLAURIN_CUTOFF`] the Riemann–Siegel main sum is used with
//! the correction terms `C_0 … C_4`. Below it the asymptotic remainder is too
//! coarse for 1e-9 zero refinement, so ζ is summed directly by
//! Euler–Maclaurin, which costs only a few hundred terms at those heights.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::rs_coeffs;
use super::theta::{check_height, theta_unchecked, MAX_HEIGHT};
use crate::error::Result;

/// Heights below this use Euler–Maclaurin summation of ζ.
pub const EULER_MACLAURIN_CUTOFF: f64 = 1000.0;

const EM_CORRECTION_TERMS: usize = 15;

struct DirichletTables {
    ln_n: Vec<f64>,
    inv_sqrt_n: Vec<f64>,
}

fn tables() -> &'static DirichletTables {
    static TABLES: OnceLock<DirichletTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let n_max = (MAX_HEIGHT / (2.0 * PI)).sqrt() as usize + 2;
        let ln_n = (0..=n_max).map(|n| (n.max(1) as f64).ln()).collect();
        let inv_sqrt_n = (0..=n_max)
            .map(|n| 1.0 / (n.max(1) as f64).sqrt())
            .collect();
        DirichletTables { ln_n, inv_sqrt_n }
    })
}

/// `Z(t)` for `10 ≤ t ≤ 10^8`.
pub fn hardy_z(t: f64) -> Result<f64> {
    check_height(t)?;
    Ok(hardy_z_unchecked(t))
}

#[inline]
pub(crate) fn hardy_z_unchecked(t: f64) -> f64 {
    if t < EULER_MACLAURIN_CUTOFF {
        hardy_z_euler_maclaurin(t)
    } else {
        riemann_siegel(t)
    }
}

/// `Z(t)` from the Riemann–Siegel formula alone, at every height.
pub fn hardy_z_riemann_siegel(t: f64) -> Result<f64> {
    check_height(t)?;
    Ok(riemann_siegel(t))
}

fn riemann_siegel(t: f64) -> f64 {
    let tab = tables();
    let a = (t / (2.0 * PI)).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let theta = theta_unchecked(t);

    let mut main = 0.0;
    for k in 1..=n {
        main += tab.inv_sqrt_n[k] * (theta - t * tab.ln_n[k]).cos();
    }
    main *= 2.0;

    let z = 2.0 * p - 1.0;
    let w = 1.0 / a;
    let corr = chebyshev(&rs_coeffs::C0, z)
        + w * (chebyshev(&rs_coeffs::C1, z)
            + w * (chebyshev(&rs_coeffs::C2, z)
                + w * (chebyshev(&rs_coeffs::C3, z) + w * chebyshev(&rs_coeffs::C4, z))));
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    main + sign * w.sqrt() * corr
}

#[inline]
fn chebyshev(coeffs: &[f64], z: f64) -> f64 {
    let two_z = 2.0 * z;
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs[1..].iter().rev() {
        let b0 = two_z * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    z * b1 - b2 + coeffs[0]
}

/// `B_{2k} / (2k)!` for `k = 1..=EM_CORRECTION_TERMS`, via
/// `B_{2k}/(2k)! = (−1)^{k+1} 2 ζ(2k) / (2π)^{2k}`.
fn bernoulli_over_factorial() -> &'static [f64; EM_CORRECTION_TERMS] {
    static COEFFS: OnceLock<[f64; EM_CORRECTION_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = [0.0; EM_CORRECTION_TERMS];
        for (i, slot) in out.iter_mut().enumerate() {
            let k = i + 1;
            let s = 2 * k as i32;
            let zeta = match k {
                1 => PI * PI / 6.0,
                2 => PI.powi(4) / 90.0,
                _ => {
                    let cut = 200u32;
                    let head: f64 = (1..cut).rev().map(|n| (n as f64).powi(-s)).sum();
                    let c = cut as f64;
                    // Euler–Maclaurin tail of Σ_{n ≥ cut} n^{-s}
                    head + c.powi(1 - s) / (s as f64 - 1.0) + 0.5 * c.powi(-s)
                }
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * zeta / (2.0 * PI).powi(s);
        }
        out
    })
}

/// ζ(1/2 + it) by Euler–Maclaurin summation.
pub fn zeta_critical_line(t: f64) -> Complex64 {
    let s = Complex64::new(0.5, t);
    let cut = (t / PI).ceil().max(20.0) as usize + 10;

    let mut head = Complex64::new(0.0, 0.0);
    for n in 1..cut {
        let ln = (n as f64).ln();
        head += Complex64::from_polar(1.0 / (n as f64).sqrt(), -t * ln);
    }
    let nf = cut as f64;
    let ln_cut = nf.ln();
    let n_pow_s = Complex64::from_polar(1.0 / nf.sqrt(), -t * ln_cut); // N^{-s}
    let mut total = head + n_pow_s * nf / (s - 1.0) + 0.5 * n_pow_s;

    // Σ_k B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{-s-2k+1}
    let bern = bernoulli_over_factorial();
    let mut rising = s; // s(s+1)…(s+2k−2)
    let mut power = n_pow_s / nf; // N^{-s-2k+1}
    for (i, &b) in bern.iter().enumerate() {
        total += rising * power * b;
        let k = (i + 1) as f64;
        rising = rising * (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
        power /= nf * nf;
    }
    total
}

fn hardy_z_euler_maclaurin(t: f64) -> f64 {
    let rot = Complex64::from_polar(1.0, theta_unchecked(t));
    (rot * zeta_critical_line(t)).re
}
