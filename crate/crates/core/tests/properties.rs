use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use zeta_fluct::expsum::{
    direct_exp_sum, is_prime, mertens_sums, tuple_theta, Battery, BatterySpec,
};
use zeta_fluct::gaussian::{gaussian_joint_moment_real, pairing_counts, wick_bivariate};
use zeta_fluct::predictor::{
    main_term, solve_t, GFunction, COUNTING_CONSTANT, UNBIASED_COUNTING_CONSTANT,
};
use zeta_fluct::s_functions::{lambda, lambda_x, PrimeSieve};
use zeta_fluct::stats::{empirical_cdf_vs_gaussian, mean, variance, S_GRID};

type Q = Ratio<i64>;

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn fact(n: u64) -> u64 {
    (1..=n).product()
}

/// Bijections from `{Z₁^a1, Z₂^b1}` onto `{Z̄₁^a2, Z̄₂^b2}` with `m` cross pairs.
fn closed_form_counts(a1: u64, a2: u64, b1: u64, b2: u64) -> Vec<u64> {
    let mut counts = vec![0; (a1 + b1 + 1) as usize];
    if a1 + b1 != a2 + b2 {
        return counts;
    }
    for j in 0..=a1.min(b2) {
        let Some(k) = (a2 + j).checked_sub(a1) else {
            continue;
        };
        if k > b1 || k > a2 {
            continue;
        }
        counts[(j + k) as usize] += binom(a1, j)
            * binom(b2, j)
            * fact(j)
            * binom(b1, k)
            * binom(a2, k)
            * fact(k)
            * fact(a1 - j)
            * fact(b1 - k);
    }
    counts
}

/// `E[XᵃYᵇ]` by Stein's identity `E[X f] = E[f_X] + ρ E[f_Y]`.
fn stein(a: u32, b: u32, rho: Q) -> Q {
    match (a, b) {
        (0, 0) => Q::from_integer(1),
        (0, _) => stein(b, 0, rho),
        _ => {
            let mut v = Q::from_integer(0);
            if a >= 2 {
                v += Q::from_integer(i64::from(a - 1)) * stein(a - 2, b, rho);
            }
            if b >= 1 {
                v += rho * Q::from_integer(i64::from(b)) * stein(a - 1, b - 1, rho);
            }
            v
        }
    }
}

proptest! {
    #[test]
    fn count_is_monotone_and_reconstructs(t1 in 10.0f64..1e4, dt in 0.0f64..500.0) {
        let table = reference_table();
        let t2 = (t1 + dt).min(table.max_height());
        let t1 = t1.min(t2);
        let n1 = zeta_fluct::s_functions::count_zeros(table, t1).unwrap();
        let n2 = zeta_fluct::s_functions::count_zeros(table, t2).unwrap();
        prop_assert!(n1 <= n2);
        let s = zeta_fluct::s_functions::s_of_t(table, t1).unwrap();
        prop_assert_eq!(main_term(t1, COUNTING_CONSTANT) + s, n1);
    }

    #[test]
    fn predicted_ordinates_invert_the_main_term(k in 1usize..2_000_000) {
        let t: f64 = solve_t(k);
        let kf = k as f64;
        prop_assert!((main_term(t, COUNTING_CONSTANT) - (kf - 0.5)).abs() < 1e-9 * kf.max(1.0));
        prop_assert!((main_term(t, UNBIASED_COUNTING_CONSTANT) - kf).abs() < 1e-9 * kf.max(1.0));
        prop_assert!(solve_t::<f64>(k + 1) > t);
    }

    #[test]
    fn wick_counts_match_closed_form(a1 in 0u32..5, a2 in 0u32..5, b1 in 0u32..5, b2 in 0u32..5) {
        let counts = pairing_counts(a1, a2, b1, b2).unwrap();
        let expected = closed_form_counts(a1.into(), a2.into(), b1.into(), b2.into());
        let total: u64 = expected.iter().sum();
        prop_assert_eq!(counts.total(), total);
        for (m, &c) in expected.iter().enumerate() {
            prop_assert_eq!(counts.n(m), c, "m = {}", m);
        }
        let rho = Q::new(2, 7);
        let direct: Q = expected
            .iter()
            .enumerate()
            .map(|(m, &c)| Q::from_integer(c as i64) * rho.pow(m as i32))
            .sum();
        prop_assert_eq!(wick_bivariate(a1, a2, b1, b2, rho).unwrap(), direct);
    }

    #[test]
    fn real_moments_follow_stein_recursion(a in 0u32..7, b in 0u32..7, num in -10i64..=10) {
        let rho = Q::new(num, 10);
        prop_assert_eq!(gaussian_joint_moment_real(a, b, rho).unwrap(), stein(a, b, rho));
    }

    #[test]
    fn sieve_agrees_with_trial_division(limit in 2u64..5000) {
        let sieve = PrimeSieve::new(limit);
        let expected: Vec<u64> = (2..=limit).filter(|&n| is_prime(n)).collect();
        prop_assert_eq!(sieve.primes(), &expected[..]);
    }

    #[test]
    fn smoothed_weights_are_dominated(n in 1u64..20_000, x in 2.0f64..40.0) {
        let (w, full) = (lambda_x(n, x), lambda::<f64>(n));
        prop_assert!(w >= 0.0 && w <= full + 1e-15);
        if (n as f64) > x * x * x {
            prop_assert_eq!(w, 0.0);
        }
    }

    #[test]
    fn exp_sums_are_bounded_and_conjugate(theta in -3.0f64..3.0, k in 100usize..5000, h in 1usize..300) {
        let g = GFunction::new(0.0);
        let s = direct_exp_sum(theta, k, h, &g).unwrap();
        let c = direct_exp_sum(-theta, k, h, &g).unwrap();
        prop_assert!(s.norm() <= h as f64 + 1e-9);
        prop_assert!((s.conj() - c).norm() < 1e-9 * h as f64);
    }

    #[test]
    fn unique_factorization_for_random_tuples(seed in any::<u64>()) {
        let primes: Vec<u64> = (2..100).filter(|&p| is_prime(p)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rand::Rng::random_range(&mut rng, 1..=2usize);
        let tuple: Vec<u64> = (0..2 * n)
            .map(|_| primes[rand::Rng::random_range(&mut rng, 0..primes.len())])
            .collect();
        let split = rand::Rng::random_range(&mut rng, 1..=2 * n);
        if let Ok(theta) = tuple_theta(&tuple, split) {
            prop_assert!(theta.abs() >= 100f64.powi(n as i32).recip());
        }
    }
}

fn reference_table() -> &'static zeta_fluct::ZeroTable {
    use std::sync::OnceLock;
    static TABLE: OnceLock<zeta_fluct::ZeroTable> = OnceLock::new();
    TABLE.get_or_init(|| zeta_fluct::zeros::compute_table(10_600.0).unwrap().0)
}

#[test]
fn unique_factorization_exhaustive_small_primes() {
    let primes: Vec<u64> = (2..30).filter(|&p| is_prime(p)).collect();
    let mut checked = 0;
    for n in 1..=2usize {
        let bound = 30f64.powi(n as i32).recip();
        let mut idx = vec![0usize; 2 * n];
        loop {
            let tuple: Vec<u64> = idx.iter().map(|&i| primes[i]).collect();
            for split in 1..=2 * n {
                if let Ok(theta) = tuple_theta(&tuple, split) {
                    assert!(theta.abs() >= bound, "{tuple:?} split {split}: {theta}");
                    checked += 1;
                }
            }
            let Some(pos) = idx.iter().rposition(|&i| i + 1 < primes.len()) else {
                break;
            };
            idx[pos] += 1;
            idx[pos + 1..].iter_mut().for_each(|i| *i = 0);
        }
    }
    assert!(checked > 30_000);
}

#[test]
fn equal_multisets_and_bad_tuples_are_rejected() {
    assert!(tuple_theta(&[3, 5, 5, 3], 2).is_err());
    assert!(tuple_theta(&[2, 3, 5], 1).is_err());
    assert!(tuple_theta(&[4, 6], 1).is_err());
    assert!(tuple_theta(&[2, 3], 0).is_err());
    assert!((tuple_theta(&[2, 3], 1).unwrap() - 1.5f64.ln()).abs() < 1e-15);
}

#[test]
fn battery_is_reproducible() {
    let spec = BatterySpec {
        per_height: 5,
        ..BatterySpec::default()
    };
    let a = Battery::generate(&spec).unwrap();
    let b = Battery::generate(&spec).unwrap();
    assert_eq!(a.experiments, b.experiments);
    assert_eq!(a.experiments.len(), 15);
    assert!(a.factorization_inequality_holds());
}

#[test]
fn ks_of_normal_draws_is_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let xs: Vec<f64> = (0..100_000)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let report = empirical_cdf_vs_gaussian(&xs, &S_GRID).unwrap();
    assert!(report.ks < 0.01, "KS = {}", report.ks);
}

#[test]
fn mertens_sums_track_their_asymptotics() {
    let sieve = PrimeSieve::new(1_000_000);
    for y in [1e3, 1e4, 1e5, 1e6] {
        let (log_sum, recip_sum) = mertens_sums(y, &sieve).unwrap();
        let meissel_mertens = 0.261_497_212_847_642_8;
        assert!(
            (recip_sum - y.ln().ln() - meissel_mertens).abs() < 0.01,
            "y = {y}"
        );
        let r = log_sum - y.ln();
        assert!(r < 0.0 && r > -2.0, "y = {y}: {r}");
    }
}

#[test]
fn generic_code_runs_in_single_precision() {
    let t32 = solve_t::<f32>(1000);
    let t64 = solve_t::<f64>(1000);
    assert!((f64::from(t32) - t64).abs() / t64 < 1e-5);
    let xs: Vec<f32> = (0..1000).map(|i| (i as f32 * 0.37).sin()).collect();
    let m = mean(&xs).unwrap();
    assert!(m.abs() < 0.01);
    assert!((variance(&xs).unwrap() - 0.5).abs() < 0.02);
}

#[test]
fn wick_runs_over_rationals_and_floats() {
    let exact = wick_bivariate(2, 2, 1, 1, Q::new(1, 2)).unwrap();
    let float = wick_bivariate(2, 2, 1, 1, 0.5f64).unwrap();
    assert!((float - *exact.numer() as f64 / *exact.denom() as f64).abs() < 1e-12);
}
