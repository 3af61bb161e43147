//! Monte-Carlo helpers shared by the integration suites. They re-derive the
//! test-phase dynamics from scratch instead of calling the runners.
#![allow(dead_code)]

use rand::Rng;
use rand_distr::StandardNormal;
use satisficing::rng::Stream;

/// Sum of `n` unit-variance Gaussian rewards with mean `mu`, drawn in one go
/// as N(nμ, n).
pub fn gaussian_sum(rng: &mut Stream, n: u64, mu: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    n as f64 * mu + (n as f64).sqrt() * z
}

pub fn gaussian(rng: &mut Stream, mu: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    mu + z
}

/// Sum of `n` Bernoulli(p) rewards.
pub fn bernoulli_sum(rng: &mut Stream, n: u64, p: f64) -> f64 {
    (0..n).filter(|_| rng.random::<f64>() < p).count() as f64
}

/// Continues a test phase from `n0` prior samples summing to `r0`: keeps
/// pulling while `guard(r_tot, n0, k) >= level`, at most `cap` extra pulls.
/// Returns (k, exited) where `exited` means the guard failed within the cap.
pub fn run_test_phase(
    rng: &mut Stream,
    mu: f64,
    n0: u64,
    r0: f64,
    level: f64,
    cap: u64,
    guard: impl Fn(f64, u64, u64) -> f64,
) -> (u64, bool) {
    let mut r = r0;
    let mut k = 0;
    while guard(r, n0, k) >= level {
        if k == cap {
            return (k, false);
        }
        r += gaussian(rng, mu);
        k += 1;
    }
    (k, true)
}

/// Standard error of a frequency estimate at probability `p` over `n` trials.
pub fn binomial_se(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Smallest n0 such that `radius(n0, k) <= bound` for every k in 0..=cap.
pub fn smallest_base_with_radius(bound: f64, cap: u64, radius: impl Fn(u64, u64) -> f64) -> u64 {
    (1u64..)
        .find(|&n0| (0..=cap).all(|k| radius(n0, k) <= bound))
        .expect("radius shrinks with n0")
}
