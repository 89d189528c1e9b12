//! Monte Carlo check of an approximately union-closed family.
//!
//! `F₁` is the slice of `s`-subsets of `[n]` with `s = ⌈ψ_k·n + n^{2/3}⌉`, and
//! `F₂` the sets of size at least `t = ⌈(1 − ψ_k)·n⌉`. The union of `k`
//! independent uniform members of `F₁` lands in `F₂` with high probability,
//! while `|F₁|` dwarfs `|F₂|`.
//!
//! Reproducibility: trial `i` draws from Xoshiro256++ seeded through
//! `seed_from_u64(splitmix64(seed ^ splitmix64(i)))`, where `splitmix64(x)` is
//! the first output of SplitMix64 started at state `x`. A random `s`-subset is
//! the first `s` entries of a partial Fisher–Yates shuffle of `1..=n`, with
//! each swap index drawn by Lemire's multiply-and-reject method.

use num_bigint::BigUint;
use num_integer::binomial;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::psi_k;
use crate::entropy::log2_big;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxUcReport {
    pub n: usize,
    pub k_draws: usize,
    pub trials: usize,
    pub seed: u64,
    pub psi_k: f64,
    /// Size of every member of `F₁`.
    pub slice_size: usize,
    /// Minimum size of a member of `F₂`.
    pub threshold: usize,
    pub successes: usize,
    pub p_hat: f64,
    pub mean_union_size: f64,
    /// `log2 |F₁| − log2 |F₂|`, from exact binomial sums.
    pub log_gap: f64,
}

pub(crate) fn thresholds(n: usize, k_draws: usize) -> Result<(usize, usize)> {
    let k = u32::try_from(k_draws).map_err(|_| Error::domain("k_draws is too large"))?;
    let psi = psi_k(k, 1e-15)?;
    let nf = n as f64;
    let slice = (psi * nf + nf.cbrt().powi(2)).ceil();
    let threshold = ((1.0 - psi) * nf).ceil();
    if slice > nf || threshold > nf {
        return Err(Error::domain(format!(
            "thresholds {slice} and {threshold} must not exceed n = {n}"
        )));
    }
    Ok((slice as usize, threshold as usize))
}

fn splitmix64(x: u64) -> u64 {
    SplitMix64::seed_from_u64(x).next_u64()
}

fn trial_rng(seed: u64, trial: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(splitmix64(seed ^ splitmix64(trial)))
}

/// Uniform integer in `0..bound` (Lemire 2019).
fn bounded(rng: &mut impl RngCore, bound: u64) -> u64 {
    let mut m = u128::from(rng.next_u64()) * u128::from(bound);
    if (m as u64) < bound {
        let floor = bound.wrapping_neg() % bound;
        while (m as u64) < floor {
            m = u128::from(rng.next_u64()) * u128::from(bound);
        }
    }
    (m >> 64) as u64
}

/// Size of the union of `k_draws` uniform `s`-subsets of `[n]`.
fn union_size(rng: &mut impl RngCore, n: usize, s: usize, k_draws: usize, perm: &mut [u32], hit: &mut [bool]) -> usize {
    hit.iter_mut().for_each(|h| *h = false);
    let mut size = 0;
    for _ in 0..k_draws {
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i as u32;
        }
        for i in 0..s {
            let j = i + bounded(rng, (n - i) as u64) as usize;
            perm.swap(i, j);
            let e = perm[i] as usize;
            if !hit[e] {
                hit[e] = true;
                size += 1;
            }
        }
    }
    size
}

pub fn approx_uc_experiment(n: usize, k_draws: usize, trials: usize, seed: u64) -> Result<ApproxUcReport> {
    if n < 100 || k_draws < 2 || trials < 100 {
        return Err(Error::domain(format!(
            "need n ≥ 100, k_draws ≥ 2 and trials ≥ 100, got {n}, {k_draws}, {trials}"
        )));
    }
    let (s, t) = thresholds(n, k_draws)?;
    let sizes: Vec<usize> = (0..trials as u64)
        .into_par_iter()
        .map_init(
            || (vec![0u32; n], vec![false; n]),
            |(perm, hit), trial| union_size(&mut trial_rng(seed, trial), n, s, k_draws, perm, hit),
        )
        .collect();
    let successes = sizes.iter().filter(|&&u| u >= t).count();
    let nb = BigUint::from(n);
    let f1 = binomial(nb.clone(), BigUint::from(s));
    let f2: BigUint = (t..=n).map(|j| binomial(nb.clone(), BigUint::from(j))).sum();
    Ok(ApproxUcReport {
        n,
        k_draws,
        trials,
        seed,
        psi_k: psi_k(k_draws as u32, 1e-15)?,
        slice_size: s,
        threshold: t,
        successes,
        p_hat: successes as f64 / trials as f64,
        mean_union_size: sizes.iter().sum::<usize>() as f64 / trials as f64,
        log_gap: log2_big(&f1) - log2_big(&f2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_for_n_1000() {
        assert_eq!(thresholds(1000, 2).unwrap(), (482, 619));
        let (s3, t3) = thresholds(1000, 3).unwrap();
        assert_eq!((s3, t3), (418, 683));
    }

    #[test]
    fn experiment_is_reproducible_and_succeeds() {
        let a = approx_uc_experiment(1000, 2, 200, 7).unwrap();
        let b = approx_uc_experiment(1000, 2, 200, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.p_hat >= 0.99);
        // expected union size n(1 − (1 − s/n)²) ≈ 732
        assert!((a.mean_union_size - 731.7).abs() < 3.0, "{}", a.mean_union_size);
        assert!(a.log_gap > 0.0);
        let c = approx_uc_experiment(1000, 2, 200, 8).unwrap();
        assert_ne!(a.mean_union_size, c.mean_union_size);
    }

    #[test]
    fn bounded_is_in_range_and_roughly_uniform() {
        let mut rng = trial_rng(1, 2);
        let mut counts = [0usize; 7];
        for _ in 0..70_000 {
            counts[bounded(&mut rng, 7) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| (9_000..11_000).contains(&c)), "{counts:?}");
    }

    #[test]
    fn preconditions() {
        assert!(approx_uc_experiment(99, 2, 100, 0).is_err());
        assert!(approx_uc_experiment(100, 1, 100, 0).is_err());
        assert!(approx_uc_experiment(100, 2, 99, 0).is_err());
    }
}
