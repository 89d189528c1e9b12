//! Named extremal families and their exact counts.
//!
//! Families whose size puts them out of reach of explicit listing are also
//! available as [`OrbitFamily`] values, which answer the same questions
//! exactly from the symmetry of the construction.

mod approx;

pub use approx::{approx_uc_experiment, ApproxUcReport};

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{GroundSet, OrbitFamily, SetFamily};
use crate::subset::Subset;

/// Largest family any constructor will list without an explicit override.
pub const DEFAULT_SIZE_CAP: usize = 10_000_000;
/// Environment variable that overrides [`DEFAULT_SIZE_CAP`].
pub const SIZE_CAP_ENV: &str = "UCLAB_SIZE_CAP";

/// The configured size cap: `UCLAB_SIZE_CAP` if set to a valid integer, else the default.
pub fn size_cap() -> Result<usize> {
    match std::env::var(SIZE_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("{SIZE_CAP_ENV}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_SIZE_CAP),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BinomialMode {
    AtMost,
    AtLeast,
    Exact,
}

impl BinomialMode {
    fn admits(self, size: usize, k: usize) -> bool {
        match self {
            BinomialMode::AtMost => size <= k,
            BinomialMode::AtLeast => size >= k,
            BinomialMode::Exact => size == k,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstructionSpec {
    Fm(usize),
    Binomial { n: usize, mode: BinomialMode, k: usize },
    S12_4,
    Snk { n: usize, k: usize },
    ApproxUc { n: usize, k_draws: usize },
}

impl ConstructionSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ConstructionSpec::Fm(m) => check_fm(m),
            ConstructionSpec::Binomial { n, k, .. } => check_binomial(n, k),
            ConstructionSpec::S12_4 => Ok(()),
            ConstructionSpec::Snk { n, k } => check_snk(n, k),
            ConstructionSpec::ApproxUc { n, k_draws } => {
                if n < 100 || k_draws < 2 {
                    return Err(Error::domain("the approximate family needs n ≥ 100 and k_draws ≥ 2"));
                }
                Ok(())
            }
        }
    }

    /// Exact member count, without listing the family.
    pub fn size(&self) -> Result<BigUint> {
        self.validate()?;
        Ok(match *self {
            ConstructionSpec::Fm(m) => BigUint::from((1usize << m) + m * m - m),
            ConstructionSpec::Binomial { n, mode, k } => binomial_size(n, mode, k),
            ConstructionSpec::S12_4 => snk_size(12, 4),
            ConstructionSpec::Snk { n, k } => snk_size(n, k),
            ConstructionSpec::ApproxUc { n, k_draws } => {
                let (s, _) = approx::thresholds(n, k_draws)?;
                binomial(BigUint::from(n), BigUint::from(s))
            }
        })
    }

    /// Lists the family, subject to `cap`.
    pub fn build(&self, cap: usize) -> Result<SetFamily> {
        match *self {
            ConstructionSpec::Fm(m) => make_fm(m),
            ConstructionSpec::Binomial { n, mode, k } => make_binomial_capped(n, mode, k, cap),
            ConstructionSpec::S12_4 => Ok(make_s12_4()),
            ConstructionSpec::Snk { n, k } => make_snk_capped(n, k, cap),
            ConstructionSpec::ApproxUc { .. } => {
                self.validate()?;
                Err(Error::resource(
                    "the approximate union-closed slice is only ever sampled; run the approx-uc experiment",
                ))
            }
        }
    }
}

fn check_fm(m: usize) -> Result<()> {
    if !(1..=20).contains(&m) {
        return Err(Error::domain(format!("F_m needs 1 ≤ m ≤ 20, got m = {m}")));
    }
    Ok(())
}

fn check_binomial(n: usize, k: usize) -> Result<()> {
    GroundSet::new(n)?;
    if k > n {
        return Err(Error::domain(format!("need 0 ≤ k ≤ n, got n = {n}, k = {k}")));
    }
    Ok(())
}

fn check_snk(n: usize, k: usize) -> Result<()> {
    if k < 3 || n % 2 != 0 || n < 10 * k {
        return Err(Error::domain(format!(
            "S^n_k needs k ≥ 3, n even and n ≥ 10k, got n = {n}, k = {k}"
        )));
    }
    GroundSet::new(n)?;
    Ok(())
}

/// All subsets of `[m]` together with the initial segments `[j]`, `m < j ≤ m²`.
pub fn make_fm(m: usize) -> Result<SetFamily> {
    check_fm(m)?;
    let n = m * m;
    let ground = GroundSet::new(n)?;
    let cube = (0u64..1 << m).map(|mask| Subset::from_mask(n, mask));
    let segments = (m + 1..=n).map(|j| Subset::from_elements(n, 1..=j).expect("j ≤ n"));
    SetFamily::new(ground, cube.chain(segments))
}

fn binomial_size(n: usize, mode: BinomialMode, k: usize) -> BigUint {
    (0..=n)
        .filter(|&j| mode.admits(j, k))
        .map(|j| binomial(BigUint::from(n), BigUint::from(j)))
        .sum()
}

/// All subsets of `[n]` whose size is at most, at least, or exactly `k`, under the configured cap.
pub fn make_binomial(n: usize, mode: BinomialMode, k: usize) -> Result<SetFamily> {
    make_binomial_capped(n, mode, k, size_cap()?)
}

pub fn make_binomial_capped(n: usize, mode: BinomialMode, k: usize, cap: usize) -> Result<SetFamily> {
    check_binomial(n, k)?;
    let ground = GroundSet::new(n)?;
    OrbitFamily::from_type_predicate(ground, vec![(1..=n).collect()], |t| mode.admits(t[0], k))?
        .materialize(cap)
}

/// The twelve-element family with exactly two abundant elements, on `[12]`.
///
/// Elements `0..=11` of the classical description are shifted up by one, so
/// the designated elements are 1 and 2. A set of size at least 4 belongs when
/// it contains both 1 and 2, or contains 1 and otherwise only odd elements, or
/// contains 2 and otherwise only even elements.
pub fn make_s12_4() -> SetFamily {
    let n = 12;
    let odd: u64 = (0..n).step_by(2).map(|b| 1u64 << b).sum();
    let even: u64 = (1..n).step_by(2).map(|b| 1u64 << b).sum();
    let members = (0u64..1 << n)
        .filter(|&m| {
            m.count_ones() >= 4
                && ((m & 0b11 == 0b11)
                    || (m & 1 == 1 && m & !odd == 0)
                    || (m & 0b10 == 0b10 && m & !even == 0))
        })
        .map(|m| Subset::from_mask(n, m));
    SetFamily::new(GroundSet::new(n).expect("n = 12"), members).expect("nonempty")
}

/// `S^n_k` in orbit form, for any even `n ≥ 4` and `k ≥ 1`.
///
/// Orbits are `{1}`, `{2}`, the other odd elements and the other even elements.
pub(crate) fn snk_orbit_unchecked(n: usize, k: usize) -> Result<OrbitFamily> {
    let ground = GroundSet::new(n)?;
    let odds: Vec<usize> = (3..=n).step_by(2).collect();
    let evens: Vec<usize> = (4..=n).step_by(2).collect();
    OrbitFamily::from_type_predicate(ground, vec![vec![1], vec![2], odds, evens], |t| {
        let (one, two, o, e) = (t[0], t[1], t[2], t[3]);
        one + two + o + e >= k
            && ((one == 1 && two == 1) || (one == 1 && two == 0 && e == 0) || (two == 1 && one == 0 && o == 0))
    })
}

/// `S^n_k` in exact orbit form; valid for every admissible size of `n`.
pub fn snk_orbit(n: usize, k: usize) -> Result<OrbitFamily> {
    check_snk(n, k)?;
    snk_orbit_unchecked(n, k)
}

/// `S^n_k` listed explicitly, under the configured cap.
pub fn make_snk(n: usize, k: usize) -> Result<SetFamily> {
    make_snk_capped(n, k, size_cap()?)
}

pub fn make_snk_capped(n: usize, k: usize, cap: usize) -> Result<SetFamily> {
    snk_orbit(n, k)?.materialize(cap)
}

fn tail(m: usize, from: usize) -> BigUint {
    (from..=m).map(|j| binomial(BigUint::from(m), BigUint::from(j))).sum()
}

/// `|S^n_k|`: sets through `{1, 2}` plus the two one-sided parity classes.
pub fn snk_size(n: usize, k: usize) -> BigUint {
    let half = n / 2;
    tail(n - 2, k.saturating_sub(2)) + tail(half - 1, k.saturating_sub(1)) * 2u32
}

/// Exact evaluation of `C(n−3, k−3) < 2·Σ_{j ≥ k−1} C(n/2 − 2, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbundanceInequality {
    pub n: usize,
    pub k: usize,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

impl std::fmt::Display for AbundanceInequality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} < {}: {}", self.lhs, self.rhs, self.holds)
    }
}

/// For `S^n_k`, this holds exactly when no element other than 1 and 2 is abundant.
pub fn abundance_inequality(n: usize, k: usize) -> Result<AbundanceInequality> {
    if n % 2 != 0 || k < 3 || n < k {
        return Err(Error::domain(format!("need n even, k ≥ 3 and n ≥ k, got n = {n}, k = {k}")));
    }
    let lhs = binomial(BigUint::from(n - 3), BigUint::from(k - 3));
    let rhs = if n / 2 >= 2 { tail(n / 2 - 2, k - 1) * 2u32 } else { BigUint::zero() };
    let holds = lhs < rhs;
    Ok(AbundanceInequality { n, k, lhs, rhs, holds })
}

/// Summary of a construction that may be too large to list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionSummary {
    pub size: BigUint,
    pub union_closed: bool,
    pub abundant: Vec<usize>,
    pub all_singleton_blocks: bool,
    pub inequality: Option<AbundanceInequality>,
}

/// Size, union-closedness, abundant elements and blocks, without listing the family when avoidable.
pub fn summarize(spec: &ConstructionSpec, cap: usize) -> Result<ConstructionSummary> {
    spec.validate()?;
    let orbit = match *spec {
        ConstructionSpec::S12_4 => Some(snk_orbit_unchecked(12, 4)?),
        ConstructionSpec::Snk { n, k } => Some(snk_orbit(n, k)?),
        _ => None,
    };
    let inequality = match *spec {
        ConstructionSpec::S12_4 => Some(abundance_inequality(12, 4)?),
        ConstructionSpec::Snk { n, k } => Some(abundance_inequality(n, k)?),
        _ => None,
    };
    if let Some(o) = orbit {
        return Ok(ConstructionSummary {
            size: o.size(),
            union_closed: o.is_union_closed(),
            abundant: o.abundant_elements(),
            all_singleton_blocks: o.blocks().all_singletons(),
            inequality,
        });
    }
    let f = spec.build(cap)?;
    Ok(ConstructionSummary {
        size: BigUint::from(f.len()),
        union_closed: f.is_union_closed(),
        abundant: f.abundant_elements(),
        all_singleton_blocks: f.blocks().all_singletons(),
        inequality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fm_small() {
        let f1 = make_fm(1).unwrap();
        assert_eq!(f1.len(), 2);
        let f2 = make_fm(2).unwrap();
        assert_eq!(f2.len(), 6);
        assert_eq!(f2.n(), 4);
        let expected = SetFamily::from_sets(4, [vec![], vec![1], vec![2], vec![1, 2], vec![1, 2, 3], vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(f2, expected);
        let f3 = make_fm(3).unwrap();
        assert_eq!(f3.len(), 14);
        assert!(f3.is_union_closed());
        assert!(make_fm(0).is_err());
        assert!(make_fm(21).is_err());
        for m in 1..=6 {
            let f = make_fm(m).unwrap();
            assert_eq!(BigUint::from(f.len()), ConstructionSpec::Fm(m).size().unwrap());
            assert!(f.is_union_closed());
        }
    }

    #[test]
    fn binomial_sizes() {
        assert_eq!(make_binomial_capped(3, BinomialMode::AtMost, 2, 100).unwrap().len(), 7);
        assert_eq!(make_binomial_capped(5, BinomialMode::AtMost, 3, 100).unwrap().len(), 26);
        assert_eq!(make_binomial_capped(6, BinomialMode::AtMost, 6, 100).unwrap().len(), 64);
        assert_eq!(make_binomial_capped(6, BinomialMode::Exact, 3, 100).unwrap().len(), 20);
        assert_eq!(make_binomial_capped(6, BinomialMode::AtLeast, 5, 100).unwrap().len(), 7);
        assert!(matches!(
            make_binomial_capped(30, BinomialMode::AtLeast, 10, 1000),
            Err(Error::Resource(_))
        ));
        assert!(matches!(make_binomial_capped(3, BinomialMode::AtMost, 4, 100), Err(Error::Domain(_))));
    }

    #[test]
    fn s12_4_counts() {
        let f = make_s12_4();
        assert_eq!(f.len(), 1045);
        assert_eq!(BigUint::from(1045u32), snk_size(12, 4));
        let p = f.frequency_profile();
        for e in 3..=12 {
            assert_eq!(p.count(e), 522, "element {e}");
        }
        assert_eq!(f.abundant_elements(), vec![1, 2]);
        assert!(f.is_union_closed());
        let orbit = snk_orbit_unchecked(12, 4).unwrap().materialize(10_000).unwrap();
        assert_eq!(orbit, f);
    }

    #[test]
    fn snk_orbit_matches_listing() {
        for (n, k) in [(30, 3)] {
            let o = snk_orbit(n, k).unwrap();
            assert_eq!(o.size(), snk_size(n, k));
            assert!(o.is_union_closed());
            assert_eq!(o.abundant_elements(), vec![1, 2]);
            assert!(o.blocks().all_singletons());
        }
        for (n, k) in [(10, 3), (12, 3), (14, 5)] {
            let o = snk_orbit_unchecked(n, k).unwrap();
            let f = o.materialize(1 << 20).unwrap();
            assert_eq!(BigUint::from(f.len()), snk_size(n, k));
            assert!(f.is_union_closed());
            assert_eq!(f.abundant_elements(), o.abundant_elements());
            assert_eq!(f.blocks(), o.blocks());
        }
        assert!(snk_orbit(28, 3).is_err());
        assert!(snk_orbit(31, 3).is_err());
        assert!(snk_orbit(40, 2).is_err());
    }

    #[test]
    fn abundance_inequality_examples() {
        let a = abundance_inequality(30, 3).unwrap();
        assert_eq!((a.lhs.clone(), a.rhs.clone(), a.holds), (1u32.into(), 16356u32.into(), true));
        assert_eq!(a.to_string(), "1 < 16356: true");
        let b = abundance_inequality(6, 3).unwrap();
        assert_eq!((b.lhs, b.rhs, b.holds), (1u32.into(), 0u32.into(), false));
        for k in 3..=6 {
            assert!(abundance_inequality(10 * k, k).unwrap().holds);
        }
        assert!(abundance_inequality(7, 3).is_err());
        assert!(abundance_inequality(10, 2).is_err());
    }

    #[test]
    fn inequality_matches_measured_abundance() {
        for k in 3..=6 {
            for n in (2 * k..=40).step_by(2).filter(|n| n % 2 == 0 && *n >= 4) {
                let o = snk_orbit_unchecked(n, k).unwrap();
                let others_rare = o.abundant_elements().iter().all(|&e| e <= 2);
                assert_eq!(abundance_inequality(n, k).unwrap().holds, others_rare, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn snk_symmetry() {
        let f = snk_orbit_unchecked(14, 3).unwrap().materialize(1 << 20).unwrap();
        let p = f.frequency_profile();
        let odd: Vec<usize> = (3..=14).step_by(2).map(|e| p.count(e)).collect();
        let even: Vec<usize> = (4..=14).step_by(2).map(|e| p.count(e)).collect();
        assert!(odd.windows(2).all(|w| w[0] == w[1]));
        assert!(even.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn summary_without_listing() {
        let s = summarize(&ConstructionSpec::Snk { n: 50, k: 5 }, 1000).unwrap();
        assert!(s.union_closed && s.all_singleton_blocks);
        assert_eq!(s.abundant, vec![1, 2]);
        assert_eq!(s.size, snk_size(50, 5));
        let s = summarize(&ConstructionSpec::Fm(3), 1000).unwrap();
        assert_eq!(s.size, BigUint::from(14u32));
        assert!(s.inequality.is_none());
        assert!(ConstructionSpec::ApproxUc { n: 1000, k_draws: 2 }.build(10).is_err());
    }
}
