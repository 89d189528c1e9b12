//! Exhaustive search over all families on a ground set of at most four elements.
//!
//! A family on `[n]` is a bitmask over the `2^n` subsets, which are themselves
//! bitmasks (element `i` at bit `i − 1`). Two independent code paths produce
//! the union-closed families: a filter over every mask, and a depth-first
//! search that decides subsets in increasing order and forces a subset in as
//! soon as it is the union of two chosen ones.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::entropy::{gilmer_certificate, Verdict};
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::subset::Subset;

pub const MAX_EXHAUSTIVE_N: usize = 4;
pub const MAX_COVERAGE_N: usize = 3;

/// A family on `[n]`, `n ≤ 4`: bit `s` of `mask` is set when the subset with bitmask `s` is a member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallFamily {
    n: usize,
    mask: u32,
}

impl SmallFamily {
    pub fn new(n: usize, mask: u32) -> Result<Self> {
        if n > MAX_EXHAUSTIVE_N || mask >> (1u32 << n) != 0 {
            return Err(Error::domain(format!("mask {mask:#x} is not a family on [{n}]")));
        }
        Ok(SmallFamily { n, mask })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    /// Member subsets as bitmasks, ascending.
    pub fn sets(self) -> impl Iterator<Item = u32> {
        let mask = self.mask;
        (0..32u32).filter(move |s| mask >> s & 1 == 1)
    }

    pub fn is_union_closed(self) -> bool {
        let sets: Vec<u32> = self.sets().collect();
        sets.iter()
            .enumerate()
            .all(|(i, &a)| sets[i + 1..].iter().all(|&b| self.mask >> (a | b) & 1 == 1))
    }

    /// Excluded from conjecture statistics: the empty family and `{∅}`.
    pub fn qualifies(self) -> bool {
        self.mask != 0 && self.mask != 1
    }

    /// `max_i |{A ∈ F : i ∈ A}| / |F|`; zero for the empty family.
    pub fn max_fraction(self) -> Ratio<u64> {
        let len = self.len() as u64;
        if len == 0 {
            return Ratio::from_integer(0);
        }
        let best = (0..self.n)
            .map(|i| self.sets().filter(|s| s >> i & 1 == 1).count() as u64)
            .max()
            .unwrap_or(0);
        Ratio::new(best, len)
    }

    pub fn to_set_family(self) -> Result<SetFamily> {
        SetFamily::new(
            crate::family::GroundSet::new(self.n.max(1))?,
            self.sets().map(|s| Subset::from_mask(self.n.max(1), u64::from(s))),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnumerationReport {
    pub n: usize,
    /// Size of the candidate space `2^(2^n)`, all of which is accounted for.
    pub families_scanned: u64,
    /// Union-closed families other than the empty family and `{∅}`.
    pub uc_count: u64,
    pub min_max_fraction: Ratio<u64>,
    /// The qualifying family attaining the minimum with the smallest mask.
    pub worst_family: SmallFamily,
    pub conjecture_holds: bool,
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("the ground set needs at least one element"));
    }
    if n > max {
        return Err(Error::resource(format!(
            "exhaustive search stops at n = {max}: there are 2^(2^{n}) candidate families; sample random families instead"
        )));
    }
    Ok(())
}

/// Running minimum with witness; merging is associative and commutative.
#[derive(Clone, Copy)]
struct Acc {
    count: u64,
    best: Option<(Ratio<u64>, SmallFamily)>,
}

impl Acc {
    const EMPTY: Acc = Acc { count: 0, best: None };

    fn push(mut self, f: SmallFamily) -> Acc {
        self.count += 1;
        self.merge(Acc { count: 0, best: Some((f.max_fraction(), f)) })
    }

    fn merge(self, other: Acc) -> Acc {
        let best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(if (b.0, b.1.mask) < (a.0, a.1.mask) { b } else { a }),
            (a, b) => a.or(b),
        };
        Acc { count: self.count + other.count, best }
    }

    fn report(self, n: usize) -> EnumerationReport {
        let (min, worst) = self.best.expect("every n ≥ 1 has qualifying families");
        EnumerationReport {
            n,
            families_scanned: 1u64 << (1u32 << n),
            uc_count: self.count,
            min_max_fraction: min,
            worst_family: worst,
            conjecture_holds: min >= Ratio::new(1, 2),
        }
    }
}

/// Visits every qualifying union-closed family on `[n]`, in increasing mask order
/// of the search tree, and summarizes them.
pub fn enumerate_union_closed<V>(n: usize, mut visitor: V) -> Result<EnumerationReport>
where
    V: FnMut(SmallFamily),
{
    check_n(n, MAX_EXHAUSTIVE_N)?;
    let mut acc = Acc::EMPTY;
    dfs(n, 0, 0, &mut |f| {
        if f.qualifies() {
            debug_assert!(f.is_union_closed());
            acc = acc.push(f);
            visitor(f);
        }
    });
    Ok(acc.report(n))
}

fn dfs(n: usize, next: u32, mask: u32, emit: &mut impl FnMut(SmallFamily)) {
    let total = 1u32 << n;
    if next == total {
        emit(SmallFamily { n, mask });
        return;
    }
    let forced = (0..next)
        .filter(|&a| mask >> a & 1 == 1)
        .any(|a| (0..next).any(|b| mask >> b & 1 == 1 && a | b == next));
    if !forced {
        dfs(n, next + 1, mask, emit);
    }
    dfs(n, next + 1, mask | 1 << next, emit);
}

/// The same report computed by filtering every mask, in parallel.
pub fn brute_force_report(n: usize) -> Result<EnumerationReport> {
    check_n(n, MAX_EXHAUSTIVE_N)?;
    let acc = (0..1u64 << (1u32 << n))
        .into_par_iter()
        .map(|m| SmallFamily { n, mask: m as u32 })
        .filter(|f| f.qualifies() && f.is_union_closed())
        .fold(|| Acc::EMPTY, Acc::push)
        .reduce(|| Acc::EMPTY, Acc::merge);
    Ok(acc.report(n))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    pub n: usize,
    pub total_non_uc: u64,
    pub proved_by_entropy: u64,
    /// Proved families that are in fact union-closed; zero for a sound certificate.
    pub unsound: u64,
    pub proved: Vec<SmallFamily>,
}

/// Runs the entropy certificate on every family on `[n]` that is not union-closed.
pub fn certificate_coverage(n: usize) -> Result<CoverageReport> {
    check_n(n, MAX_COVERAGE_N)?;
    let rows: Vec<(SmallFamily, bool, bool)> = (0..1u64 << (1u32 << n))
        .into_par_iter()
        .map(|m| SmallFamily { n, mask: m as u32 })
        .filter(|f| f.len() >= 2)
        .map(|f| {
            let cert = gilmer_certificate(&f.to_set_family()?)?;
            Ok((f, f.is_union_closed(), cert.verdict == Verdict::ProvedNotUnionClosed))
        })
        .collect::<Result<_>>()?;
    let mut report = CoverageReport { n, total_non_uc: 0, proved_by_entropy: 0, unsound: 0, proved: Vec::new() };
    for (f, closed, proved) in rows {
        if proved {
            if closed {
                report.unsound += 1;
            } else {
                report.proved_by_entropy += 1;
                report.proved.push(f);
            }
        }
        if !closed {
            report.total_non_uc += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_by_hand() {
        let mut seen = Vec::new();
        let r = enumerate_union_closed(1, |f| seen.push(f.mask())).unwrap();
        // {{1}} = mask 0b10, {∅,{1}} = 0b11
        assert_eq!(seen, vec![0b10, 0b11]);
        assert_eq!(r.uc_count, 2);
        assert_eq!(r.families_scanned, 4);
        assert_eq!(r.min_max_fraction, Ratio::new(1, 2));
        assert_eq!(r.worst_family.mask(), 0b11);
        assert!(r.conjecture_holds);
    }

    #[test]
    fn dual_paths_agree() {
        for n in 1..=4 {
            let mut all_closed = true;
            let dfs = enumerate_union_closed(n, |f| all_closed &= f.is_union_closed()).unwrap();
            assert!(all_closed);
            let brute = brute_force_report(n).unwrap();
            assert_eq!(dfs, brute, "n = {n}");
            assert!(dfs.conjecture_holds);
            assert_eq!(dfs.min_max_fraction, Ratio::new(1, 2));
            let w = dfs.worst_family;
            assert!(w.is_union_closed() && w.qualifies());
        }
    }

    #[test]
    fn known_counts() {
        // union-closed families on [n] including the empty family and {∅}:
        // 4, 14, 122, 4960 in total
        let expected = [2u64, 12, 120, 4958];
        for n in 1..=4 {
            assert_eq!(enumerate_union_closed(n, |_| {}).unwrap().uc_count, expected[n - 1], "n = {n}");
        }
    }

    #[test]
    fn limits() {
        assert!(matches!(enumerate_union_closed(5, |_| {}), Err(Error::Resource(_))));
        assert!(matches!(enumerate_union_closed(0, |_| {}), Err(Error::Domain(_))));
        assert!(matches!(certificate_coverage(4), Err(Error::Resource(_))));
    }

    #[test]
    fn coverage() {
        let two = certificate_coverage(2).unwrap();
        // {{1},{2}} = masks 0b01, 0b10 as sets → family bits 1 and 2
        assert!(two.proved.iter().any(|f| f.mask() == 0b0110));
        assert_eq!(two.unsound, 0);
        let three = certificate_coverage(3).unwrap();
        assert_eq!(three.unsound, 0);
        assert!(three.proved_by_entropy < three.total_non_uc);
        // all subsets of [3] of size ≤ 2 is not proved
        let low = (0u32..8).filter(|s| s.count_ones() <= 2).fold(0, |m, s| m | 1 << s);
        assert!(!three.proved.iter().any(|f| f.mask() == low));
        assert!(three.proved.iter().all(|f| !f.is_union_closed()));
    }
}
