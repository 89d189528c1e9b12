//! Finite set families over a ground set `[n] = {1, ..., n}`.
//!
//! A [`SetFamily`] is always nonempty, deduplicated and stored in ascending
//! bitset order, so two families are equal exactly when their encodings are.
//! The family `{∅}` is representable; the empty family is not.

mod io;
mod orbit;

use std::collections::{HashMap, HashSet};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::subset::Subset;

pub use io::{parse_family, parse_ucf, FamilyFormat};
pub use orbit::{OrbitFamily, OrbitFrequency};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet(usize);

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::domain(format!(
                "ground set size {n} outside 1..={MAX_GROUND}"
            )));
        }
        Ok(GroundSet(n))
    }

    pub fn n(self) -> usize {
        self.0
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        1..=self.0
    }

    pub fn full(self) -> Subset {
        Subset::from_elements(self.0, 1..=self.0).expect("in range")
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground: GroundSet,
    members: Vec<Subset>,
}

impl SetFamily {
    /// Builds a family, deduplicating and sorting the members.
    ///
    /// Members are re-encoded to the width of `ground`; a member containing
    /// an element larger than `n` is a domain error, as is an empty member list.
    pub fn new<I: IntoIterator<Item = Subset>>(ground: GroundSet, members: I) -> Result<Self> {
        let n = ground.n();
        let width = crate::subset::words_for(n);
        let mut out = Vec::new();
        for s in members {
            let s = if s.words().len() == width {
                if s.max_element().is_some_and(|m| m > n) {
                    return Err(Error::domain(format!("member {s} is not a subset of [{n}]")));
                }
                s
            } else {
                s.resized(n)
                    .ok_or_else(|| Error::domain(format!("member {s} is not a subset of [{n}]")))?
            };
            out.push(s);
        }
        if out.is_empty() {
            return Err(Error::domain("the empty family is not a valid input"));
        }
        out.sort_unstable();
        out.dedup();
        Ok(SetFamily {
            ground,
            members: out,
        })
    }

    /// Convenience constructor from element lists.
    pub fn from_sets<S, I>(n: usize, sets: S) -> Result<Self>
    where
        S: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let ground = GroundSet::new(n)?;
        let mut members = Vec::new();
        for set in sets {
            let v: Vec<usize> = set.into_iter().collect();
            let s = Subset::from_elements(n, v.iter().copied()).ok_or_else(|| {
                Error::domain(format!("set {v:?} has an element outside 1..={n}"))
            })?;
            members.push(s);
        }
        SetFamily::new(ground, members)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Always false; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.members.binary_search(s).is_ok()
    }

    /// Applies a relabeling of the ground set. `perm[i - 1]` is the image of `i`.
    pub fn relabel(&self, perm: &[usize]) -> Result<SetFamily> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n
            || !perm.iter().all(|&p| {
                (1..=n).contains(&p) && !std::mem::replace(&mut seen[p - 1], true)
            })
        {
            return Err(Error::domain("relabeling is not a permutation of [n]"));
        }
        let members = self
            .members
            .iter()
            .map(|s| Subset::from_elements(n, s.iter().map(|e| perm[e - 1])).expect("in range"));
        SetFamily::new(self.ground, members)
    }

    /// `F ∪ F = {A ∪ B : A, B ∈ F}`.
    pub fn union_closure_step(&self) -> SetFamily {
        let mut out: HashSet<Subset> = self.members.iter().cloned().collect();
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                out.insert(a.union(b));
            }
        }
        SetFamily::new(self.ground, out).expect("nonempty")
    }

    pub fn is_union_closed(&self) -> bool {
        let members: HashSet<&Subset> = self.members.iter().collect();
        self.members.iter().enumerate().all(|(i, a)| {
            self.members[i + 1..]
                .iter()
                .all(|b| members.contains(&a.union(b)))
        })
    }

    /// Smallest union-closed family containing `self`.
    pub fn generate_closure(&self) -> SetFamily {
        let mut closed: Vec<Subset> = Vec::new();
        let mut seen: HashSet<Subset> = HashSet::new();
        let mut queue: Vec<Subset> = self.members.clone();
        while let Some(x) = queue.pop() {
            if !seen.insert(x.clone()) {
                continue;
            }
            for c in &closed {
                let u = c.union(&x);
                if !seen.contains(&u) {
                    queue.push(u);
                }
            }
            closed.push(x);
        }
        SetFamily::new(self.ground, closed).expect("nonempty")
    }

    pub fn frequency_profile(&self) -> FrequencyProfile {
        let mut counts = vec![0usize; self.n()];
        for s in &self.members {
            for e in s.iter() {
                counts[e - 1] += 1;
            }
        }
        FrequencyProfile {
            counts,
            total: self.len(),
        }
    }

    /// Elements contained in at least half of the members (`2·count ≥ |F|`).
    pub fn abundant_elements(&self) -> Vec<usize> {
        self.frequency_profile().abundant()
    }

    /// Partition of `[n]` by identical membership pattern across the family.
    pub fn blocks(&self) -> BlockPartition {
        let words = self.len().div_ceil(64);
        let mut patterns = vec![vec![0u64; words]; self.n()];
        for (j, s) in self.members.iter().enumerate() {
            for e in s.iter() {
                patterns[e - 1][j / 64] |= 1 << (j % 64);
            }
        }
        let mut classes: HashMap<&[u64], Vec<usize>> = HashMap::new();
        let mut never = Vec::new();
        for (i, p) in patterns.iter().enumerate() {
            if p.iter().all(|&w| w == 0) {
                never.push(i + 1);
            } else {
                classes.entry(p.as_slice()).or_default().push(i + 1);
            }
        }
        BlockPartition::from_classes(classes.into_values().collect(), never)
    }
}

impl std::fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SetFamily[n={}]", self.n())?;
        f.debug_set().entries(self.members.iter()).finish()
    }
}

/// Exact membership counts of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyProfile {
    /// `counts[i - 1]` is the number of members containing element `i`.
    pub counts: Vec<usize>,
    pub total: usize,
}

impl FrequencyProfile {
    pub fn count(&self, e: usize) -> usize {
        self.counts[e - 1]
    }

    /// The largest count and the smallest element attaining it.
    pub fn max_count(&self) -> (usize, usize) {
        let mut best = (0, 1);
        for (i, &c) in self.counts.iter().enumerate() {
            if c > best.0 {
                best = (c, i + 1);
            }
        }
        best
    }

    /// `max_i counts[i] / |F|`, reduced.
    pub fn max_fraction(&self) -> Ratio<u64> {
        Ratio::new(self.max_count().0 as u64, self.total as u64)
    }

    pub fn fraction(&self, e: usize) -> Ratio<u64> {
        Ratio::new(self.count(e) as u64, self.total as u64)
    }

    pub fn abundant(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| 2 * c >= self.total)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Poonen blocks: classes of elements with identical membership vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    /// Classes of elements that appear in some member, ordered by least element.
    pub blocks: Vec<Vec<usize>>,
    /// Elements that appear in no member.
    pub never_appearing: Vec<usize>,
}

impl BlockPartition {
    pub(crate) fn from_classes(mut blocks: Vec<Vec<usize>>, mut never: Vec<usize>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        never.sort_unstable();
        BlockPartition {
            blocks,
            never_appearing: never,
        }
    }

    /// True when some appearing element forms a block on its own.
    pub fn has_singleton_block(&self) -> bool {
        self.blocks.iter().any(|b| b.len() == 1)
    }

    /// True when every element appears and every block is a singleton.
    pub fn all_singletons(&self) -> bool {
        self.never_appearing.is_empty() && self.blocks.iter().all(|b| b.len() == 1)
    }

    /// All classes, the never-appearing class last when nonempty.
    pub fn classes(&self) -> impl Iterator<Item = &[usize]> {
        self.blocks
            .iter()
            .map(Vec::as_slice)
            .chain((!self.never_appearing.is_empty()).then_some(self.never_appearing.as_slice()))
    }
}
