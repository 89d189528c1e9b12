//! Families described up to symmetry.
//!
//! The ground set is split into orbits, and membership of a set depends only
//! on its *type*: the number of elements it takes from each orbit. Every
//! question asked of a [`SetFamily`] has an exact answer in terms of types,
//! which lets us analyze families with 2^48 members without listing them.
//!
//! For sets `A`, `B` of types `t`, `u`, the achievable types of `A ∪ B` are
//! exactly the box `max(t_i, u_i) ≤ v_i ≤ min(t_i + u_i, s_i)`, since overlaps
//! inside different orbits can be chosen independently. Union-closedness is
//! therefore a box-emptiness query over non-member types.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{BlockPartition, GroundSet, SetFamily};
use crate::error::{Error, Result};
use crate::subset::Subset;

#[derive(Clone, Debug)]
pub struct OrbitFamily {
    ground: GroundSet,
    orbits: Vec<Vec<usize>>,
    radix: Vec<usize>,
    member: Vec<bool>,
    binom: Vec<Vec<BigUint>>,
}

/// Exact count of members containing one (any) element of an orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitFrequency {
    pub elements: Vec<usize>,
    pub count: BigUint,
}

impl OrbitFamily {
    /// `orbits` must partition `[n]`; `member(t)` decides membership of
    /// every set of type `t` (`t[i]` elements from `orbits[i]`).
    pub fn from_type_predicate<P>(ground: GroundSet, orbits: Vec<Vec<usize>>, member: P) -> Result<Self>
    where
        P: Fn(&[usize]) -> bool,
    {
        let n = ground.n();
        let mut seen = vec![false; n];
        for e in orbits.iter().flatten() {
            if *e == 0 || *e > n || std::mem::replace(&mut seen[*e - 1], true) {
                return Err(Error::domain("orbits must partition the ground set"));
            }
        }
        if seen.iter().any(|s| !s) || orbits.iter().any(Vec::is_empty) {
            return Err(Error::domain("orbits must partition the ground set"));
        }
        let radix: Vec<usize> = orbits.iter().map(|o| o.len() + 1).collect();
        let cells: usize = radix.iter().product();
        if cells > 1 << 24 {
            return Err(Error::resource(format!("{cells} orbit types is too many")));
        }
        let mut t = vec![0; radix.len()];
        let member = (0..cells)
            .map(|idx| {
                decode(idx, &radix, &mut t);
                member(&t)
            })
            .collect();
        let binom = orbits
            .iter()
            .map(|o| {
                let s = o.len();
                let mut row = vec![BigUint::one(); s + 1];
                for k in 1..=s {
                    row[k] = &row[k - 1] * BigUint::from(s - k + 1) / BigUint::from(k);
                }
                row
            })
            .collect();
        Ok(OrbitFamily {
            ground,
            orbits,
            radix,
            member,
            binom,
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    fn member_types(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (idx, &m) in self.member.iter().enumerate() {
            if m {
                let mut t = vec![0; self.radix.len()];
                decode(idx, &self.radix, &mut t);
                out.push(t);
            }
        }
        out
    }

    fn multiplicity(&self, t: &[usize]) -> BigUint {
        t.iter()
            .enumerate()
            .fold(BigUint::one(), |acc, (i, &ti)| acc * &self.binom[i][ti])
    }

    pub fn contains(&self, s: &Subset) -> bool {
        let t: Vec<usize> = self
            .orbits
            .iter()
            .map(|o| o.iter().filter(|&&e| s.contains(e)).count())
            .collect();
        self.member[encode(&t, &self.radix)]
    }

    /// Number of member sets.
    pub fn size(&self) -> BigUint {
        self.member_types()
            .iter()
            .map(|t| self.multiplicity(t))
            .sum()
    }

    /// Per-orbit membership count of a single element.
    pub fn frequencies(&self) -> Vec<OrbitFrequency> {
        let types = self.member_types();
        (0..self.orbits.len())
            .map(|j| {
                let s = self.orbits[j].len();
                let count = types
                    .iter()
                    .filter(|t| t[j] >= 1)
                    .map(|t| {
                        let rest = t
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != j)
                            .fold(BigUint::one(), |acc, (i, &ti)| acc * &self.binom[i][ti]);
                        // sets of this type through a fixed element of orbit j
                        rest * &self.binom[j][t[j]] * BigUint::from(t[j]) / BigUint::from(s)
                    })
                    .sum();
                OrbitFrequency {
                    elements: self.orbits[j].clone(),
                    count,
                }
            })
            .collect()
    }

    /// Elements with `2·count ≥ |F|`, ascending.
    pub fn abundant_elements(&self) -> Vec<usize> {
        let size = self.size();
        let mut out: Vec<usize> = self
            .frequencies()
            .into_iter()
            .filter(|f| f.count.clone() * 2u32 >= size && !size.is_zero())
            .flat_map(|f| f.elements)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_union_closed(&self) -> bool {
        self.union_closure_witness().is_none()
    }

    /// A pair of member types whose unions can leave the family, if any.
    pub fn union_closure_witness(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let r = self.radix.len();
        // prefix sums of the non-member indicator, one pass per dimension
        let mut pre: Vec<u64> = self.member.iter().map(|&m| u64::from(!m)).collect();
        let mut stride = 1;
        for &rad in &self.radix {
            for idx in 0..pre.len() {
                if (idx / stride) % rad != 0 {
                    pre[idx] += pre[idx - stride];
                }
            }
            stride *= rad;
        }
        let strides: Vec<usize> = self
            .radix
            .iter()
            .scan(1, |acc, &rad| {
                let s = *acc;
                *acc *= rad;
                Some(s)
            })
            .collect();
        let box_empty = |lo: &[usize], hi: &[usize]| -> bool {
            let mut total: i64 = 0;
            'corner: for mask in 0u32..1 << r {
                let mut idx = 0;
                let mut sign = 1;
                for i in 0..r {
                    let c = if mask >> i & 1 == 1 {
                        if lo[i] == 0 {
                            continue 'corner;
                        }
                        sign = -sign;
                        lo[i] - 1
                    } else {
                        hi[i]
                    };
                    idx += c * strides[i];
                }
                total += sign * pre[idx] as i64;
            }
            total == 0
        };
        let types = self.member_types();
        let sizes: Vec<usize> = self.orbits.iter().map(Vec::len).collect();
        types.par_iter().enumerate().find_map_first(|(a, t)| {
            let mut lo = vec![0; r];
            let mut hi = vec![0; r];
            for u in &types[a..] {
                for i in 0..r {
                    lo[i] = t[i].max(u[i]);
                    hi[i] = (t[i] + u[i]).min(sizes[i]);
                }
                if !box_empty(&lo, &hi) {
                    return Some((t.clone(), u.clone()));
                }
            }
            None
        })
    }

    /// Poonen blocks, computed from the orbit structure.
    ///
    /// An orbit containing a member type strictly between empty and full
    /// splits into singletons (a transposition inside the orbit fixes the
    /// family, so a split orbit cannot share a block with anything else).
    /// The remaining orbits appear whole or not at all, and two of them merge
    /// when no member separates them.
    pub fn blocks(&self) -> BlockPartition {
        let types = self.member_types();
        let r = self.orbits.len();
        let sizes: Vec<usize> = self.orbits.iter().map(Vec::len).collect();
        let appears: Vec<bool> = (0..r).map(|j| types.iter().any(|t| t[j] >= 1)).collect();
        let split: Vec<bool> = (0..r)
            .map(|j| sizes[j] >= 2 && types.iter().any(|t| t[j] >= 1 && t[j] < sizes[j]))
            .collect();
        let mut parent: Vec<usize> = (0..r).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let whole: Vec<usize> = (0..r).filter(|&j| appears[j] && !split[j]).collect();
        for (a, &j) in whole.iter().enumerate() {
            for &l in &whole[a + 1..] {
                let separated = types.iter().any(|t| {
                    (t[j] >= 1 && t[l] < sizes[l]) || (t[l] >= 1 && t[j] < sizes[j])
                });
                if !separated {
                    let (x, y) = (find(&mut parent, j), find(&mut parent, l));
                    parent[x] = y;
                }
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut never = Vec::new();
        let mut merged: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for j in 0..r {
            if !appears[j] {
                never.extend(&self.orbits[j]);
            } else if split[j] {
                blocks.extend(self.orbits[j].iter().map(|&e| vec![e]));
            } else {
                let root = find(&mut parent, j);
                merged.entry(root).or_default().extend(&self.orbits[j]);
            }
        }
        blocks.extend(merged.into_values());
        BlockPartition::from_classes(blocks, never)
    }

    /// Lists every member. Fails when the family has more than `cap` members.
    pub fn materialize(&self, cap: usize) -> Result<SetFamily> {
        let size = self.size();
        if size > BigUint::from(cap) {
            return Err(Error::resource(format!(
                "family has {size} members, above the cap of {cap}"
            )));
        }
        if size.is_zero() {
            return Err(Error::domain("the described family is empty"));
        }
        let n = self.ground.n();
        let mut members = Vec::new();
        for t in self.member_types() {
            let mut partial = vec![Subset::empty(n)];
            for (orbit, &k) in self.orbits.iter().zip(&t) {
                let mut next = Vec::new();
                for base in &partial {
                    for_each_combination(orbit, k, |pick| {
                        let mut s = base.clone();
                        for &e in pick {
                            s.insert(e);
                        }
                        next.push(s);
                    });
                }
                partial = next;
            }
            members.extend(partial);
        }
        SetFamily::new(self.ground, members)
    }
}

fn decode(mut idx: usize, radix: &[usize], out: &mut [usize]) {
    for (o, &r) in out.iter_mut().zip(radix) {
        *o = idx % r;
        idx /= r;
    }
}

fn encode(t: &[usize], radix: &[usize]) -> usize {
    t.iter()
        .zip(radix)
        .rev()
        .fold(0, |acc, (&ti, &r)| acc * r + ti)
}

fn for_each_combination<F: FnMut(&[usize])>(items: &[usize], k: usize, mut f: F) {
    let n = items.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut pick: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&pick);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            pick[j] = items[idx[j]];
        }
    }
}
