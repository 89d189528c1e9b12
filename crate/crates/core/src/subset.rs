//! Multiword bitsets over a 1-indexed ground set.
//!
//! Element `i` is stored at bit `i - 1`. All subsets belonging to one family
//! share the same word count, so the derived `Eq`/`Hash` agree with set
//! equality. The `Ord` impl is numeric order of the bitset read as an
//! unsigned integer (element `n` is the most significant bit).

use std::cmp::Ordering;
use std::fmt;

pub(crate) const WORD_BITS: usize = 64;

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    words: Box<[u64]>,
}

impl Subset {
    /// The empty subset of a ground set with `n` elements.
    pub fn empty(n: usize) -> Self {
        Subset {
            words: vec![0; words_for(n).max(1)].into_boxed_slice(),
        }
    }

    /// Builds a subset from 1-indexed elements. Elements must lie in `1..=n`.
    pub fn from_elements<I: IntoIterator<Item = usize>>(n: usize, elements: I) -> Option<Self> {
        let mut s = Subset::empty(n);
        for e in elements {
            if e == 0 || e > n {
                return None;
            }
            s.insert(e);
        }
        Some(s)
    }

    /// Subset of `[n]` whose bits are the low `n` bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut s = Subset::empty(n);
        s.words[0] = if n >= 64 { mask } else { mask & ((1u64 << n) - 1) };
        s
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, e: usize) -> bool {
        debug_assert!(e >= 1);
        let b = e - 1;
        self.words
            .get(b / WORD_BITS)
            .is_some_and(|w| w >> (b % WORD_BITS) & 1 == 1)
    }

    pub fn insert(&mut self, e: usize) {
        let b = e - 1;
        self.words[b / WORD_BITS] |= 1 << (b % WORD_BITS);
    }

    pub fn remove(&mut self, e: usize) {
        let b = e - 1;
        self.words[b / WORD_BITS] &= !(1 << (b % WORD_BITS));
    }

    pub fn union(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.words.len(), other.words.len());
        Subset {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn union_with(&mut self, other: &Subset) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Largest element, if any.
    pub fn max_element(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * WORD_BITS + (WORD_BITS - w.leading_zeros() as usize))
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD_BITS + t + 1)
            })
        })
    }

    /// Same elements, re-encoded for a ground set of size `n`.
    /// Returns `None` if some element exceeds `n`.
    pub fn resized(&self, n: usize) -> Option<Subset> {
        Subset::from_elements(n, self.iter())
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_order_across_words() {
        let a = Subset::from_elements(130, [65]).unwrap();
        let b = Subset::from_elements(130, [1, 2, 3, 64]).unwrap();
        let c = Subset::from_elements(130, [129]).unwrap();
        assert!(b < a && a < c);
        assert!(Subset::empty(130) < b);
    }

    #[test]
    fn iter_and_len() {
        let s = Subset::from_elements(200, [1, 64, 65, 128, 200]).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 64, 65, 128, 200]);
        assert_eq!(s.len(), 5);
        assert_eq!(s.max_element(), Some(200));
        assert_eq!(s.to_string(), "{1,64,65,128,200}");
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(Subset::from_elements(4, [0]).is_none());
        assert!(Subset::from_elements(4, [5]).is_none());
    }

    #[test]
    fn union_and_subset() {
        let a = Subset::from_elements(4, [1, 2]).unwrap();
        let b = Subset::from_elements(4, [2, 4]).unwrap();
        let u = a.union(&b);
        assert_eq!(u, Subset::from_elements(4, [1, 2, 4]).unwrap());
        assert!(a.is_subset_of(&u) && !u.is_subset_of(&a));
    }
}
