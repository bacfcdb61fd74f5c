//! Ground sets, subset bitmasks, and permutations of the ground set.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set the exact algorithms accept.
pub const MAX_ELEMENTS: usize = 62;

/// A subset of `{0, .., n-1}` stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 63);
        Subset((1u64 << n) - 1)
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1u64 << i)
    }

    pub fn from_elements(elems: impl IntoIterator<Item = usize>) -> Self {
        elems.into_iter().fold(Self::EMPTY, |s, i| s.with(i))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[must_use]
    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1 << i)
    }

    #[must_use]
    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Complement within a ground set of size `n`.
    #[must_use]
    pub fn complement(self, n: usize) -> Self {
        Subset(!self.0 & Self::full(n).0)
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Elements in ascending order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self` (including `EMPTY` and `self`), in increasing mask order.
    pub fn subsets(self) -> SubsetsOf {
        SubsetsOf {
            of: self.0,
            next: Some(0),
        }
    }

    /// Re-indexes `self` (a subset of `within`) onto `0..within.len()`.
    pub fn compress(self, within: Subset) -> Subset {
        debug_assert!(self.is_subset_of(within));
        within
            .iter()
            .enumerate()
            .filter(|&(_, e)| self.contains(e))
            .fold(Subset::EMPTY, |acc, (i, _)| acc.with(i))
    }

    /// Inverse of [`Subset::compress`].
    pub fn expand(self, within: Subset) -> Subset {
        within
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.contains(i))
            .fold(Subset::EMPTY, |acc, (_, e)| acc.with(e))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        Subset(self.0 | rhs.0)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        Subset(self.0 & rhs.0)
    }
}

/// Set difference.
impl Sub for Subset {
    type Output = Subset;
    fn sub(self, rhs: Subset) -> Subset {
        Subset(self.0 & !rhs.0)
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Subset::from_elements(iter)
    }
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

pub struct SubsetsOf {
    of: u64,
    next: Option<u64>,
}

impl Iterator for SubsetsOf {
    type Item = Subset;
    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        self.next = if cur == self.of {
            None
        } else {
            Some((cur.wrapping_sub(self.of)) & self.of)
        };
        Some(Subset(cur))
    }
}

/// The finite set being searched, with external labels per element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || n > MAX_ELEMENTS {
            return Err(Error::Capacity {
                n,
                limit: MAX_ELEMENTS,
                what: "ground set",
            });
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("duplicate label {:?}", w[0])));
        }
        Ok(GroundSet { labels })
    }

    /// Labels `"1".."n"`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn check(&self, set: Subset) -> Result<()> {
        if set.is_subset_of(self.full()) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                mask: set.0,
                n: self.len(),
            })
        }
    }

    pub fn names(&self, set: Subset) -> Vec<String> {
        set.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// Restriction of the label list to `set`, in ascending element order.
    pub fn restrict(&self, set: Subset) -> GroundSet {
        GroundSet {
            labels: self.names(set),
        }
    }
}

/// A search order: `perm[t]` is the element searched at step `t + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SearchOrder(Vec<usize>);

impl SearchOrder {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &e in &perm {
            if e >= n || std::mem::replace(&mut seen[e], true) {
                return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(SearchOrder(perm))
    }

    pub fn identity(n: usize) -> Self {
        SearchOrder((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[must_use]
    pub fn reversed(&self) -> Self {
        SearchOrder(self.0.iter().rev().copied().collect())
    }

    /// Prefix sets `S_1, .., S_n` paired with the element added at each step.
    pub fn prefixes(&self) -> impl Iterator<Item = (usize, Subset)> + '_ {
        self.0.iter().scan(Subset::EMPTY, |acc, &e| {
            *acc = acc.with(e);
            Some((e, *acc))
        })
    }
}
