//! Canonical element sets over a dense ground set `0..n`.
//!
//! Sets are stored as bit masks, so equality, hashing and iteration order are
//! independent of insertion order. Iteration is always by ascending id.

use std::fmt;

use crate::error::{Error, Result};

pub type ElementId = u32;

/// The universe `0..n` of candidate elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> {
        0..self.n as ElementId
    }

    pub fn full(&self) -> ElementSet {
        ElementSet::full(self.n)
    }

    pub fn empty(&self) -> ElementSet {
        ElementSet::empty(self.n)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    universe: usize,
    len: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            len: 0,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for u in 0..universe as ElementId {
            set.insert(u);
        }
        set
    }

    /// Builds a set from ids, rejecting any id outside `0..universe`.
    pub fn from_ids<I>(universe: usize, ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = ElementId>,
    {
        let mut set = Self::empty(universe);
        for id in ids {
            if id as usize >= universe {
                return Err(Error::ElementOutOfRange { id, universe });
            }
            set.insert(id);
        }
        Ok(set)
    }

    /// Decodes the low `universe` bits of `mask` (`universe <= 64`).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64, "mask sets are limited to 64 elements");
        let keep = if universe == 64 {
            u64::MAX
        } else {
            (1u64 << universe) - 1
        };
        let mut words = vec![0; universe.div_ceil(64)];
        if let Some(w) = words.first_mut() {
            *w = mask & keep;
        }
        let len = (mask & keep).count_ones() as usize;
        Self { universe, len, words }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, u: ElementId) -> bool {
        let u = u as usize;
        u < self.universe && self.words[u / 64] & (1 << (u % 64)) != 0
    }

    /// Inserts `u`, returning whether it was absent.
    ///
    /// Panics if `u` is outside the universe.
    #[inline]
    pub fn insert(&mut self, u: ElementId) -> bool {
        let i = u as usize;
        assert!(i < self.universe, "element {u} outside universe {}", self.universe);
        let bit = 1u64 << (i % 64);
        let word = &mut self.words[i / 64];
        if *word & bit == 0 {
            *word |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn remove(&mut self, u: ElementId) -> bool {
        let i = u as usize;
        if i >= self.universe {
            return false;
        }
        let bit = 1u64 << (i % 64);
        let word = &mut self.words[i / 64];
        if *word & bit != 0 {
            *word &= !bit;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    /// Copy of `self` with `u` added.
    pub fn with(&self, u: ElementId) -> Self {
        let mut out = self.clone();
        out.insert(u);
        out
    }

    pub fn extend<I: IntoIterator<Item = ElementId>>(&mut self, ids: I) {
        for u in ids {
            self.insert(u);
        }
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.recount();
    }

    pub fn difference_with(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        self.recount();
    }

    pub fn intersect_with(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        self.recount();
    }

    pub fn union(&self, other: &ElementSet) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &ElementSet) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &ElementSet) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.universe == other.universe && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Ascending iteration over members.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<ElementId> {
        self.iter().collect()
    }

    fn recount(&mut self) {
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = ElementId;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = ElementId;

    #[inline]
    fn next(&mut self) -> Option<ElementId> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros();
                self.current &= self.current - 1;
                return Some((self.index * 64) as ElementId + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}
