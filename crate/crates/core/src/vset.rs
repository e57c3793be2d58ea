//! Vertex subsets over a fixed ground set.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(n))
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(n: usize, members: I) -> Self {
        let mut s = Self::empty(n);
        for v in members {
            s.insert(v);
        }
        s
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self::from_members(n, (0..n).filter(|&v| mask >> v & 1 == 1))
    }

    pub fn ground(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, v: usize) {
        self.0.insert(v);
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members().collect()
    }

    pub fn complement(&self) -> Self {
        let mut c = self.0.clone();
        c.toggle_range(..);
        VertexSet(c)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut u = self.0.clone();
        u.union_with(&other.0);
        VertexSet(u)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut i = self.0.clone();
        i.intersect_with(&other.0);
        VertexSet(i)
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut d = self.0.clone();
        d.difference_with(&other.0);
        VertexSet(d)
    }

    pub fn union_with(&mut self, other: &Self) {
        self.0.union_with(&other.0);
    }

    /// The representative of `{self, complement}` that does not contain vertex 0.
    pub fn canonical(&self) -> Self {
        if self.contains(0) {
            self.complement()
        } else {
            self.clone()
        }
    }

    /// Lexicographic comparison of the sorted member lists.
    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        self.members().cmp(other.members())
    }

    /// True iff `a \ b`, `b \ a`, `a ∩ b` and the complement of `a ∪ b` are all nonempty.
    pub fn crosses(&self, other: &Self) -> bool {
        self.intersects(other)
            && !self.is_subset(other)
            && !other.is_subset(self)
            && self.union(other).len() < self.ground()
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_lex(other).then_with(|| self.ground().cmp(&other.ground()))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.members())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_regions() {
        let n = 5;
        let a = VertexSet::from_members(n, [0, 1]);
        let b = VertexSet::from_members(n, [1, 2]);
        let c = VertexSet::from_members(n, [2, 3]);
        let big = VertexSet::from_members(n, [0, 1, 2]);
        assert!(a.crosses(&b));
        assert!(!a.crosses(&c));
        assert!(!a.crosses(&big));
        // union covers the ground set
        let d = VertexSet::from_members(n, [1, 2, 3, 4]);
        assert!(!a.crosses(&d));
    }

    #[test]
    fn canonical_drops_zero() {
        let s = VertexSet::from_members(4, [0, 2]);
        assert_eq!(s.canonical().to_vec(), vec![1, 3]);
        assert!(s.complement().complement() == s);
    }
}
