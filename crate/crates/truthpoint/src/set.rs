//! Dense bit-vector sets of pool statements.
//!
//! A [`TruthSet`] holds statement *indices* (positions in the pool's statement
//! list), not codes; the pool translates between the two at the boundaries.
//! Fixed-width bit-vector semantics: capacity is set at construction and all
//! operations stay within it.

/// A subset of a pool's statements, as a fixed-capacity bit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TruthSet {
    len: usize,
    words: Vec<u64>,
}

impl TruthSet {
    /// The empty set over `len` statements.
    pub fn empty(len: usize) -> Self {
        TruthSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// The full set over `len` statements.
    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    /// Build from a low-order mask (handy for exhaustive enumeration; requires
    /// `len <= 64`).
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64, "mask construction needs len <= 64");
        let mut s = Self::empty(len);
        if len > 0 {
            s.words[0] = if len == 64 {
                mask
            } else {
                mask & ((1u64 << len) - 1)
            };
        }
        s
    }

    /// Number of statements this set ranges over (not the cardinality).
    pub fn capacity(&self) -> usize {
        self.len
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn card(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &TruthSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &TruthSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &TruthSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersects(&self, other: &TruthSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Iterate member indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = TruthSet::empty(70);
        assert!(s.is_empty());
        s.insert(0);
        s.insert(69);
        assert!(s.contains(0) && s.contains(69) && !s.contains(1));
        assert_eq!(s.card(), 2);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 69]);
        s.remove(0);
        assert_eq!(s.card(), 1);
    }

    #[test]
    fn subset_and_union() {
        let mut a = TruthSet::empty(10);
        let mut b = TruthSet::empty(10);
        a.insert(3);
        b.insert(3);
        b.insert(7);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        a.union_with(&b);
        assert_eq!(a, b);
        assert!(a.intersects(&b));
    }

    #[test]
    fn mask_round_trip() {
        let s = TruthSet::from_mask(6, 0b101001);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 5]);
        assert_eq!(TruthSet::full(6), TruthSet::from_mask(6, u64::MAX));
    }
}
