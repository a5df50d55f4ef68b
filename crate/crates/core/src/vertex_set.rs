use core::cmp::Ordering;
use core::fmt;

use smallvec::SmallVec;

const BITS: usize = 64;

/// A finite set of vertex indices, stored as a bitmask.
///
/// Trailing zero words are always trimmed, so structural equality is set
/// equality. The [`Ord`] instance is the canonical order used for every
/// tie-break in the crate: smaller sets first, and among sets of equal size
/// the one holding the least element of the symmetric difference first
/// (lexicographic order on sorted element lists).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: SmallVec<[u64; 2]>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self { words: SmallVec::new() }
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = Self::new();
        s.insert(v);
        s
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut words: SmallVec<[u64; 2]> = SmallVec::from_elem(u64::MAX, n / BITS);
        if n % BITS != 0 {
            words.push((1u64 << (n % BITS)) - 1);
        }
        Self { words }
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self::new();
        if mask != 0 {
            s.words.push(mask);
        }
        s
    }

    /// The set as a single word, if every element is below 64.
    pub fn as_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, v: usize) -> bool {
        let (w, b) = (v / BITS, v % BITS);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let (w, b) = (v / BITS, v % BITS);
        if w >= self.words.len() {
            return false;
        }
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        self.trim();
        present
    }

    pub fn contains(&self, v: usize) -> bool {
        let (w, b) = (v / BITS, v % BITS);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn last(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * BITS + (BITS - 1 - last.leading_zeros() as usize))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.len() <= other.words.len() && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &Self) -> bool {
        other.is_subset(self)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() { (self, other) } else { (other, self) };
        let mut out = long.clone();
        for (a, b) in out.words.iter_mut().zip(&short.words) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Self { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() };
        out.trim();
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        out.trim();
        out
    }

    pub fn union_with(&mut self, other: &Self) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        self.trim();
    }

    /// Ascending iterator over the elements.
    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, index: 0, current: self.words.first().copied().unwrap_or(0) }
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let n = self.words.len().max(other.words.len());
            for i in 0..n {
                let a = self.words.get(i).copied().unwrap_or(0);
                let b = other.words.get(i).copied().unwrap_or(0);
                let x = a ^ b;
                if x != 0 {
                    let low = x & x.wrapping_neg();
                    return if a & low != 0 { Ordering::Less } else { Ordering::Greater };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = Self::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(items: [usize; N]) -> Self {
        items.into_iter().collect()
    }
}

impl From<&[usize]> for VertexSet {
    fn from(items: &[usize]) -> Self {
        items.iter().copied().collect()
    }
}

impl Extend<usize> for VertexSet {
    fn extend<T: IntoIterator<Item = usize>>(&mut self, iter: T) {
        for v in iter {
            self.insert(v);
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[derive(Debug, Clone)]
pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let b = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * BITS + b);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Calls `visit` on every subset of `set` whose size lies in `sizes`, in
/// increasing order of the bitmask over the positions of `set`.
pub(crate) fn for_each_subset(
    set: &VertexSet,
    sizes: core::ops::RangeInclusive<usize>,
    mut visit: impl FnMut(VertexSet),
) {
    let elems: SmallVec<[usize; 8]> = set.iter().collect();
    let k = elems.len();
    assert!(k < 64, "subset enumeration over {k} elements");
    for mask in 0u64..(1u64 << k) {
        let c = mask.count_ones() as usize;
        if !sizes.contains(&c) {
            continue;
        }
        let mut s = VertexSet::new();
        let mut m = mask;
        while m != 0 {
            s.insert(elems[m.trailing_zeros() as usize]);
            m &= m - 1;
        }
        visit(s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn basic_ops() {
        let a = VertexSet::from([0, 3, 70]);
        assert_eq!(a.len(), 3);
        assert!(a.contains(70) && !a.contains(69));
        assert_eq!(a.last(), Some(70));
        assert_eq!(a.iter().collect::<Vec<_>>(), [0, 3, 70]);
        let b = VertexSet::from([3]);
        assert!(b.is_subset(&a));
        assert_eq!(a.difference(&VertexSet::from([70])), VertexSet::from([0, 3]));
        assert_eq!(a.difference(&VertexSet::from([70])).as_mask(), Some(0b1001));
        let mut c = a.clone();
        c.remove(70);
        assert_eq!(c, VertexSet::from([0, 3]));
        assert_eq!(VertexSet::full(65).len(), 65);
    }

    #[test]
    fn canonical_order() {
        let mut v = [
            VertexSet::from([1, 2]),
            VertexSet::from([0, 3]),
            VertexSet::from([5]),
            VertexSet::from([0, 2]),
            VertexSet::new(),
            VertexSet::from([0, 1, 2]),
        ];
        v.sort();
        let want = [
            VertexSet::new(),
            VertexSet::from([5]),
            VertexSet::from([0, 2]),
            VertexSet::from([0, 3]),
            VertexSet::from([1, 2]),
            VertexSet::from([0, 1, 2]),
        ];
        assert_eq!(v, want);
    }

    #[test]
    fn subsets_visited() {
        let mut seen = Vec::new();
        for_each_subset(&VertexSet::from([2, 5, 9]), 1..=2, |s| seen.push(s));
        assert_eq!(seen.len(), 6);
    }
}
