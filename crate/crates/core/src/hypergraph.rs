use alloc::vec::Vec;
use core::fmt;

use hashbrown::{HashMap, HashSet};
use num_traits::Zero;

use crate::rational::{self, Rational};
use crate::vertex_set::for_each_subset;
use crate::{Error, Result, VertexSet};

/// A finite hypergraph in canonical form.
///
/// The vertex set is `ground`, a subset of `{0, ..., n-1}`; it is the full
/// range unless the hypergraph came out of [`Hypergraph::restrict`], which
/// keeps global indices. Edges are distinct, nonempty, contained in the
/// ground set and sorted by the canonical [`VertexSet`] order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    ground: VertexSet,
    edges: Vec<VertexSet>,
}

/// Result of [`Hypergraph::strip_link`].
///
/// The empty set cannot be an edge of a [`Hypergraph`], so it is reported
/// separately through `contains_empty`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripLink {
    pub hypergraph: Hypergraph,
    pub contains_empty: bool,
}

impl Hypergraph {
    /// Edgeless hypergraph on `{0, ..., n-1}`.
    pub fn empty(n: usize) -> Self {
        Self { n, ground: VertexSet::full(n), edges: Vec::new() }
    }

    pub fn new(n: usize, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        Self::with_ground(n, VertexSet::full(n), edges)
    }

    /// Convenience constructor from index lists.
    pub fn from_lists<E: AsRef<[usize]>>(n: usize, edges: impl IntoIterator<Item = E>) -> Result<Self> {
        Self::new(n, edges.into_iter().map(|e| VertexSet::from(e.as_ref())))
    }

    pub fn with_ground(n: usize, ground: VertexSet, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        check_range(&ground, n)?;
        let mut edges: Vec<VertexSet> = edges.into_iter().collect();
        for e in &edges {
            if e.is_empty() {
                return Err(Error::EmptyEdge);
            }
            check_range(e, n)?;
            if let Some(v) = e.difference(&ground).first() {
                return Err(Error::VertexOutsideGround { vertex: v });
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self { n, ground, edges })
    }

    /// Builds from edges already known to be valid; sorts and dedupes.
    pub(crate) fn from_trusted(n: usize, ground: VertexSet, mut edges: Vec<VertexSet>) -> Self {
        debug_assert!(edges.iter().all(|e| !e.is_empty() && e.is_subset(&ground)));
        edges.sort_unstable();
        edges.dedup();
        Self { n, ground, edges }
    }

    /// Ambient index range `{0, ..., n-1}`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The vertex set `V(H)`.
    pub fn ground(&self) -> &VertexSet {
        &self.ground
    }

    pub fn vertex_count(&self) -> usize {
        self.ground.len()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    /// `e(H)`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, e: &VertexSet) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// Largest edge size (0 for the edgeless hypergraph).
    pub fn rank(&self) -> usize {
        self.edges.last().map_or(0, VertexSet::len)
    }

    /// `Some(r)` when every edge has size `r`; `None` when sizes differ or
    /// there are no edges.
    pub fn uniformity(&self) -> Option<usize> {
        let first = self.edges.first()?.len();
        (self.rank() == first).then_some(first)
    }

    /// Number of edges of each size, indexed by size.
    pub fn size_profile(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.rank() + 1];
        for e in &self.edges {
            counts[e.len()] += 1;
        }
        counts
    }

    /// `w_p(H) = sum of p^|E|`.
    pub fn weight(&self, p: &Rational) -> Result<Rational> {
        if !rational::is_in_unit_interval(p) {
            return Err(Error::param("p", "must lie in [0, 1]"));
        }
        Ok(weight_of_profile(&self.size_profile(), p))
    }

    /// `∂_L H = {E \ L : L ⊆ E ∈ H}`.
    ///
    /// When `L` is itself an edge the link contains the empty set, which a
    /// hypergraph cannot hold; that case is reported as [`Error::EmptyEdge`].
    pub fn link(&self, l: &VertexSet) -> Result<Hypergraph> {
        check_range(l, self.n)?;
        let mut out = Vec::new();
        for e in self.edges.iter().filter(|e| l.is_subset(e)) {
            let rest = e.difference(l);
            if rest.is_empty() {
                return Err(Error::EmptyEdge);
            }
            out.push(rest);
        }
        Ok(Self::from_trusted(self.n, self.ground.clone(), out))
    }

    /// `∂*_L H = {E \ L : E ∈ H}`, with the empty set flagged rather than stored.
    pub fn strip_link(&self, l: &VertexSet) -> Result<StripLink> {
        check_range(l, self.n)?;
        let mut contains_empty = false;
        let mut out = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let rest = e.difference(l);
            if rest.is_empty() {
                contains_empty = true;
            } else {
                out.push(rest);
            }
        }
        Ok(StripLink { hypergraph: Self::from_trusted(self.n, self.ground.clone(), out), contains_empty })
    }

    /// Induced subhypergraph `H[C]`; the ground set becomes `V(H) ∩ C`.
    pub fn restrict(&self, c: &VertexSet) -> Hypergraph {
        let ground = self.ground.intersection(c);
        let edges = self.edges.iter().filter(|e| e.is_subset(c)).cloned().collect();
        Self { n: self.n, ground, edges }
    }

    /// Edges with `lo <= |E| <= hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Hypergraph {
        let edges = self.edges.iter().filter(|e| (lo..=hi).contains(&e.len())).cloned().collect();
        Self { n: self.n, ground: self.ground.clone(), edges }
    }

    /// `H^s`.
    pub fn layer(&self, s: usize) -> Hypergraph {
        self.slice(s, s)
    }

    /// Does `self` cover `other`, i.e. does every edge of `other` contain an
    /// edge of `self`?
    pub fn covers(&self, other: &Hypergraph) -> bool {
        if other.is_empty() {
            return true;
        }
        if self.is_empty() {
            return false;
        }
        let index: HashSet<&VertexSet> = self.edges.iter().collect();
        let min_size = self.edges[0].len();
        let max_size = self.rank();
        other.edges.iter().all(|f| {
            let k = f.len();
            if k < min_size {
                return false;
            }
            if k < 20 && (1usize << k) < self.edges.len() {
                let mut found = false;
                for_each_subset(f, min_size..=max_size.min(k), |s| {
                    found = found || index.contains(&s);
                });
                found
            } else {
                self.edges.iter().take_while(|e| e.len() <= k).any(|e| e.is_subset(f))
            }
        })
    }

    /// Inclusion-minimal edges.
    pub fn minimal_elements(&self) -> Hypergraph {
        let mut kept: Vec<VertexSet> = Vec::new();
        let mut index: HashSet<VertexSet> = HashSet::new();
        for e in &self.edges {
            if !has_proper_subset_in(e, &kept, &index) {
                index.insert(e.clone());
                kept.push(e.clone());
            }
        }
        Self { n: self.n, ground: self.ground.clone(), edges: kept }
    }

    pub fn is_antichain(&self) -> bool {
        let index: HashSet<VertexSet> = self.edges.iter().cloned().collect();
        let mut smaller: Vec<VertexSet> = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            // Only strictly smaller edges can be proper subsets.
            while smaller.len() < i && self.edges[smaller.len()].len() < e.len() {
                smaller.push(self.edges[smaller.len()].clone());
            }
            if has_proper_subset_in(e, &smaller, &index) {
                return false;
            }
        }
        true
    }

    /// `deg_H(L)`.
    pub fn degree(&self, l: &VertexSet) -> usize {
        self.edges.iter().filter(|e| l.is_subset(e)).count()
    }

    /// `Δ_ℓ(H)`: the maximum degree over `ℓ`-sets.
    pub fn max_degree(&self, ell: usize) -> usize {
        if ell == 0 {
            return self.edges.len();
        }
        let mut counts: HashMap<VertexSet, usize> = HashMap::new();
        let mut best = 0;
        for e in self.edges.iter().filter(|e| e.len() >= ell) {
            if e.len() == ell {
                let c = counts.entry(e.clone()).or_default();
                *c += 1;
                best = best.max(*c);
                continue;
            }
            for_each_subset(e, ell..=ell, |t| {
                let c = counts.entry(t).or_default();
                *c += 1;
                best = best.max(*c);
            });
        }
        best
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        let k = set.len();
        !self.edges.iter().take_while(|e| e.len() <= k).any(|e| e.is_subset(set))
    }

    /// `{v ∈ V : {v} ∉ H}`.
    pub fn unblocked_vertices(&self) -> VertexSet {
        let mut out = self.ground.clone();
        for e in self.edges.iter().take_while(|e| e.len() == 1) {
            out.difference_with(e);
        }
        out
    }

    /// `H ∪ extra`.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = VertexSet>) -> Result<Hypergraph> {
        Self::with_ground(self.n, self.ground.clone(), self.edges.iter().cloned().chain(extra))
    }

    /// Checks that every element of `set` lies in the ground set.
    pub fn check_subset_of_ground(&self, set: &VertexSet) -> Result<()> {
        check_range(set, self.n)?;
        match set.difference(&self.ground).first() {
            Some(v) => Err(Error::VertexOutsideGround { vertex: v }),
            None => Ok(()),
        }
    }
}

pub(crate) fn check_range(set: &VertexSet, n: usize) -> Result<()> {
    match set.last() {
        Some(v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
        _ => Ok(()),
    }
}

pub(crate) fn weight_of_profile(profile: &[usize], p: &Rational) -> Rational {
    let mut total = Rational::zero();
    let mut power = Rational::from_integer(1.into());
    for (s, &count) in profile.iter().enumerate() {
        if s > 0 {
            power *= p;
        }
        if count > 0 {
            total += &power * rational::int(count);
        }
    }
    total
}

/// Does some edge in `smaller` (all of size at most `|e|`) sit strictly inside `e`?
fn has_proper_subset_in(e: &VertexSet, smaller: &[VertexSet], index: &HashSet<VertexSet>) -> bool {
    let k = e.len();
    if k <= 1 || smaller.is_empty() {
        return false;
    }
    if k < 20 && (1usize << k) < smaller.len() {
        let mut found = false;
        for_each_subset(e, 1..=k - 1, |s| {
            found = found || index.contains(&s);
        });
        found
    } else {
        smaller.iter().any(|s| s.len() < k && s.is_subset(e))
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(n={}, ", self.n)?;
        if self.ground != VertexSet::full(self.n) {
            write!(f, "V={}, ", self.ground)?;
        }
        f.debug_list().entries(self.edges.iter().map(|e| alloc::format!("{e}"))).finish()?;
        f.write_str(")")
    }
}
