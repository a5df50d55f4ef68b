//! Exact hard-core model engine.
//!
//! Every quantity reduces to the independence polynomial `c_k` (number of
//! independent sets of size `k`), possibly with a forced set of vertices.
//! For `p = a/b` the weight of a set of size `k` among `m` vertices is
//! `a^k (b-a)^(m-k) / b^m`, so probabilities become ratios of integers and
//! comparisons are cross-multiplied without ever leaving `BigUint`.

mod enumerate;
mod mc;
mod poly;

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Pow, Signed, Zero};

use crate::rational::{self, Rational};
use crate::{Error, Hypergraph, Limits, Result, VertexSet};

pub(crate) use enumerate::SupersetTable;
pub use mc::{mc_prob_independent, McEstimate};
pub(crate) use poly::Counter;

/// `Z_λ(H) = Σ_{I ∈ I(H)} λ^|I|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionEvaluation {
    pub z: Rational,
    pub n: usize,
    pub lambda: Rational,
}

/// A hypergraph re-indexed onto single-word masks over a chosen ground set.
#[derive(Debug, Clone)]
pub(crate) struct Compact {
    pub verts: Vec<usize>,
    pub ground: u64,
    /// Edges of `H` contained in the ground set.
    pub edges: Vec<u64>,
}

impl Compact {
    pub(crate) fn new(h: &Hypergraph, ground: &VertexSet) -> Result<Self> {
        let verts: Vec<usize> = ground.iter().collect();
        if verts.len() > Limits::HARD_CEILING {
            return Err(Error::Guard { what: "single-word engine", n: verts.len(), limit: Limits::HARD_CEILING });
        }
        let mut c = Self { ground: full_mask(verts.len()), verts, edges: Vec::new() };
        c.edges = h.edges().iter().filter(|e| e.is_subset(ground)).map(|e| c.mask(e)).collect();
        Ok(c)
    }

    pub(crate) fn k(&self) -> usize {
        self.verts.len()
    }

    /// Mask of `set ∩ ground`.
    pub(crate) fn mask(&self, set: &VertexSet) -> u64 {
        let mut m = 0;
        for v in set {
            if let Ok(i) = self.verts.binary_search(&v) {
                m |= 1 << i;
            }
        }
        m
    }

    pub(crate) fn set(&self, mask: u64) -> VertexSet {
        let mut s = VertexSet::new();
        let mut m = mask;
        while m != 0 {
            s.insert(self.verts[m.trailing_zeros() as usize]);
            m &= m - 1;
        }
        s
    }
}

pub(crate) fn full_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Integer weights `W_k = a^k (b-a)^(m-k)` for `p = a/b`; dividing a
/// weighted count by `b^m` gives a probability.
#[derive(Debug, Clone)]
pub(crate) struct Weigher {
    b: BigUint,
    m: usize,
    w: Vec<BigUint>,
}

impl Weigher {
    pub(crate) fn new(p: &Rational, m: usize) -> Self {
        let a = rational::numer_u(p);
        let b = rational::denom_u(p);
        let c = &b - &a;
        let mut w = alloc::vec![BigUint::zero(); m + 1];
        let mut pa = BigUint::one();
        for (k, slot) in w.iter_mut().enumerate() {
            *slot = &pa * Pow::pow(&c, (m - k) as u64);
            pa *= &a;
        }
        Self { b, m, w }
    }

    /// `Σ_k counts[k] · W_{k + shift}`.
    pub(crate) fn eval(&self, counts: &[u128], shift: usize) -> BigUint {
        let mut acc = BigUint::zero();
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                acc += &self.w[k + shift] * BigUint::from(c);
            }
        }
        acc
    }

    pub(crate) fn eval_u32(&self, counts: &[u32], shift: usize) -> BigUint {
        let mut acc = BigUint::zero();
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                acc += &self.w[k + shift] * c;
            }
        }
        acc
    }

    /// Converts a weighted count into the probability it represents.
    pub(crate) fn probability(&self, weighted: BigUint) -> Rational {
        rational::from_biguint(weighted, Pow::pow(&self.b, self.m as u64))
    }
}

/// Entry point for exact computations; carries the size guards.
#[derive(Debug, Clone, Copy, Default)]
pub struct Engine {
    pub limits: Limits,
}

impl Engine {
    pub fn new(limits: Limits) -> Self {
        Self { limits }
    }

    fn guard(&self, what: &'static str, n: usize, limit: usize) -> Result<()> {
        if n > limit.min(Limits::HARD_CEILING) {
            return Err(Error::Guard { what, n, limit });
        }
        Ok(())
    }

    /// All independent sets of `H`, in canonical order.
    pub fn independent_sets(&self, h: &Hypergraph) -> Result<Vec<VertexSet>> {
        self.guard("independent set enumeration", h.vertex_count(), self.limits.enumerate_n)?;
        let c = Compact::new(h, h.ground())?;
        let mut out: Vec<VertexSet> =
            enumerate::independent_masks(c.k(), &c.edges).into_iter().map(|m| c.set(m)).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// `c_k` = number of independent sets of size `k` in `H`.
    pub fn independence_counts(&self, h: &Hypergraph) -> Result<Vec<u128>> {
        self.forced_counts(h, &VertexSet::new(), h.ground())
    }

    /// Counts `X ⊆ ground \ forced` with `forced ∪ X ∈ I(H)`, by `|X|`.
    /// The result has length `|ground \ forced| + 1`.
    pub fn forced_counts(&self, h: &Hypergraph, forced: &VertexSet, ground: &VertexSet) -> Result<Vec<u128>> {
        let free = ground.difference(forced);
        self.guard("partition function", free.len(), self.limits.exact_n)?;
        let universe = free.union(forced);
        if !h.is_independent(forced) {
            return Ok(alloc::vec![0; free.len() + 1]);
        }
        let c = Compact::new(&Hypergraph::empty(0), &free)?;
        let edges: Vec<u64> =
            h.edges().iter().filter(|e| e.is_subset(&universe)).map(|e| c.mask(&e.difference(forced))).collect();
        Ok(Counter::default().count(c.ground, edges))
    }

    pub fn partition_function(&self, h: &Hypergraph, lambda: &Rational) -> Result<PartitionEvaluation> {
        if lambda.is_negative() {
            return Err(Error::param("lambda", "must be nonnegative"));
        }
        let counts = self.independence_counts(h)?;
        let n = h.vertex_count();
        // Σ c_k u^k v^(n-k) / v^n for λ = u/v.
        let u = rational::numer_u(lambda);
        let v = rational::denom_u(lambda);
        let mut acc = BigUint::zero();
        let mut pu = BigUint::one();
        for (k, &ck) in counts.iter().enumerate() {
            if ck != 0 {
                acc += &pu * Pow::pow(&v, (n - k) as u64) * BigUint::from(ck);
            }
            pu *= &u;
        }
        let z = rational::from_biguint(acc, Pow::pow(&v, n as u64));
        Ok(PartitionEvaluation { z, n, lambda: lambda.clone() })
    }

    /// `Pr(V_p ∈ I(H))`.
    pub fn prob_independent(&self, h: &Hypergraph, p: &Rational) -> Result<Rational> {
        check_p_closed(p)?;
        if p.is_one() {
            if h.is_empty() {
                return Ok(Rational::one());
            }
            return Err(Error::param("p", "p = 1 is only allowed for edgeless hypergraphs"));
        }
        let counts = self.independence_counts(h)?;
        let w = Weigher::new(p, h.vertex_count());
        Ok(w.probability(w.eval(&counts, 0)))
    }

    /// `Pr(forced ∪ X_p ∈ I(H))` where `X_p` is a `p`-random subset of
    /// `ground \ forced`.
    pub fn prob_with_forced(
        &self,
        h: &Hypergraph,
        p: &Rational,
        forced: &VertexSet,
        ground: &VertexSet,
    ) -> Result<Rational> {
        check_p_closed(p)?;
        let counts = self.forced_counts(h, forced, ground)?;
        let w = Weigher::new(p, counts.len() - 1);
        Ok(w.probability(w.eval(&counts, 0)))
    }

    /// `Pr(L ⊆ V_p | V_p ∈ I(H))`.
    pub fn conditional_subset_prob(&self, h: &Hypergraph, p: &Rational, l: &VertexSet) -> Result<Rational> {
        check_p_open(p)?;
        h.check_subset_of_ground(l)?;
        let w = Weigher::new(p, h.vertex_count());
        let den = w.eval(&self.independence_counts(h)?, 0);
        let num = w.eval(&self.forced_counts(h, l, h.ground())?, l.len());
        Ok(rational::from_biguint(num, den))
    }

    /// `E[|V_p| | V_p ∈ I(H)]`.
    pub fn conditional_expected_size(&self, h: &Hypergraph, p: &Rational) -> Result<Rational> {
        check_p_open(p)?;
        let w = Weigher::new(p, h.vertex_count());
        let counts = self.independence_counts(h)?;
        let den = w.eval(&counts, 0);
        // Σ_v Pr(v ∈ V_p, indep) = Σ_k k c_k W_k.
        let sized: Vec<u128> = counts.iter().enumerate().map(|(k, c)| c * k as u128).collect();
        Ok(rational::from_biguint(w.eval(&sized, 0), den))
    }
}

fn check_p_closed(p: &Rational) -> Result<()> {
    if !rational::is_in_unit_interval(p) {
        return Err(Error::param("p", "must lie in [0, 1]"));
    }
    Ok(())
}

fn check_p_open(p: &Rational) -> Result<()> {
    if !p.is_positive() || *p >= Rational::one() {
        return Err(Error::param("p", "must lie in (0, 1)"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn h(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::from_lists(n, edges.iter().copied()).unwrap()
    }

    fn star() -> Hypergraph {
        h(4, &[&[0, 1], &[0, 2], &[0, 3]])
    }

    #[test]
    fn enumeration_examples() {
        let e = Engine::default();
        let sets = e.independent_sets(&h(2, &[&[0, 1]])).unwrap();
        assert_eq!(sets, [VertexSet::new(), VertexSet::from([0]), VertexSet::from([1])]);
        assert_eq!(e.independent_sets(&Hypergraph::empty(3)).unwrap().len(), 8);
    }

    #[test]
    fn partition_examples() {
        let e = Engine::default();
        let g = h(2, &[&[0, 1]]);
        assert_eq!(e.partition_function(&g, &int(1)).unwrap().z, int(3));
        assert_eq!(e.partition_function(&g, &int(2)).unwrap().z, int(5));
        let z = e.partition_function(&Hypergraph::empty(3), &ratio(1, 2)).unwrap().z;
        assert_eq!(z, ratio(27, 8));
        assert!(e.partition_function(&g, &ratio(-1, 2)).is_err());
    }

    #[test]
    fn probability_examples() {
        let e = Engine::default();
        let g = h(2, &[&[0, 1]]);
        assert_eq!(e.prob_independent(&g, &ratio(1, 2)).unwrap(), ratio(3, 4));
        assert_eq!(e.prob_independent(&g, &ratio(2, 3)).unwrap(), ratio(5, 9));
        assert_eq!(e.prob_independent(&Hypergraph::empty(4), &ratio(1, 3)).unwrap(), int(1));
        assert!(e.prob_independent(&g, &int(1)).is_err());
        assert_eq!(e.prob_independent(&Hypergraph::empty(2), &int(1)).unwrap(), int(1));
    }

    #[test]
    fn conditional_examples() {
        let e = Engine::default();
        let half = ratio(1, 2);
        let g = h(2, &[&[0, 1]]);
        let zero = VertexSet::from([0]);
        assert_eq!(e.conditional_subset_prob(&g, &half, &zero).unwrap(), ratio(1, 3));
        let l = VertexSet::from([0, 2]);
        assert_eq!(e.conditional_subset_prob(&Hypergraph::empty(3), &half, &l).unwrap(), ratio(1, 4));
        assert_eq!(e.conditional_subset_prob(&star(), &half, &zero).unwrap(), ratio(1, 9));
        assert_eq!(e.conditional_expected_size(&g, &half).unwrap(), ratio(2, 3));
        assert_eq!(e.conditional_expected_size(&Hypergraph::empty(5), &ratio(1, 3)).unwrap(), ratio(5, 3));
        let singletons = h(3, &[&[0], &[1], &[2]]);
        assert_eq!(e.conditional_expected_size(&singletons, &half).unwrap(), int(0));
    }

    #[test]
    fn forced_probability() {
        let e = Engine::default();
        // Pr({0} ∪ X ∈ I(star)) with X ⊆ {1,2,3}: only X = ∅.
        let p = e.prob_with_forced(&star(), &ratio(1, 2), &VertexSet::from([0]), &VertexSet::full(4));
        assert_eq!(p.unwrap(), ratio(1, 8));
    }

    #[test]
    fn guard_fires() {
        let e = Engine::new(Limits::uniform(4));
        assert!(matches!(e.independent_sets(&Hypergraph::empty(5)), Err(Error::Guard { .. })));
    }
}
