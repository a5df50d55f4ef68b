//! Probability bounds around covers: Harris, Janson, the LYMB inequality,
//! the constructive cover and the key inequality for decreasing families.
//!
//! Derivation checks that run the container builders (balanced
//! supersaturation, the efficient and packaged conclusions, the
//! interpolating-to-cover cross-check) live in [`derivations`].

pub mod derivations;

use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::certified::{self, Decision, PowOrdering};
use crate::exact::Engine;
use crate::rational::{self, Rational};
use crate::vertex_set::for_each_subset;
use crate::{Error, Hypergraph, Result, VertexSet};

pub use derivations::{
    check_efficient_conclusion, check_packaged_conclusion, crosscheck_hcl4_implies_hcl1, efficient_assumptions_hold,
    supersaturation_holds, EfficientParams,
};

/// `w_p(G)` together with the product `Π_{A∈G}(1 - p^{|A|})`.
///
/// If `G` covers `H` then `Pr(V_p ∈ I(H)) ≥ product ≥ exp(-2w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarrisBound {
    pub weight: Rational,
    pub product: Rational,
}

pub fn harris_bound(g: &Hypergraph, p: &Rational) -> Result<HarrisBound> {
    if p.is_negative() || *p >= rational::ratio(1, 2) {
        return Err(Error::param("p", "the Harris bound needs 0 ≤ p < 1/2"));
    }
    let mut product = Rational::one();
    for e in g.edges() {
        product *= Rational::one() - rational::pow(p, e.len());
    }
    Ok(HarrisBound { weight: g.weight(p)?, product })
}

/// Checks `Pr(V_p ∈ I(H)) ≥ Π_{A∈G}(1 - p^{|A|})` exactly, for `G` covering `H`.
pub fn harris_holds(h: &Hypergraph, g: &Hypergraph, p: &Rational, engine: &Engine) -> Result<bool> {
    if !g.covers(h) {
        return Err(Error::param("G", "does not cover H"));
    }
    let bound = harris_bound(g, p)?;
    Ok(engine.prob_independent(h, p)? >= bound.product)
}

/// Janson's inequality for `Pr(C_p ∈ I(G))`.
///
/// `delta_star` sums `p^{|A∪B|}` over ordered pairs `(A, B)` of intersecting
/// edges, the diagonal included. `upper` is a rational upper bound on
/// `exp(-mu²/(2 delta_star))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JansonBound {
    pub mu: Rational,
    pub delta_star: Rational,
    pub exponent: Rational,
    pub upper: Rational,
}

impl JansonBound {
    pub fn bound_f64(&self) -> f64 {
        rational::to_f64(&self.upper)
    }

    /// Certifies `prob ≤ exp(-mu²/(2 delta_star))`.
    pub fn dominates(&self, prob: &Rational) -> Decision {
        certified::le_exp(prob, &-self.exponent.clone())
    }
}

pub fn janson_bound(g: &Hypergraph, p: &Rational) -> Result<JansonBound> {
    if !rational::is_in_unit_interval(p) {
        return Err(Error::param("p", "must lie in [0, 1]"));
    }
    let edges = g.edges();
    let mu = g.weight(p)?;
    let mut delta_star = Rational::zero();
    for a in edges {
        for b in edges.iter().filter(|b| a.intersects(b)) {
            delta_star += rational::pow(p, a.union(b).len());
        }
    }
    if mu.is_zero() {
        let one = Rational::one();
        return Ok(JansonBound { mu, delta_star, exponent: Rational::zero(), upper: one });
    }
    let exponent = &mu * &mu / (rational::int(2) * &delta_star);
    let upper = certified::exp(&-exponent.clone(), certified::PRECISIONS[0]).hi;
    Ok(JansonBound { mu, delta_star, exponent, upper })
}

/// `Σ_{A∈A} 1/C(|X|, |A|)` over the ground set `X` of an antichain.
pub fn lymb_sum(a: &Hypergraph) -> Result<Rational> {
    if !a.is_antichain() {
        return Err(Error::NotAntichain);
    }
    let x = a.vertex_count();
    let mut by_size: HashMap<usize, usize> = HashMap::new();
    for e in a.edges() {
        *by_size.entry(e.len()).or_default() += 1;
    }
    let mut sum = Rational::zero();
    for (size, count) in by_size {
        let binom = rational::binomial(x, size);
        sum += rational::from_biguint(BigUint::from(count), binom);
    }
    Ok(sum)
}

/// `λ_ℓ = 4^{-min(ℓ, r-ℓ)}`.
pub fn lambda(ell: usize, r: usize) -> Rational {
    let e = ell.min(r - ell);
    Rational::new(1.into(), num_bigint::BigInt::from(4u8).pow(e as u32))
}

/// The degree caps `⌊λ_ℓ C(r,ℓ)^{-1} p^{ℓ-r}⌋` for `ℓ = 0..=r` (entry 0 unused).
pub fn degree_caps(r: usize, p: &Rational) -> Vec<u64> {
    let inv = p.recip();
    (0..=r)
        .map(|ell| {
            if ell == 0 {
                return 0;
            }
            let cap = lambda(ell, r) / Rational::from_integer(rational::binomial(r, ell).into())
                * rational::pow(&inv, r - ell);
            rational::floor_u64_saturating(&cap)
        })
        .collect()
}

/// Output of [`construct_cover`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverConstruction {
    /// The minimal saturated sets; covers `H`.
    pub g: Hypergraph,
    /// The greedy degree-capped subgraph.
    pub h_prime: Hypergraph,
    pub caps: Vec<u64>,
}

impl CoverConstruction {
    /// `μ = e(H')p^r`, the Janson mean of `H'`.
    pub fn mu(&self, p: &Rational, r: usize) -> Rational {
        rational::int(self.h_prime.edge_count()) * rational::pow(p, r)
    }
}

/// Builds a cover `G` of an `r`-uniform `H` with
/// `Pr(V_p ∈ I(H)) ≤ exp(-w_{p/(4r²)}(G)/8)`.
///
/// `H'` is grown greedily in canonical edge order, keeping every
/// `Δ_ℓ(H') ≤ λ_ℓ C(r,ℓ)^{-1} p^{ℓ-r}`; `G` is the set of minimal `T` whose
/// degree in `H'` meets the cap. Returns `Err(Internal)` if the cover or
/// `w_{p/(4r²)}(G) ≤ 2e(H')p^r` fails.
pub fn construct_cover(h: &Hypergraph, p: &Rational) -> Result<CoverConstruction> {
    if h.is_empty() {
        if !p.is_positive() {
            return Err(Error::param("p", "must be positive"));
        }
        let g = Hypergraph::with_ground(h.n(), h.ground().clone(), [])?;
        return Ok(CoverConstruction { g: g.clone(), h_prime: g, caps: Vec::new() });
    }
    let r = h.uniformity().ok_or(Error::NotUniform)?;
    if !p.is_positive() || *p >= Rational::new(1.into(), (4 * r as i64).into()) {
        return Err(Error::param("p", "the constructive cover needs 0 < p < 1/(4r)"));
    }
    let caps = degree_caps(r, p);
    let mut deg: HashMap<VertexSet, u64> = HashMap::new();
    let mut kept = Vec::new();
    for e in h.edges() {
        let mut fits = true;
        for_each_subset(e, 1..=r, |t| {
            fits = fits && deg.get(&t).copied().unwrap_or(0) < caps[t.len()];
        });
        if fits {
            for_each_subset(e, 1..=r, |t| *deg.entry(t).or_default() += 1);
            kept.push(e.clone());
        }
    }
    let saturated: Vec<VertexSet> = deg.into_iter().filter(|(t, d)| *d == caps[t.len()]).map(|(t, _)| t).collect();
    let g = Hypergraph::with_ground(h.n(), h.ground().clone(), saturated)?.minimal_elements();
    let h_prime = Hypergraph::with_ground(h.n(), h.ground().clone(), kept)?;
    if !g.covers(h) {
        return Err(Error::Internal("constructed G does not cover H".into()));
    }
    let out = CoverConstruction { g, h_prime, caps };
    let q = p / rational::int(4 * r * r);
    if out.g.weight(&q)? > rational::int(2) * out.mu(p, r) {
        return Err(Error::Internal("w_{p/(4r²)}(G) exceeds 2e(H')p^r".into()));
    }
    Ok(out)
}

/// Certifies `Pr(V_p ∈ I(H)) ≤ exp(-w_{p/(4r²)}(G)/8)` for a constructed cover.
pub fn cover_bound_holds(h: &Hypergraph, p: &Rational, cover: &CoverConstruction, engine: &Engine) -> Result<Decision> {
    let r = h.uniformity().unwrap_or(1);
    let prob = engine.prob_independent(h, p)?;
    let w = cover.g.weight(&(p / rational::int(4 * r * r)))?;
    Ok(certified::le_exp(&prob, &(-w / rational::int(8))))
}

/// The key inequality `Pr(C_p ∈ I) ≥ (1-p)^x` with `x = |C| - E[|C_p| | C_p ∈ I]/p`,
/// for the decreasing family `I = I(H)` on `C = V(H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyInequality {
    pub prob: Rational,
    pub expected_size: Rational,
    pub exponent: Rational,
    pub ordering: PowOrdering,
}

impl KeyInequality {
    pub fn holds(&self) -> bool {
        self.ordering.is_ge()
    }

    pub fn is_equality(&self) -> bool {
        self.ordering == PowOrdering::Equal
    }
}

pub fn key_inequality_check(h: &Hypergraph, p: &Rational, engine: &Engine) -> Result<KeyInequality> {
    if !p.is_positive() || *p >= Rational::one() {
        return Err(Error::param("p", "must lie in (0, 1)"));
    }
    let prob = engine.prob_independent(h, p)?;
    let expected_size = engine.conditional_expected_size(h, p)?;
    let exponent = rational::int(h.vertex_count()) - &expected_size / p;
    if exponent.is_negative() {
        return Err(Error::Internal("negative exponent in the key inequality".into()));
    }
    let ordering = certified::compare_pow(&prob, &(Rational::one() - p), &exponent)?;
    Ok(KeyInequality { prob, expected_size, exponent, ordering })
}

/// `Pr(C_p ∈ I(G)) ≤ janson.upper`, exactly, where feasible.
pub fn janson_holds(g: &Hypergraph, p: &Rational, engine: &Engine) -> Result<bool> {
    let bound = janson_bound(g, p)?;
    let prob = engine.prob_independent(g, p)?;
    Ok(bound.dominates(&prob).holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::vec;

    fn e() -> Engine {
        Engine::default()
    }

    #[test]
    fn harris_examples() {
        let third = ratio(1, 3);
        let b = harris_bound(&Hypergraph::empty(3), &third).unwrap();
        assert_eq!(b.product, int(1));
        let edge = Hypergraph::from_lists(2, [[0, 1]]).unwrap();
        assert_eq!(harris_bound(&edge, &third).unwrap().product, ratio(8, 9));
        assert!(harris_holds(&edge, &edge, &third, &e()).unwrap());
        let singles = Hypergraph::from_lists(2, [[0], [1]]).unwrap();
        assert_eq!(harris_bound(&singles, &third).unwrap().product, ratio(4, 9));
        assert_eq!(e().prob_independent(&singles, &third).unwrap(), ratio(4, 9));
        assert!(harris_bound(&edge, &ratio(1, 2)).is_err());
    }

    #[test]
    fn janson_examples() {
        let edge = Hypergraph::from_lists(2, [[0, 1]]).unwrap();
        let j = janson_bound(&edge, &ratio(1, 2)).unwrap();
        assert_eq!((j.mu.clone(), j.delta_star.clone()), (ratio(1, 4), ratio(1, 4)));
        assert_eq!(j.exponent, ratio(1, 8));
        assert!((j.bound_f64() - 0.8824969025845955).abs() < 1e-12);
        assert!(j.dominates(&ratio(3, 4)).holds());
        let singles = Hypergraph::from_lists(2, [[0], [1]]).unwrap();
        let j = janson_bound(&singles, &ratio(1, 3)).unwrap();
        assert_eq!((j.mu.clone(), j.delta_star.clone()), (ratio(2, 3), ratio(2, 3)));
        assert!(janson_holds(&singles, &ratio(1, 3), &e()).unwrap());
        assert_eq!(janson_bound(&Hypergraph::empty(2), &ratio(1, 2)).unwrap().upper, int(1));
    }

    #[test]
    fn lymb_examples() {
        let a = Hypergraph::from_lists(3, [vec![0], vec![1, 2]]).unwrap();
        assert_eq!(lymb_sum(&a).unwrap(), ratio(2, 3));
        let singles = Hypergraph::from_lists(5, (0..5).map(|v| [v])).unwrap();
        assert_eq!(lymb_sum(&singles).unwrap(), int(1));
        let chain = Hypergraph::from_lists(2, [vec![0], vec![0, 1]]).unwrap();
        assert_eq!(lymb_sum(&chain), Err(Error::NotAntichain));
    }

    #[test]
    fn lambda_table() {
        assert_eq!(lambda(3, 3), int(1));
        assert_eq!(lambda(1, 3), ratio(1, 4));
        assert_eq!(lambda(2, 4), ratio(1, 16));
        assert_eq!(degree_caps(2, &ratio(1, 10)), [0, 1, 1]);
    }

    #[test]
    fn construct_cover_examples() {
        let out = construct_cover(&Hypergraph::empty(3), &ratio(1, 10)).unwrap();
        assert!(out.g.is_empty());
        let edge = Hypergraph::from_lists(2, [[0, 1]]).unwrap();
        let out = construct_cover(&edge, &ratio(1, 10)).unwrap();
        assert_eq!(out.g, Hypergraph::from_lists(2, [[0], [1]]).unwrap());
        assert!(cover_bound_holds(&edge, &ratio(1, 10), &out, &e()).unwrap().holds());
        assert!(construct_cover(&edge, &ratio(1, 8)).is_err());
        let mixed = Hypergraph::from_lists(3, [vec![0], vec![1, 2]]).unwrap();
        assert_eq!(construct_cover(&mixed, &ratio(1, 20)), Err(Error::NotUniform));
    }

    #[test]
    fn key_inequality_examples() {
        let edge = Hypergraph::from_lists(2, [[0, 1]]).unwrap();
        let k = key_inequality_check(&edge, &ratio(1, 2), &e()).unwrap();
        assert_eq!(k.exponent, ratio(2, 3));
        assert!(k.holds() && !k.is_equality());
        let k = key_inequality_check(&Hypergraph::empty(3), &ratio(1, 3), &e()).unwrap();
        assert_eq!(k.exponent, int(0));
        assert!(k.is_equality());
        // I = 2^U for U = {0, 2}.
        let h = Hypergraph::from_lists(4, [[1], [3]]).unwrap();
        for p in [ratio(1, 10), ratio(1, 3), ratio(9, 10)] {
            assert!(key_inequality_check(&h, &p, &e()).unwrap().is_equality());
        }
    }
}
