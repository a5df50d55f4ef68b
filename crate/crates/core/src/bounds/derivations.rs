//! Checks of the corollaries obtained by instantiating the cover lemma:
//! balanced supersaturation, the efficient form with `|C| ≤ (1-1/(2K))|V|`,
//! the packaged nonexistence statement, and the derivation of the cover
//! lemma from the interpolating one.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::containers::{build_family, AlgorithmParams, FamilyOptions};
use crate::lemmas;
use crate::rational::{self, Rational};
use crate::{Error, Hypergraph, Result, VerificationReport};

/// `Δ_ℓ(H_S) < p^{ℓ-1} e(H_S) / container_size` for every `ℓ ∈ {2, ..., r}`.
pub fn supersaturation_holds(h_s: &Hypergraph, container_size: usize, p: &Rational) -> Result<bool> {
    if h_s.is_empty() {
        return Err(Error::NoEdges);
    }
    let r = h_s.uniformity().ok_or(Error::NotUniform)?;
    if container_size == 0 {
        return Err(Error::param("container_size", "must be at least 1"));
    }
    let e = rational::int(h_s.edge_count());
    let c = rational::int(container_size);
    Ok((2..=r).all(|ell| rational::int(h_s.max_degree(ell)) < rational::pow(p, ell - 1) * &e / &c))
}

/// Parameters `τ ∈ (0, 1)` and `K ≥ r` of the efficient container form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfficientParams {
    pub tau: Rational,
    pub k: Rational,
}

impl EfficientParams {
    pub fn new(tau: Rational, k: Rational) -> Self {
        Self { tau, k }
    }

    fn validate(&self, h: &Hypergraph) -> Result<usize> {
        if h.is_empty() {
            return Err(Error::NoEdges);
        }
        let r = h.uniformity().ok_or(Error::NotUniform)?;
        if !self.tau.is_positive() || self.tau >= Rational::one() {
            return Err(Error::param("tau", "must lie in (0, 1)"));
        }
        if self.k < rational::int(r) {
            return Err(Error::param("K", format!("must be at least r = {r}")));
        }
        Ok(r)
    }

    /// The cover-mode density `τ/(8r²)`.
    pub fn cover_p(&self, r: usize) -> Rational {
        &self.tau / rational::int(8 * r * r)
    }
}

/// `Δ_ℓ(H) ≤ K (τ/(32Kr²))^{ℓ-1} e(H)/|V|` for every `ℓ ∈ {1, ..., r}`.
pub fn efficient_assumptions_hold(h: &Hypergraph, params: &EfficientParams) -> Result<bool> {
    let r = params.validate(h)?;
    let base = &params.tau / (rational::int(32 * r * r) * &params.k);
    let avg = rational::int(h.edge_count()) / rational::int(h.vertex_count());
    Ok((1..=r).all(|ell| rational::int(h.max_degree(ell)) <= &params.k * rational::pow(&base, ell - 1) * &avg))
}

/// Runs the cover family at `p = τ/(8r²)` and checks `|S| ≤ τ|V|` and
/// `|C| ≤ (1 - 1/(2K))|V|` on every entry, next to the cover-mode checks.
pub fn check_efficient_conclusion(
    h: &Hypergraph,
    params: &EfficientParams,
    opts: &FamilyOptions,
) -> Result<VerificationReport> {
    if !efficient_assumptions_hold(h, params)? {
        return Err(Error::param("H", "the degree assumptions of the efficient form fail"));
    }
    let r = h.uniformity().unwrap_or(1);
    let cover = AlgorithmParams::cover(params.cover_p(r));
    let family = build_family(h, &cover, opts)?;
    let mut report = family.report().clone();
    let v = rational::int(h.vertex_count());
    let s_cap = &params.tau * &v;
    let c_cap = (Rational::one() - (rational::int(2) * &params.k).recip()) * &v;
    for entry in family.entries() {
        lemmas::check_entry(h, &cover, entry, &opts.build.limits, &mut report)?;
        report.record("efficient/fingerprint-size", rational::int(entry.s.len()) <= s_cap, || {
            format!("|S|={} > τ|V|", entry.s.len())
        });
        report.record("efficient/container-size", rational::int(entry.c.len()) <= c_cap, || {
            format!("|C|={} > (1-1/(2K))|V|", entry.c.len())
        });
    }
    Ok(report)
}

/// For every container `C` with cover `G` of the cover family at `p`:
/// certifies that no nonempty `H_S ⊆ H[C]` satisfies the supersaturation
/// condition (via `w_p(G) ≤ p|C|` and `G` covering `H[C]`), then samples
/// `trials` random nonempty `H_S ⊆ H[C]` and confirms each one violates it.
pub fn check_packaged_conclusion(
    h: &Hypergraph,
    p: &Rational,
    trials: usize,
    seed: u64,
    opts: &FamilyOptions,
) -> Result<VerificationReport> {
    let params = AlgorithmParams::cover(p.clone());
    let family = build_family(h, &params, opts)?;
    let mut report = family.report().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for entry in family.entries() {
        let g = entry.g.as_ref().ok_or_else(|| Error::Internal("cover entry without G".into()))?;
        let target = h.restrict(&entry.c);
        let certified = g.weight(p)? <= p * rational::int(entry.c.len()) && g.covers(&target);
        report.record("packaged/certificate", certified, || format!("S={} C={}", entry.s, entry.c));
        if target.is_empty() {
            continue;
        }
        let edges = target.edges();
        for _ in 0..trials {
            let mut pick: Vec<_> = edges.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
            if pick.is_empty() {
                pick.push(edges[rng.random_range(0..edges.len())].clone());
            }
            let h_s = Hypergraph::with_ground(h.n(), target.ground().clone(), pick)?;
            let holds = supersaturation_holds(&h_s, entry.c.len(), p)?;
            report.record("packaged/spot-check", !holds, || {
                format!("C={}: a sampled H_S with {} edges is supersaturated", entry.c, h_s.edge_count())
            });
        }
    }
    Ok(report)
}

/// Derives the cover lemma from the interpolating one: runs interpolating
/// mode at `q = 2rp`, `δ = 1/(4r)`, and checks that the minimal elements of
/// each output cover `H[C]` with `w_p ≤ p|C|`, edges of size at least 2 and
/// `|S| ≤ 8r²p|V|`.
pub fn crosscheck_hcl4_implies_hcl1(h: &Hypergraph, p: &Rational, opts: &FamilyOptions) -> Result<VerificationReport> {
    let r = match h.uniformity() {
        Some(r) => r,
        None if h.is_empty() => 1,
        None => return Err(Error::NotUniform),
    };
    if !p.is_positive() || *p > rational::ratio(1, 8 * (r * r) as i64) {
        return Err(Error::param("p", "needs 0 < p ≤ 1/(8r²)"));
    }
    let q = rational::int(2 * r) * p;
    let delta = rational::ratio(1, 4 * r as i64);
    let family = build_family(h, &AlgorithmParams::interpolating(q, delta), opts)?;
    let mut report = family.report().clone();
    let s_cap = rational::int(8 * r * r) * p * rational::int(h.vertex_count());
    for entry in family.entries() {
        let g = entry.g.as_ref().ok_or_else(|| Error::Internal("interpolating entry without G".into()))?;
        let g = g.minimal_elements();
        let c = rational::int(entry.c.len());
        report.record("crosscheck/covers", g.covers(&h.restrict(&entry.c)), || format!("C={}", entry.c));
        report.record("crosscheck/min-edge-size", g.edges().iter().all(|e| e.len() >= 2), || {
            format!("C={}: G has a singleton", entry.c)
        });
        let w = g.weight(p)?;
        report.record("crosscheck/weight", w <= p * &c, || {
            format!("C={}: w_p(G)={} > p|C|", entry.c, rational::format(&w))
        });
        report.record("crosscheck/fingerprint-size", rational::int(entry.s.len()) <= s_cap, || {
            format!("|S|={} > 8r²p|V|", entry.s.len())
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn complete(n: usize) -> Hypergraph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push([a, b]);
            }
        }
        Hypergraph::from_lists(n, edges).unwrap()
    }

    #[test]
    fn supersaturation_examples() {
        let t = Hypergraph::from_lists(3, [[0, 1, 2]]).unwrap();
        assert!(!supersaturation_holds(&t, 3, &ratio(1, 2)).unwrap());
        assert!(!supersaturation_holds(&complete(65), 65, &ratio(1, 32)).unwrap());
        let matching = Hypergraph::from_lists(20, (0..10).map(|i| [2 * i, 2 * i + 1])).unwrap();
        assert!(!supersaturation_holds(&matching, 20, &ratio(1, 2)).unwrap());
        assert_eq!(supersaturation_holds(&Hypergraph::empty(3), 3, &ratio(1, 2)), Err(Error::NoEdges));
    }

    #[test]
    fn efficient_assumptions() {
        let k1000 = complete(1000);
        assert!(efficient_assumptions_hold(&k1000, &EfficientParams::new(ratio(3, 10), int(2))).unwrap());
        assert!(!efficient_assumptions_hold(&complete(10), &EfficientParams::new(ratio(1, 100), int(2))).unwrap());
        assert!(efficient_assumptions_hold(&complete(10), &EfficientParams::new(ratio(1, 100), int(1))).is_err());
    }

    #[test]
    fn packaged_k100() {
        let report =
            check_packaged_conclusion(&complete(100), &ratio(1, 32), 50, 7, &FamilyOptions::default()).unwrap();
        assert!(report.all_passed(), "{:?}", report.failures());
        assert!(report.get("packaged/spot-check").unwrap().checked >= 50);
        let empty =
            check_packaged_conclusion(&Hypergraph::empty(4), &ratio(1, 32), 10, 0, &FamilyOptions::default()).unwrap();
        assert!(empty.all_passed());
    }

    #[test]
    fn crosscheck_small() {
        let opts = FamilyOptions::checked();
        for h in [Hypergraph::empty(3), Hypergraph::from_lists(2, [[0, 1]]).unwrap()] {
            let report = crosscheck_hcl4_implies_hcl1(&h, &ratio(1, 32), &opts).unwrap();
            assert!(report.all_passed(), "{:?}", report.failures());
        }
    }
}
