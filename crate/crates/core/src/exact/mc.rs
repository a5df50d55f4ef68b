use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{self, Rational};
use crate::{Error, Hypergraph, Result, VertexSet};

/// Monte Carlo estimate of `Pr(V_p ∈ I(H))` with a 95% normal-approximation
/// half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub hits: u64,
    pub samples: u64,
    pub seed: u64,
    pub half_width: f64,
}

impl McEstimate {
    /// Standard error of the estimate under the binomial model.
    pub fn std_error(&self) -> f64 {
        let q = self.estimate;
        libm::sqrt(q * (1.0 - q) / self.samples as f64)
    }
}

/// Draws sample `index` of the stream keyed by `seed`. Each sample has its
/// own ChaCha stream, so samples can be drawn in any order or in parallel.
pub fn sample_subset(h: &Hypergraph, p: &Rational, seed: u64, index: u64) -> VertexSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let a = rational::numer_u(p).to_u64();
    let b = rational::denom_u(p).to_u64();
    let pf = rational::to_f64(p);
    let mut out = VertexSet::new();
    for v in h.ground() {
        let keep = match (a, b) {
            (Some(a), Some(b)) => rng.random_range(0..b) < a,
            _ => rng.random::<f64>() < pf,
        };
        if keep {
            out.insert(v);
        }
    }
    out
}

/// Counts independent samples among indices `range` of the stream.
pub fn mc_hits(h: &Hypergraph, p: &Rational, seed: u64, range: core::ops::Range<u64>) -> u64 {
    range.filter(|&i| h.is_independent(&sample_subset(h, p, seed, i))).count() as u64
}

pub fn mc_prob_independent(h: &Hypergraph, p: &Rational, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::param("samples", "must be at least 1"));
    }
    if !rational::is_in_unit_interval(p) {
        return Err(Error::param("p", "must lie in [0, 1]"));
    }
    let hits = if h.is_empty() { samples } else { mc_hits(h, p, seed, 0..samples) };
    Ok(McEstimate::from_hits(hits, samples, seed))
}

impl McEstimate {
    pub fn from_hits(hits: u64, samples: u64, seed: u64) -> Self {
        let estimate = hits as f64 / samples as f64;
        let mut e = Self { estimate, hits, samples, seed, half_width: 0.0 };
        e.half_width = 1.96 * e.std_error();
        e
    }
}
