//! Instance generators. Every random generator is a pure function of its
//! arguments: the seed feeds a ChaCha8 stream.

use std::collections::HashSet;

use container_lab_core::{rational, Error, Hypergraph, Rational, Result, VertexSet};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn binomial(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// All `k`-subsets of `{0..n}` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&j| idx[j] < n - k + j) else { return out };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `m` distinct `r`-sets of `{0..n}`, sampled without replacement.
pub fn random_uniform(n: usize, r: usize, m: usize, seed: u64) -> Result<Hypergraph> {
    if r == 0 {
        return Err(Error::Parameter { name: "r", detail: "must be at least 1".into() });
    }
    let total = binomial(n, r);
    if total.is_some_and(|t| (m as u64) > t) {
        return Err(Error::Parameter {
            name: "m",
            detail: format!("at most C({n},{r}) = {} edges exist", total.unwrap()),
        });
    }
    let mut rng = rng(seed);
    // Dense requests: sample indices into the full list.
    if let Some(t) = total.filter(|&t| t <= 4 * m as u64 + 64 && t <= 1 << 22) {
        let all = combinations(n, r);
        let picks = index::sample(&mut rng, t as usize, m);
        let edges = picks.into_iter().map(|i| VertexSet::from(all[i].as_slice()));
        return Hypergraph::new(n, edges);
    }
    let mut seen: HashSet<VertexSet> = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let e = VertexSet::from(index::sample(&mut rng, n, r).into_vec().as_slice());
        if seen.insert(e.clone()) {
            edges.push(e);
        }
    }
    Hypergraph::new(n, edges)
}

/// Canonical index of the pair `a < b` among the edges of `K_n`.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// The triangle hypergraph of `K_n`: vertices are the `C(n,2)` pairs, one
/// edge per triangle. Independent sets are triangle-free graphs.
pub fn triangles(n: usize) -> Result<Hypergraph> {
    if n < 3 {
        return Err(Error::Parameter { name: "n", detail: "triangles needs n ≥ 3".into() });
    }
    let edges = combinations(n, 3).into_iter().map(|t| {
        let (a, b, c) = (t[0], t[1], t[2]);
        VertexSet::from([pair_index(n, a, b), pair_index(n, a, c), pair_index(n, b, c)].as_slice())
    });
    Hypergraph::new(n * (n - 1) / 2, edges)
}

/// `k`-term arithmetic progressions in `{0..n}` with common difference ≥ 1.
pub fn aps(n: usize, k: usize) -> Result<Hypergraph> {
    if k < 3 || n < k {
        return Err(Error::Parameter { name: "k", detail: "aps needs k ≥ 3 and n ≥ k".into() });
    }
    let mut edges = Vec::new();
    for d in 1..=(n - 1) / (k - 1) {
        for a in 0..n - (k - 1) * d {
            edges.push(VertexSet::from((0..k).map(|i| a + i * d).collect::<Vec<_>>().as_slice()));
        }
    }
    Hypergraph::new(n, edges)
}

/// `K_n^{(r)}`, all `r`-subsets of `{0..n}`.
pub fn complete(n: usize, r: usize) -> Result<Hypergraph> {
    if r == 0 {
        return Err(Error::Parameter { name: "r", detail: "must be at least 1".into() });
    }
    Hypergraph::new(n, combinations(n, r).into_iter().map(|e| VertexSet::from(e.as_slice())))
}

/// The star with centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Hypergraph {
    Hypergraph::new(leaves + 1, (1..=leaves).map(|v| VertexSet::from([0, v].as_slice()))).expect("valid star")
}

/// Erdős–Rényi graph `G(n, density)`.
pub fn random_graph(n: usize, density: &Rational, seed: u64) -> Result<Hypergraph> {
    let keep = bernoulli(density)?;
    let mut rng = rng(seed);
    let edges: Vec<VertexSet> =
        combinations(n, 2).into_iter().filter(|_| keep(&mut rng)).map(|e| VertexSet::from(e.as_slice())).collect();
    Hypergraph::new(n, edges)
}

fn bernoulli(density: &Rational) -> Result<impl Fn(&mut ChaCha8Rng) -> bool> {
    if !rational::is_in_unit_interval(density) {
        return Err(Error::Parameter { name: "density", detail: "must lie in [0, 1]".into() });
    }
    let a = rational::numer_u(density);
    let b = rational::denom_u(density);
    let (a, b): (u64, u64) = match (a.try_into(), b.try_into()) {
        (Ok(a), Ok(b)) => (a, b),
        _ => {
            return Err(Error::Parameter {
                name: "density",
                detail: "numerator and denominator must fit in 64 bits".into(),
            })
        }
    };
    Ok(move |rng: &mut ChaCha8Rng| rng.random_range(0..b) < a)
}

/// A random hypergraph with edges of sizes 1 to 3 whose independent sets
/// form a decreasing family: each `k`-set is an edge with probability
/// `density^k`. `density = 0` gives the edgeless hypergraph (all of `2^V`).
pub fn decreasing_family(n: usize, density: &Rational, seed: u64) -> Result<Hypergraph> {
    let _ = bernoulli(density)?;
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for k in 1..=3.min(n) {
        let keep = bernoulli(&rational::pow(density, k))?;
        for e in combinations(n, k) {
            if keep(&mut rng) {
                edges.push(VertexSet::from(e.as_slice()));
            }
        }
    }
    Hypergraph::new(n, edges)
}

/// `{{v} : v ∉ U}`, whose independent sets are exactly the subsets of `U`.
pub fn power_set_family(n: usize, u: &VertexSet) -> Result<Hypergraph> {
    Hypergraph::new(n, (0..n).filter(|&v| !u.contains(v)).map(VertexSet::singleton))
}

/// `m` distinct random edges with sizes uniform in `1..=max_size`.
pub fn random_nonuniform(n: usize, m: usize, max_size: usize, seed: u64) -> Result<Hypergraph> {
    if max_size == 0 || max_size > n {
        return Err(Error::Parameter { name: "max_size", detail: "must lie in 1..=n".into() });
    }
    let capacity: u64 = (1..=max_size).map(|k| binomial(n, k).unwrap_or(u64::MAX)).fold(0, u64::saturating_add);
    if m as u64 > capacity {
        return Err(Error::Parameter { name: "m", detail: "more edges than distinct sets".into() });
    }
    let mut rng = rng(seed);
    let mut seen = HashSet::new();
    let mut per_size = vec![0u64; max_size + 1];
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let k = rng.random_range(1..=max_size);
        if binomial(n, k).is_some_and(|t| per_size[k] >= t) {
            continue;
        }
        let e = VertexSet::from(index::sample(&mut rng, n, k).into_vec().as_slice());
        if seen.insert(e.clone()) {
            per_size[k] += 1;
            edges.push(e);
        }
    }
    Hypergraph::new(n, edges)
}

/// `count` independent sets of `h`: the empty set, then sets grown greedily
/// along random vertex orders and cut at a random length. May contain
/// repeats when `h` has few independent sets.
pub fn random_independent_sets(h: &Hypergraph, count: usize, seed: u64) -> Vec<VertexSet> {
    let mut rng = rng(seed);
    let mut out = vec![VertexSet::new()];
    let mut order: Vec<usize> = h.ground().iter().collect();
    while out.len() < count {
        order.shuffle(&mut rng);
        let mut set = VertexSet::new();
        let mut grown = Vec::new();
        for &v in &order {
            set.insert(v);
            if h.is_independent(&set) {
                grown.push(v);
            } else {
                set.remove(v);
            }
        }
        let keep = rng.random_range(0..=grown.len());
        out.push(VertexSet::from(&grown[..keep]));
    }
    out.truncate(count);
    out
}
