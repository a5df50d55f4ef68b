//! Branch-and-reduce computation of the independence polynomial on
//! single-word masks.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

/// `coeffs[k]` = number of independent sets of size `k`.
pub(crate) type Poly = Vec<u128>;

const MEMO_CAP: usize = 1 << 20;

#[derive(Default)]
pub(crate) struct Counter {
    memo: HashMap<(u64, Vec<u64>), Poly>,
}

impl Counter {
    /// Independence polynomial of the hypergraph with vertex mask `ground`
    /// and edges `edges` (each nonempty and contained in `ground`). The
    /// result has length `popcount(ground) + 1`.
    pub(crate) fn count(&mut self, ground: u64, edges: Vec<u64>) -> Poly {
        debug_assert!(edges.iter().all(|&e| e != 0 && e & !ground == 0));
        self.reduce(ground, edges)
    }

    fn reduce(&mut self, ground: u64, mut edges: Vec<u64>) -> Poly {
        let total = ground.count_ones() as usize;
        // Vertices forming singleton edges are never in an independent set.
        let blocked = edges.iter().filter(|e| e.count_ones() == 1).fold(0, |acc, e| acc | e);
        let ground = ground & !blocked;
        if blocked != 0 {
            edges.retain(|e| e & blocked == 0);
        }
        keep_minimal(&mut edges);
        let used = edges.iter().fold(0, |acc, e| acc | e);
        let free = (ground & !used).count_ones() as usize;
        let mut poly = if edges.is_empty() { vec![1] } else { self.connected(ground & used, edges) };
        poly = times_binomial_row(&poly, free);
        poly.resize(total + 1, 0);
        poly
    }

    /// Every vertex of `core` lies in some edge; edges form an antichain
    /// without singletons.
    fn connected(&mut self, core: u64, edges: Vec<u64>) -> Poly {
        let comp = component_of(edges[0], &edges);
        if comp != core {
            let (inner, outer): (Vec<u64>, Vec<u64>) = edges.into_iter().partition(|e| e & comp != 0);
            let a = self.connected(comp, inner);
            let b = self.connected(core & !comp, outer);
            return convolve(&a, &b);
        }
        let key = (core, edges);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let (core, edges) = key;

        let v = core & core.wrapping_neg();
        let rest = core & !v;
        let out_edges: Vec<u64> = edges.iter().copied().filter(|e| e & v == 0).collect();
        let in_edges: Vec<u64> = edges.iter().map(|e| e & !v).collect();
        let out = self.reduce(rest, out_edges);
        let inside = self.reduce(rest, in_edges);

        let mut poly = vec![0u128; core.count_ones() as usize + 1];
        for (k, c) in out.iter().enumerate() {
            poly[k] += c;
        }
        for (k, c) in inside.iter().enumerate() {
            poly[k + 1] += c;
        }
        if self.memo.len() >= MEMO_CAP {
            self.memo.clear();
        }
        self.memo.insert((core, edges), poly.clone());
        poly
    }
}

fn component_of(seed: u64, edges: &[u64]) -> u64 {
    let mut comp = seed;
    loop {
        let before = comp;
        for &e in edges {
            if e & comp != 0 {
                comp |= e;
            }
        }
        if comp == before {
            return comp;
        }
    }
}

/// Sorts by (size, mask) and drops edges containing another edge.
fn keep_minimal(edges: &mut Vec<u64>) {
    edges.sort_unstable_by_key(|&e| (e.count_ones(), e));
    edges.dedup();
    let mut kept: Vec<u64> = Vec::with_capacity(edges.len());
    for &e in edges.iter() {
        if !kept.iter().any(|&k| k & !e == 0) {
            kept.push(e);
        }
    }
    *edges = kept;
}

pub(crate) fn convolve(a: &[u128], b: &[u128]) -> Poly {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn times_binomial_row(poly: &[u128], free: usize) -> Poly {
    if free == 0 {
        return poly.to_vec();
    }
    let mut row = vec![1u128; free + 1];
    for k in 1..free {
        row[k] = row[k - 1] * (free - k + 1) as u128 / k as u128;
    }
    convolve(poly, &row)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: usize, edges: &[u64]) -> Poly {
        let mut out = vec![0u128; n + 1];
        for m in 0u64..(1 << n) {
            if edges.iter().all(|e| e & !m != 0) {
                out[m.count_ones() as usize] += 1;
            }
        }
        out
    }

    #[test]
    fn matches_brute_force() {
        let cases: &[(usize, &[u64])] = &[
            (2, &[0b11]),
            (3, &[]),
            (4, &[0b0011, 0b0101, 0b1001]),
            (5, &[0b00111, 0b11000, 0b00001]),
            (6, &[0b000011, 0b001100, 0b110000, 0b010101]),
            (7, &[0b0000111, 0b0011100, 0b1110000, 0b1000001, 0b0000011]),
        ];
        for &(n, edges) in cases {
            let ground = (1u64 << n) - 1;
            assert_eq!(Counter::default().count(ground, edges.to_vec()), brute(n, edges), "{edges:?}");
        }
    }
}
