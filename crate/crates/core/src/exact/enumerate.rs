use alloc::vec;
use alloc::vec::Vec;

/// All independent masks of the hypergraph on positions `0..k`, via a DFS
/// that decides vertices in increasing order and checks only the edges whose
/// top vertex was just added.
pub(crate) fn independent_masks(k: usize, edges: &[u64]) -> Vec<u64> {
    let mut by_top: Vec<Vec<u64>> = vec![Vec::new(); k];
    for &e in edges {
        by_top[63 - e.leading_zeros() as usize].push(e);
    }
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u64)];
    while let Some((v, cur)) = stack.pop() {
        if v == k {
            out.push(cur);
            continue;
        }
        stack.push((v + 1, cur));
        let with = cur | (1 << v);
        if by_top[v].iter().all(|e| e & !with != 0) {
            stack.push((v + 1, with));
        }
    }
    out
}

/// For each mask `L` over `0..k`, the number of independent supersets of
/// `L` by size. Entry `(L, j)` lives at `L * (k + 1) + j`.
pub(crate) struct SupersetTable {
    k: usize,
    counts: Vec<u32>,
}

impl SupersetTable {
    pub(crate) fn build(k: usize, edges: &[u64]) -> Self {
        let size = 1usize << k;
        // Up-closure of the edge set: masks containing some edge.
        let mut blocked = vec![false; size];
        for &e in edges {
            blocked[e as usize] = true;
        }
        for b in 0..k {
            let bit = 1usize << b;
            for m in 0..size {
                if m & bit != 0 && blocked[m ^ bit] {
                    blocked[m] = true;
                }
            }
        }
        let w = k + 1;
        let mut counts = vec![0u32; size * w];
        for m in 0..size {
            if !blocked[m] {
                counts[m * w + m.count_ones() as usize] = 1;
            }
        }
        for b in 0..k {
            let bit = 1usize << b;
            for m in 0..size {
                if m & bit == 0 {
                    let (lo, hi) = counts.split_at_mut((m | bit) * w);
                    for j in 0..w {
                        lo[m * w + j] += hi[j];
                    }
                }
            }
        }
        Self { k, counts }
    }

    pub(crate) fn row(&self, mask: u64) -> &[u32] {
        let w = self.k + 1;
        &self.counts[mask as usize * w..(mask as usize + 1) * w]
    }

    pub(crate) fn is_independent(&self, mask: u64) -> bool {
        self.row(mask)[mask.count_ones() as usize] == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_and_tabulates() {
        let edges = [0b011u64, 0b110];
        let mut sets = independent_masks(3, &edges);
        sets.sort_unstable();
        assert_eq!(sets, [0b000, 0b001, 0b010, 0b100, 0b101]);
        let t = SupersetTable::build(3, &edges);
        assert_eq!(t.row(0), &[1, 3, 1, 0]);
        assert_eq!(t.row(0b001), &[0, 1, 1, 0]);
        assert!(!t.is_independent(0b011));
        assert!(t.is_independent(0b101));
    }
}
