//! The interpolating algorithm: query minimal sets `L` whose joint
//! occupancy probability falls below `((1-δ)p)^{|L|}`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use super::hardcore::record_equivalence;
use super::{describe_sets, AlgorithmParams, Ids, Runner, Step};
use crate::exact::{Compact, SupersetTable, Weigher};
use crate::rational::{self, Rational};
use crate::report::Checks;
use crate::{Error, Hypergraph, Limits, Result, VertexSet};

pub(crate) const FINGERPRINT_EQUIVALENCE: &str = "interpolating/fingerprint-equivalence";
pub(crate) const DISJOINT: &str = "interpolating/disjoint";

pub(crate) const IDS: Ids = Ids {
    sandwich: "interpolating/sandwich",
    contained: "interpolating/contained",
    determinism: "interpolating/determinism",
    rerun: "interpolating/rerun",
    termination: "interpolating/termination",
    rounds_at_most_n: false,
};

#[derive(Debug, Clone)]
pub(crate) struct InterpolatingState {
    h: Hypergraph,
    p: Rational,
    delta: Rational,
    limits: Limits,
    round: usize,
}

impl InterpolatingState {
    pub(crate) fn start(h: &Hypergraph, params: &AlgorithmParams, limits: Limits) -> Result<Self> {
        guard(h, &limits)?;
        Ok(Self { h: h.clone(), p: params.p.clone(), delta: params.delta()?.clone(), limits, round: 0 })
    }

    fn next(&self, l: &VertexSet, inside: bool) -> Result<(Hypergraph, Vec<VertexSet>)> {
        if !inside {
            return Ok((self.h.with_edges([l.clone()])?, vec![l.clone()]));
        }
        let stripped = self.h.strip_link(l)?;
        if stripped.contains_empty {
            return Err(Error::Internal(format!("round {}: query {l} is not independent", self.round)));
        }
        let added = self.h.edges().iter().filter(|e| e.intersects(l)).map(|e| e.difference(l)).collect();
        Ok((stripped.hypergraph, added))
    }
}

fn guard(h: &Hypergraph, limits: &Limits) -> Result<()> {
    let n = h.vertex_count();
    let limit = limits.subset_search_n.min(Limits::HARD_CEILING);
    if n > limit {
        return Err(Error::Guard { what: "interpolating subset search", n, limit });
    }
    Ok(())
}

impl Runner for InterpolatingState {
    const IDS: Ids = IDS;

    fn select(&mut self, s: &VertexSet, checks: &mut Checks) -> Result<Option<Step>> {
        if checks.enabled() {
            record_equivalence(checks, FINGERPRINT_EQUIVALENCE, &self.h, s, self.round);
            let bad: Vec<VertexSet> = self.h.edges().iter().filter(|e| e.intersects(s)).cloned().collect();
            let round = self.round;
            checks.record(DISJOINT, bad.is_empty(), || format!("round {round}: S={s} meets {}", describe_sets(&bad)));
        }
        let l = select_with(&self.h, &self.p, &self.delta, s, &self.limits)?;
        Ok(l.map(|set| Step { set, s: None }))
    }

    fn apply(&mut self, step: &Step, inside: bool, _s: &VertexSet, _checks: &mut Checks) -> Result<Vec<VertexSet>> {
        let (h, added) = self.next(&step.set, inside)?;
        self.h = h;
        self.round += 1;
        Ok(added)
    }

    fn fork_inside(&self, step: &Step, _s: &VertexSet, _checks: &mut Checks) -> Result<(Self, Vec<VertexSet>)> {
        let (h, added) = self.next(&step.set, true)?;
        Ok((Self { h, round: self.round + 1, ..self.clone() }, added))
    }

    fn unblocked(&self) -> VertexSet {
        self.h.unblocked_vertices()
    }

    fn output_hypergraph(&self) -> Option<Hypergraph> {
        Some(self.h.restrict(&self.unblocked()))
    }
}

/// Positions of `free` as combinations of size `k`, in lexicographic order.
fn for_each_combination(free: &[usize], k: usize, mut visit: impl FnMut(u64) -> bool) {
    let n = free.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mask = idx.iter().fold(0u64, |m, &i| m | 1 << free[i]);
        if visit(mask) {
            return;
        }
        // Advance to the next combination.
        let Some(pos) = (0..k).rev().find(|&j| idx[j] < n - k + j) else { return };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn select_with(
    h: &Hypergraph,
    p: &Rational,
    delta: &Rational,
    s: &VertexSet,
    limits: &Limits,
) -> Result<Option<VertexSet>> {
    guard(h, limits)?;
    let c = Compact::new(h, h.ground())?;
    let k = c.k();
    let table = SupersetTable::build(k, &c.edges);
    let w = Weigher::new(p, k);
    let z = w.eval_u32(table.row(0), 0);
    let q = (Rational::one() - delta) * p;
    let (qn, qd) = (rational::numer_u(&q), rational::denom_u(&q));
    let free_mask = c.mask(&h.ground().difference(s));
    let free: Vec<usize> = (0..k).filter(|&i| free_mask >> i & 1 == 1).collect();
    for size in 1..=free.len() {
        // Pr(L ⊆ V_p | indep) < q^|L|  ⟺  num · qd^|L| < qn^|L| · z
        let left: BigUint = Pow::pow(&qd, size as u64);
        let right: BigUint = Pow::pow(&qn, size as u64) * &z;
        let mut found = None;
        for_each_combination(&free, size, |mask| {
            if table.is_independent(mask) && w.eval_u32(table.row(mask), 0) * &left < right {
                found = Some(mask);
            }
            found.is_some()
        });
        if let Some(mask) = found {
            return Ok(Some(c.set(mask)));
        }
    }
    Ok(None)
}

/// Step (2a) of the interpolating algorithm: the `(size, lex)`-least
/// `L ⊆ V \ S_i` with `L ∈ I(H_i)` and
/// `Pr(L ⊆ V_p | V_p ∈ I(H_i)) < ((1-δ)p)^{|L|}`. Being found at the
/// smallest size, it is inclusion-minimal.
pub fn select_interpolating_set(
    h_i: &Hypergraph,
    p: &Rational,
    delta: &Rational,
    s_i: &VertexSet,
    limits: &Limits,
) -> Result<Option<VertexSet>> {
    if !(rational::is_in_unit_interval(p) && rational::is_in_unit_interval(delta)) {
        return Err(Error::param("p", "p and delta must lie in [0, 1]"));
    }
    select_with(h_i, p, delta, s_i, limits)
}
