//! The hard-core algorithm: query single vertices whose occupancy
//! probability under the hard-core model on `H_i` is too small.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use super::{AlgorithmParams, Ids, Runner, Step};
use crate::exact::{Compact, Engine, Weigher};
use crate::rational::{self, Rational};
use crate::report::Checks;
use crate::{Error, Hypergraph, Limits, Result, VertexSet};

pub(crate) const FINGERPRINT_EQUIVALENCE: &str = "hardcore/fingerprint-equivalence";

pub(crate) const IDS: Ids = Ids {
    sandwich: "hardcore/sandwich",
    contained: "hardcore/contained",
    determinism: "hardcore/determinism",
    rerun: "hardcore/rerun",
    termination: "hardcore/rounds",
    rounds_at_most_n: true,
};

/// Largest ground set on which the `I' ↔ S ∪ I'` equivalence is checked
/// over all subsets.
pub(crate) const EQUIVALENCE_N: usize = 12;

#[derive(Debug, Clone)]
pub(crate) struct HardcoreState {
    h: Hypergraph,
    p: Rational,
    delta: Rational,
    engine: Engine,
    round: usize,
}

impl HardcoreState {
    pub(crate) fn start(h: &Hypergraph, params: &AlgorithmParams, limits: Limits) -> Result<Self> {
        Ok(Self {
            h: h.clone(),
            p: params.p.clone(),
            delta: params.delta()?.clone(),
            engine: Engine::new(limits),
            round: 0,
        })
    }

    fn next(&self, v: usize, inside: bool) -> Result<(Hypergraph, Vec<VertexSet>)> {
        let added = if inside {
            self.h.link(&VertexSet::singleton(v))?.edges().to_vec()
        } else {
            vec![VertexSet::singleton(v)]
        };
        Ok((self.h.with_edges(added.iter().cloned())?, added))
    }
}

/// Checks `I' ∈ I(H) ⟺ S ∪ I' ∈ I(H)` for every `I' ⊆ V(H)`.
pub(crate) fn record_equivalence(checks: &mut Checks, id: &'static str, h: &Hypergraph, s: &VertexSet, round: usize) {
    if h.vertex_count() > EQUIVALENCE_N {
        return;
    }
    let Ok(c) = Compact::new(h, h.ground()) else { return };
    let sm = c.mask(s);
    let indep = |m: u64| c.edges.iter().all(|&e| e & !m != 0);
    let bad = (0..1u64 << c.k()).find(|&m| indep(m) != indep(m | sm));
    checks.record(id, bad.is_none(), || {
        format!("round {round}: S={s}, I'={} breaks the equivalence", c.set(bad.unwrap()))
    });
}

impl Runner for HardcoreState {
    const IDS: Ids = IDS;

    fn select(&mut self, s: &VertexSet, checks: &mut Checks) -> Result<Option<Step>> {
        if checks.enabled() {
            record_equivalence(checks, FINGERPRINT_EQUIVALENCE, &self.h, s, self.round);
        }
        let v = select_with(&self.engine, &self.h, &self.p, &self.delta, s)?;
        Ok(v.map(|v| Step { set: VertexSet::singleton(v), s: None }))
    }

    fn apply(&mut self, step: &Step, inside: bool, _s: &VertexSet, _checks: &mut Checks) -> Result<Vec<VertexSet>> {
        let v = step.set.first().expect("nonempty query");
        let (h, added) = self.next(v, inside)?;
        self.h = h;
        self.round += 1;
        Ok(added)
    }

    fn fork_inside(&self, step: &Step, _s: &VertexSet, _checks: &mut Checks) -> Result<(Self, Vec<VertexSet>)> {
        let v = step.set.first().expect("nonempty query");
        let (h, added) = self.next(v, true)?;
        Ok((Self { h, round: self.round + 1, ..self.clone() }, added))
    }

    fn unblocked(&self) -> VertexSet {
        self.h.unblocked_vertices()
    }

    fn output_hypergraph(&self) -> Option<Hypergraph> {
        None
    }
}

fn select_with(
    engine: &Engine,
    h: &Hypergraph,
    p: &Rational,
    delta: &Rational,
    s: &VertexSet,
) -> Result<Option<usize>> {
    let ground = h.ground();
    let w = Weigher::new(p, ground.len());
    let z = w.eval(&engine.independence_counts(h)?, 0);
    // Pr(v ∈ V_p | indep) < (1-δ)p  ⟺  num · qd < qn · z
    let q = (Rational::one() - delta) * p;
    let (qn, qd) = (rational::numer_u(&q), rational::denom_u(&q));
    let zq: BigUint = &z * &qn;
    for v in ground.difference(s).iter() {
        let single = VertexSet::singleton(v);
        if h.contains_edge(&single) {
            continue;
        }
        let num = w.eval(&engine.forced_counts(h, &single, ground)?, 1);
        if num * &qd < zq {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Step (2a) of the hard-core algorithm: the least `v ∈ V \ S_i` with
/// `{v} ∉ H_i` and `Pr(v ∈ V_p | V_p ∈ I(H_i)) < (1-δ)p`.
pub fn select_hardcore_vertex(
    h_i: &Hypergraph,
    p: &Rational,
    delta: &Rational,
    s_i: &VertexSet,
    engine: &Engine,
) -> Result<Option<usize>> {
    if !(rational::is_in_unit_interval(p) && rational::is_in_unit_interval(delta)) {
        return Err(Error::param("p", "p and delta must lie in [0, 1]"));
    }
    select_with(engine, h_i, p, delta, s_i)
}
