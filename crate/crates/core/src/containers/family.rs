//! The whole family `g: I ↦ S`, `f: S ↦ C` of an algorithm.
//!
//! Rather than running the algorithm once per independent set, the builder
//! walks its decision tree: a node is a state `H_i` reached by some input,
//! and its two children are the inside and outside answers to the query
//! `L_i ⊆ I`. An answer is feasible exactly when the canonical input
//! `S_i ∪ L_i` (inside) or `S_i` (outside) follows the same path, so every
//! leaf is reached by at least one independent set and every independent
//! set reaches exactly one leaf.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::cover::CoverState;
use super::hardcore::HardcoreState;
use super::interpolating::InterpolatingState;
use super::{
    build_container, record_added_independent, record_sandwich, record_termination, AlgorithmParams, Branch,
    BuildOptions, Ids, Mode, Runner, Step, TraceStep,
};
use crate::report::Checks;
use crate::{Error, Hypergraph, Result, VerificationReport, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyOptions {
    pub build: BuildOptions,
    /// How many family entries to re-derive by a fresh run on input `S`;
    /// `None` reruns all of them. Sampled entries are evenly spaced.
    pub rerun_limit: Option<usize>,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        Self { build: BuildOptions::default(), rerun_limit: Some(64) }
    }
}

impl FamilyOptions {
    pub fn checked() -> Self {
        Self { build: BuildOptions::checked(), ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyEntry {
    pub s: VertexSet,
    pub c: VertexSet,
    pub g: Option<Hypergraph>,
    /// Rounds `J` on the canonical input `S`.
    pub rounds: usize,
}

#[derive(Debug, Clone)]
enum Kind {
    Leaf(usize),
    Query { step: Step, inside: Option<(usize, Vec<VertexSet>)>, outside: Option<(usize, Vec<VertexSet>)> },
}

#[derive(Debug, Clone)]
struct Node {
    s: VertexSet,
    c: VertexSet,
    kind: Kind,
}

/// Result of [`super::build_family`]: the distinct containers, keyed by
/// fingerprint, plus the decision tree used to evaluate `g` and `f`.
#[derive(Debug, Clone)]
pub struct Family {
    mode: Mode,
    h: Hypergraph,
    entries: Vec<FamilyEntry>,
    nodes: Vec<Node>,
    ids: Ids,
    report: VerificationReport,
}

struct Item<R> {
    state: R,
    s: VertexSet,
    /// Queries answered "outside" on the way here.
    outs: Vec<VertexSet>,
    depth: usize,
    parent: Option<(usize, bool, Vec<VertexSet>)>,
}

pub(super) fn build(h: &Hypergraph, params: &AlgorithmParams, opts: &FamilyOptions) -> Result<Family> {
    let r = params.validate(h)?;
    let mut checks = if opts.build.checks { Checks::on() } else { Checks::off() };
    let (ids, nodes, leaves) = match params.mode {
        Mode::Cover => {
            let root = CoverState::start(h, params, r, &mut checks)?;
            explore(h, root, opts, &mut checks)?
        }
        Mode::Hardcore => {
            let root = HardcoreState::start(h, params, opts.build.limits)?;
            explore(h, root, opts, &mut checks)?
        }
        Mode::Interpolating => {
            let root = InterpolatingState::start(h, params, opts.build.limits)?;
            explore(h, root, opts, &mut checks)?
        }
    };
    let mut family =
        Family { mode: params.mode, h: h.clone(), entries: Vec::new(), nodes, ids, report: VerificationReport::new() };
    family.collect_entries(leaves, &mut checks)?;
    family.rerun(params, opts, &mut checks)?;
    family.report = checks.report.unwrap_or_default();
    Ok(family)
}

type Explored = (Ids, Vec<Node>, Vec<FamilyEntry>);

fn explore<R: Runner>(h: &Hypergraph, root: R, opts: &FamilyOptions, checks: &mut Checks) -> Result<Explored> {
    let watchdog = opts.build.watchdog(h.vertex_count());
    let mut nodes: Vec<Node> = Vec::new();
    let mut leaves: Vec<FamilyEntry> = Vec::new();
    let mut stack = vec![Item { state: root, s: VertexSet::new(), outs: Vec::new(), depth: 0, parent: None }];
    while let Some(Item { mut state, s, outs, depth, parent }) = stack.pop() {
        let idx = nodes.len();
        if let Some((p, inside, added)) = parent {
            if let Kind::Query { inside: slot_in, outside: slot_out, .. } = &mut nodes[p].kind {
                let slot = if inside { slot_in } else { slot_out };
                *slot = Some((idx, added));
            }
        }
        let c = state.unblocked();
        let Some(step) = state.select(&s, checks)? else {
            if checks.enabled() {
                record_termination(checks, &R::IDS, depth, h.vertex_count());
            }
            nodes.push(Node { s: s.clone(), c: c.clone(), kind: Kind::Leaf(leaves.len()) });
            leaves.push(FamilyEntry { g: state.output_hypergraph(), s, c, rounds: depth });
            continue;
        };
        if depth >= watchdog {
            return Err(Error::Watchdog { rounds: depth });
        }
        let with = s.union(&step.set);
        let inside_ok = h.is_independent(&with) && outs.iter().all(|o| !o.is_subset(&with));
        let outside_ok = !step.set.is_subset(&s);
        nodes.push(Node { s: s.clone(), c, kind: Kind::Query { step: step.clone(), inside: None, outside: None } });
        match (inside_ok, outside_ok) {
            (true, true) => {
                let (child, added) = state.fork_inside(&step, &s, checks)?;
                stack.push(Item {
                    state: child,
                    s: with,
                    outs: outs.clone(),
                    depth: depth + 1,
                    parent: Some((idx, true, added)),
                });
                let added = state.apply(&step, false, &s, checks)?;
                let mut outs = outs;
                outs.push(step.set.clone());
                stack.push(Item { state, s, outs, depth: depth + 1, parent: Some((idx, false, added)) });
            }
            (true, false) => {
                let added = state.apply(&step, true, &s, checks)?;
                stack.push(Item { state, s: with, outs, depth: depth + 1, parent: Some((idx, true, added)) });
            }
            (false, true) => {
                let added = state.apply(&step, false, &s, checks)?;
                let mut outs = outs;
                outs.push(step.set.clone());
                stack.push(Item { state, s, outs, depth: depth + 1, parent: Some((idx, false, added)) });
            }
            (false, false) => {
                return Err(Error::Internal(format!("query {} at depth {depth} has no feasible answer", step.set)));
            }
        }
    }
    Ok((R::IDS, nodes, leaves))
}

impl Family {
    fn collect_entries(&mut self, leaves: Vec<FamilyEntry>, checks: &mut Checks) -> Result<()> {
        let leaf_count = leaves.len();
        let mut order: Vec<usize> = (0..leaf_count).collect();
        order.sort_by(|&a, &b| leaves[a].s.cmp(&leaves[b].s));
        let mut remap = vec![0usize; leaf_count];
        let mut entries: Vec<FamilyEntry> = Vec::new();
        for &leaf in &order {
            let e = &leaves[leaf];
            if let Some(last) = entries.last() {
                if last.s == e.s {
                    let same = last.c == e.c && last.g == e.g;
                    checks.record(self.ids.determinism, same, || format!("S={} yields two containers", e.s));
                    if !same {
                        return Err(Error::Internal(format!("fingerprint {} yields two different containers", e.s)));
                    }
                    remap[leaf] = entries.len() - 1;
                    continue;
                }
            }
            checks.record(self.ids.determinism, true, Default::default);
            remap[leaf] = entries.len();
            entries.push(e.clone());
        }
        for node in &mut self.nodes {
            if let Kind::Leaf(i) = &mut node.kind {
                *i = remap[*i];
            }
        }
        self.entries = entries;
        Ok(())
    }

    fn rerun(&self, params: &AlgorithmParams, opts: &FamilyOptions, checks: &mut Checks) -> Result<()> {
        let n = self.entries.len();
        let picks: Vec<usize> = match opts.rerun_limit {
            Some(limit) if limit < n => (0..limit).map(|k| k * n / limit).collect(),
            _ => (0..n).collect(),
        };
        let build = BuildOptions { checks: false, ..opts.build };
        for k in picks {
            let e = &self.entries[k];
            let out = build_container(&self.h, params, &e.s, &build)?.output;
            let same = out.s == e.s && out.c == e.c && out.g == e.g;
            checks.record(self.ids.rerun, same, || format!("rerun on S={} gave S={} C={}", e.s, out.s, out.c));
            if !same {
                return Err(Error::Internal(format!("rerunning with input {} does not reproduce its container", e.s)));
            }
        }
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.h
    }

    /// Distinct `(S, C, G)` triples in canonical order of `S`.
    pub fn entries(&self) -> &[FamilyEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of states in the explored decision tree.
    pub fn tree_size(&self) -> usize {
        self.nodes.len()
    }

    /// Invariants checked while building (empty unless checks were on).
    pub fn report(&self) -> &VerificationReport {
        &self.report
    }

    /// `(g(I), f(g(I)))` for an independent set `I`.
    pub fn lookup(&self, i: &VertexSet) -> Result<&FamilyEntry> {
        self.walk(i, &mut Checks::off(), None)
    }

    /// The trace a single run on `I` would produce.
    pub fn trace(&self, i: &VertexSet) -> Result<Vec<TraceStep>> {
        let mut trace = Vec::new();
        self.walk(i, &mut Checks::off(), Some(&mut trace))?;
        Ok(trace)
    }

    /// Walks `I` down the tree, checking at every round that
    /// `S_i ⊆ I ⊆ C_i` and that `I` stays independent.
    pub fn check_input(&self, i: &VertexSet, report: &mut VerificationReport) -> Result<&FamilyEntry> {
        let mut checks = Checks::on();
        let entry = self.walk(i, &mut checks, None)?;
        report.merge(checks.report.unwrap_or_default());
        Ok(entry)
    }

    fn walk(&self, i: &VertexSet, checks: &mut Checks, mut trace: Option<&mut Vec<TraceStep>>) -> Result<&FamilyEntry> {
        self.h.check_subset_of_ground(i)?;
        if !self.h.is_independent(i) {
            return Err(Error::NotIndependent);
        }
        let mut at = 0;
        let mut round = 0;
        loop {
            let node = &self.nodes[at];
            if checks.enabled() {
                record_sandwich(checks, &self.ids, &node.s, i, &node.c, round);
            }
            match &node.kind {
                Kind::Leaf(e) => {
                    let entry = &self.entries[*e];
                    checks.record(self.ids.contained, entry.s.is_subset(i) && i.is_subset(&entry.c), || {
                        format!("S={} I={i} C={}", entry.s, entry.c)
                    });
                    return Ok(entry);
                }
                Kind::Query { step, inside, outside } => {
                    let go_in = step.set.is_subset(i);
                    let (next, added) = if go_in { inside } else { outside }.as_ref().ok_or_else(|| {
                        Error::Internal(format!("input {i} leaves the explored tree at round {round}"))
                    })?;
                    if checks.enabled() {
                        record_added_independent(checks, &self.ids, added, i, round);
                    }
                    if let Some(t) = trace.as_deref_mut() {
                        let after = if go_in { node.s.union(&step.set).len() } else { node.s.len() };
                        t.push(TraceStep {
                            round,
                            chosen: step.set.clone(),
                            s: step.s,
                            branch: if go_in { Branch::InsideI } else { Branch::OutsideI },
                            fingerprint_size_after: after,
                        });
                    }
                    at = *next;
                    round += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::containers::build_family;
    use crate::rational::ratio;

    #[test]
    fn empty_hypergraph_has_one_entry() {
        let fam = build_family(&Hypergraph::empty(3), &AlgorithmParams::cover(ratio(1, 8)), &FamilyOptions::checked())
            .unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.entries()[0].c, VertexSet::full(3));
    }

    #[test]
    fn complete_graph_family() {
        let n = 100;
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| [i, j]));
        let k = Hypergraph::from_lists(n, edges).unwrap();
        let fam = build_family(&k, &AlgorithmParams::cover(ratio(1, 32)), &FamilyOptions::checked()).unwrap();
        assert!(fam.report().all_passed(), "{:?}", fam.report().failures());
        // Fingerprints are ∅ and {v} for v < 35.
        assert_eq!(fam.len(), 36);
        let mut report = VerificationReport::new();
        for v in 0..n {
            let i = VertexSet::singleton(v);
            let e = fam.check_input(&i, &mut report).unwrap();
            assert!(e.s.len() <= 100);
        }
        assert!(report.all_passed());
        let direct = build_container(
            &k,
            &AlgorithmParams::cover(ratio(1, 32)),
            &VertexSet::from([40]),
            &BuildOptions::default(),
        )
        .unwrap()
        .output;
        assert_eq!(fam.trace(&VertexSet::from([40])).unwrap(), direct.trace);
    }
}
