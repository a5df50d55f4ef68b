//! The cover-based algorithm on `r`-uniform hypergraphs.
//!
//! `H_i` is kept as a live edge set with, for every `1 ≤ ℓ < s ≤ r`, a table
//! of `deg(T)` over `ℓ`-sets `T` inside `s`-edges. A link weight is then
//! `w_p(∂_T H_i^s) = deg(T) p^{s-ℓ}`, so every threshold test becomes an
//! integer comparison against a precomputed bound.

use alloc::format;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};
use num_bigint::BigUint;
use num_traits::{Pow, Zero};
use smallvec::SmallVec;

use super::{describe_sets, AlgorithmParams, Ids, Runner, Step, StopRule};
use crate::certified;
use crate::rational::{self, Rational};
use crate::report::Checks;
use crate::{Error, Hypergraph, Result, VertexSet};

type Tuple = SmallVec<[u32; 6]>;

pub(crate) const ANTICHAIN: &str = "cover/antichain";
pub(crate) const UPSET_GROWTH: &str = "cover/upset-growth";
pub(crate) const UPDATE_UNIFORM: &str = "cover/update-uniform";
pub(crate) const LINK_WEIGHT: &str = "cover/link-weight";
pub(crate) const HEAVY_LINK: &str = "cover/heavy-link-exists";
pub(crate) const WEIGHT_INCREASE: &str = "cover/weight-increase";

pub(crate) const IDS: Ids = Ids {
    sandwich: "cover/sandwich",
    contained: "cover/contained",
    determinism: "cover/determinism",
    rerun: "cover/rerun",
    termination: "cover/termination",
    rounds_at_most_n: false,
};

struct LogR {
    ln_num: BigUint,
    ln_den: BigUint,
    /// `(1 - 1/(2K)) |V|`.
    cut: Rational,
}

struct Params {
    n: usize,
    r: usize,
    ground: VertexSet,
    /// Least degree with `deg p^{s-ℓ} ≥ 1/(4r)`, indexed `[s][ℓ]`.
    select_min: Vec<Vec<Option<u64>>>,
    /// Least degree with `deg p^{s-ℓ} ≥ 1/r`.
    heavy_min: Vec<Vec<Option<u64>>>,
    /// Largest degree with `deg p^{s-ℓ} ≤ 1/(2r)`.
    link_max: Vec<Vec<u64>>,
    /// `a^s b^{r-s}` for `p = a/b`: weights in units of `b^{-r}`.
    wcoef: Vec<BigUint>,
    /// `p` in the same units.
    p_units: BigUint,
    b_pow_r: BigUint,
    logr: Option<LogR>,
}

impl Params {
    fn new(n: usize, ground: VertexSet, p: &Rational, r: usize, rule: &StopRule) -> Result<Self> {
        let a = rational::numer_u(p);
        let b = rational::denom_u(p);
        let mut select_min = vec![Vec::new(); r + 1];
        let mut heavy_min = vec![Vec::new(); r + 1];
        let mut link_max = vec![Vec::new(); r + 1];
        for s in 2..=r {
            for l in 0..s {
                // 1 / p^{s-ℓ}
                let inv = rational::pow(&p.recip(), s - l);
                let at = |c: usize| &inv / rational::int(c);
                select_min[s].push(rational::ceil_u64(&at(4 * r)));
                heavy_min[s].push(rational::ceil_u64(&at(r)));
                link_max[s].push(rational::floor_u64_saturating(&at(2 * r)));
            }
        }
        let wcoef = (0..=r).map(|s| Pow::pow(&a, s as u64) * Pow::pow(&b, (r - s) as u64)).collect();
        let p_units = &a * Pow::pow(&b, (r - 1) as u64);
        let logr = match rule {
            StopRule::Standard => None,
            StopRule::LogR { k } => {
                let ln = certified::ln_lower(&rational::int(r), 64)?;
                let ln = if ln < Rational::zero() { Rational::zero() } else { ln };
                let one = rational::int(1);
                let cut = (&one - (&one / (rational::int(2) * k))) * rational::int(ground.len());
                Some(LogR { ln_num: rational::numer_u(&ln), ln_den: rational::denom_u(&ln), cut })
            }
        };
        Ok(Self {
            n,
            r,
            ground,
            select_min,
            heavy_min,
            link_max,
            wcoef,
            p_units,
            b_pow_r: Pow::pow(&b, r as u64),
            logr,
        })
    }
}

#[derive(Clone)]
pub(crate) struct CoverState {
    params: Rc<Params>,
    edges: Vec<Tuple>,
    alive: Vec<bool>,
    ids: HashMap<Tuple, u32>,
    incidence: Vec<Vec<u32>>,
    blocked: VertexSet,
    size_count: Vec<usize>,
    deg: Vec<Vec<HashMap<Tuple, u32>>>,
    round: usize,
}

impl core::fmt::Debug for CoverState {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CoverState")
            .field("edges", &self.ids.len())
            .field("blocked", &self.blocked)
            .field("round", &self.round)
            .finish()
    }
}

fn tuple(set: &VertexSet) -> Tuple {
    set.iter().map(|v| v as u32).collect()
}

fn to_set(t: &[u32]) -> VertexSet {
    t.iter().map(|&v| v as usize).collect()
}

fn contains_sorted(big: &[u32], small: &[u32]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// Proper nonempty subsets of `t`, each in sorted order.
fn for_each_proper_subset(t: &[u32], mut visit: impl FnMut(&[u32])) {
    let k = t.len();
    let mut buf: Tuple = SmallVec::new();
    for mask in 1u32..(1 << k) - 1 {
        buf.clear();
        buf.extend((0..k).filter(|i| mask >> i & 1 == 1).map(|i| t[i]));
        visit(&buf);
    }
}

impl CoverState {
    fn empty(params: Rc<Params>) -> Self {
        let r = params.r;
        let n = params.n;
        Self {
            params,
            edges: Vec::new(),
            alive: Vec::new(),
            ids: HashMap::new(),
            incidence: vec![Vec::new(); n],
            blocked: VertexSet::new(),
            size_count: vec![0; r + 1],
            deg: (0..=r).map(|s| (0..s).map(|_| HashMap::new()).collect()).collect(),
            round: 0,
        }
    }

    fn from_hypergraph(h: &Hypergraph, params: Params) -> Result<Self> {
        let r = params.r;
        let mut state = Self::empty(Rc::new(params));
        for e in h.edges() {
            if e.len() > r {
                return Err(Error::param("H", format!("edge {e} is larger than r = {r}")));
            }
            state.insert(tuple(e));
        }
        Ok(state)
    }

    pub(crate) fn start(h: &Hypergraph, params: &AlgorithmParams, r: usize, checks: &mut Checks) -> Result<Self> {
        let p = Params::new(h.n(), h.ground().clone(), &params.p, r, &params.stop_rule)?;
        let state = Self::from_hypergraph(h, p)?;
        if checks.enabled() {
            checks.record(ANTICHAIN, h.is_antichain(), || format!("input {h:?}"));
        }
        Ok(state)
    }

    fn insert(&mut self, t: Tuple) {
        if self.ids.contains_key(&t) {
            return;
        }
        let id = self.edges.len() as u32;
        let s = t.len();
        for &v in &t {
            self.incidence[v as usize].push(id);
        }
        if s == 1 {
            self.blocked.insert(t[0] as usize);
        } else {
            let deg = &mut self.deg[s];
            for_each_proper_subset(&t, |sub| {
                *deg[sub.len()].entry(Tuple::from_slice(sub)).or_insert(0) += 1;
            });
        }
        self.size_count[s] += 1;
        self.ids.insert(t.clone(), id);
        self.edges.push(t);
        self.alive.push(true);
    }

    fn remove(&mut self, id: u32) {
        let idx = id as usize;
        if !self.alive[idx] {
            return;
        }
        self.alive[idx] = false;
        let t = core::mem::take(&mut self.edges[idx]);
        let s = t.len();
        if s == 1 {
            self.blocked.remove(t[0] as usize);
        } else {
            let deg = &mut self.deg[s];
            for_each_proper_subset(&t, |sub| {
                let table = &mut deg[sub.len()];
                if let Some(d) = table.get_mut(sub) {
                    *d -= 1;
                    if *d == 0 {
                        table.remove(sub);
                    }
                }
            });
        }
        self.size_count[s] -= 1;
        self.ids.remove(&t);
        self.edges[idx] = t;
    }

    /// Live edges containing `t`, cleaning dead ids from the index on the way.
    fn supersets_of(&mut self, t: &[u32]) -> Vec<u32> {
        let list = &mut self.incidence[t[0] as usize];
        let alive = &self.alive;
        list.retain(|&id| alive[id as usize]);
        list.iter().copied().filter(|&id| contains_sorted(&self.edges[id as usize], t)).collect()
    }

    fn units(&self, sizes: impl Iterator<Item = usize>) -> BigUint {
        let mut acc = BigUint::zero();
        for s in sizes {
            if self.size_count[s] > 0 {
                acc += &self.params.wcoef[s] * self.size_count[s];
            }
        }
        acc
    }

    /// `w_p(H^{>1})` in units of `b^{-r}`.
    fn upper_weight(&self) -> BigUint {
        self.units(2..=self.params.r)
    }

    /// `w_p(H^{<r})` in units of `b^{-r}`.
    fn lower_weight(&self) -> BigUint {
        self.units(1..self.params.r)
    }

    fn qualifies(&self, s: usize, l: usize, d: u32) -> bool {
        self.params.select_min[s][l].is_some_and(|m| u64::from(d) >= m)
    }

    /// Smallest `s` with a qualifying link, and the canonical
    /// inclusion-maximal `L` for it.
    fn choose(&self) -> Option<(usize, Tuple)> {
        for s in 2..=self.params.r {
            let Some(mut l) = self.least_qualifying(s, 1, |_| true) else { continue };
            while let Some(next) = self.least_qualifying(s, l.len() + 1, |t| contains_sorted(t, &l)) {
                l = next;
            }
            return Some((s, l));
        }
        None
    }

    /// The `(size, lex)`-least qualifying `T` with `|T| ≥ from` and `filter(T)`.
    fn least_qualifying(&self, s: usize, from: usize, filter: impl Fn(&[u32]) -> bool) -> Option<Tuple> {
        for l in from..s {
            let best = self.deg[s][l]
                .iter()
                .filter(|(t, &d)| self.qualifies(s, l, d) && filter(t) && !self.ids.contains_key(*t))
                .map(|(t, _)| t)
                .min();
            if let Some(t) = best {
                return Some(t.clone());
            }
        }
        None
    }

    /// `F_i`: `∂_L H^s` on the inside branch, `{L}` otherwise; sorted.
    fn update_sets(&self, step: &Step, inside: bool) -> (usize, Vec<Tuple>) {
        let l = tuple(&step.set);
        let s = step.s.expect("cover steps carry s");
        if !inside {
            return (s, vec![l]);
        }
        let mut out: Vec<Tuple> = self.incidence[l[0] as usize]
            .iter()
            .filter(|&&id| self.alive[id as usize])
            .map(|&id| &self.edges[id as usize])
            .filter(|e| e.len() == s && contains_sorted(e, &l))
            .map(|e| e.iter().copied().filter(|v| !l.contains(v)).collect())
            .collect();
        out.sort_unstable();
        (s, out)
    }

    fn check_state(&self, checks: &mut Checks) {
        let r = self.params.r;
        let mut worst: Option<(usize, Tuple, u32)> = None;
        for s in 2..r {
            for l in 1..s {
                let cap = self.params.link_max[s][l];
                for (t, &d) in &self.deg[s][l] {
                    if u64::from(d) > cap && worst.is_none() {
                        worst = Some((s, t.clone(), d));
                    }
                }
            }
        }
        checks.record(LINK_WEIGHT, worst.is_none(), || {
            let (s, t, d) = worst.clone().unwrap();
            format!("round {}: L={} s={s} has {d} edges in its link", self.round, to_set(&t))
        });
    }

    /// Some `v ∈ C_i` and `s` with `w_p(∂_v H_i^s) ≥ 1/r`.
    fn has_heavy_vertex(&self) -> bool {
        (2..=self.params.r).any(|s| {
            let Some(m) = self.params.heavy_min[s][1] else { return false };
            self.deg[s][1].iter().any(|(t, &d)| u64::from(d) >= m && !self.blocked.contains(t[0] as usize))
        })
    }

    fn pre_checks(&self, f: &[Tuple], s: usize, checks: &mut Checks) {
        let round = self.round;
        let hit = f.iter().find(|t| {
            let mut found = self.ids.contains_key(*t);
            for_each_proper_subset(t, |sub| found = found || self.ids.contains_key(sub));
            found
        });
        checks.record(UPSET_GROWTH, !f.is_empty() && hit.is_none(), || match hit {
            Some(t) => format!("round {round}: new edge {} already lies in the up-set", to_set(t)),
            None => format!("round {round}: no new edges"),
        });
        let u = f.first().map_or(0, |t| t.len());
        checks.record(UPDATE_UNIFORM, f.iter().all(|t| t.len() == u) && u < s, || {
            let sets: Vec<VertexSet> = f.iter().map(|t| to_set(t)).collect();
            format!("round {round}: s={s}, F={}", describe_sets(&sets))
        });
    }

    fn post_checks(&mut self, f: &[Tuple], before: &BigUint, inside: bool, checks: &mut Checks) {
        let round = self.round;
        let mut bad: Option<Tuple> = None;
        for t in f {
            let mut found = false;
            for_each_proper_subset(t, |sub| found = found || self.ids.contains_key(sub));
            let above = self.supersets_of(t).into_iter().any(|id| self.edges[id as usize].len() > t.len());
            if (found || above) && bad.is_none() {
                bad = Some(t.clone());
            }
        }
        checks.record(ANTICHAIN, bad.is_none(), || {
            format!("round {round}: new edge {} is comparable to a live edge", to_set(bad.as_ref().unwrap()))
        });
        let after = self.lower_weight();
        let eight_r = BigUint::from(8 * self.params.r);
        let need = if inside { &self.params.b_pow_r + before * &eight_r } else { before * &eight_r };
        checks.record(WEIGHT_INCREASE, &after * &eight_r >= need, || {
            format!("round {round}: w_p(H^<r) went from {before} to {after} (units of b^-r), inside={inside}")
        });
    }
}

impl Runner for CoverState {
    const IDS: Ids = IDS;

    fn select(&mut self, _s: &VertexSet, checks: &mut Checks) -> Result<Option<Step>> {
        let c = self.blocked_complement_len();
        let w = self.upper_weight();
        let bound = &self.params.p_units * c;
        let stop = match &self.params.logr {
            None => w <= bound,
            Some(lr) => {
                &w * BigUint::from(self.params.r) * &lr.ln_den <= &lr.ln_num * &bound || rational::int(c) <= lr.cut
            }
        };
        let heavy = w >= bound;
        let choice = if !stop || (checks.enabled() && heavy) { self.choose() } else { None };
        if checks.enabled() {
            self.check_state(checks);
            if heavy {
                let round = self.round;
                checks.record(HEAVY_LINK, choice.is_some() && self.has_heavy_vertex(), || {
                    format!("round {round}: w_p(H^>1) ≥ p|C| but no heavy link")
                });
            }
        }
        if stop {
            return Ok(None);
        }
        let (s, l) = choice
            .ok_or_else(|| Error::Internal(format!("round {}: stop test failed but no link is heavy", self.round)))?;
        Ok(Some(Step { set: to_set(&l), s: Some(s) }))
    }

    fn apply(&mut self, step: &Step, inside: bool, _s: &VertexSet, checks: &mut Checks) -> Result<Vec<VertexSet>> {
        let (s, f) = self.update_sets(step, inside);
        let before = if checks.enabled() {
            self.pre_checks(&f, s, checks);
            Some(self.lower_weight())
        } else {
            None
        };
        for t in &f {
            for id in self.supersets_of(t) {
                self.remove(id);
            }
        }
        for t in &f {
            self.insert(t.clone());
        }
        if let Some(before) = before {
            self.post_checks(&f, &before, inside, checks);
        }
        self.round += 1;
        Ok(f.iter().map(|t| to_set(t)).collect())
    }

    fn fork_inside(&self, step: &Step, _s: &VertexSet, checks: &mut Checks) -> Result<(Self, Vec<VertexSet>)> {
        // Rebuild the child from the surviving edges instead of cloning the
        // whole state: inside updates usually delete most of it.
        let (s, f) = self.update_sets(step, true);
        if checks.enabled() {
            self.pre_checks(&f, s, checks);
        }
        let fset: HashSet<&[u32]> = f.iter().map(|t| &t[..]).collect();
        let mut newly_blocked = VertexSet::new();
        for t in f.iter().filter(|t| t.len() == 1) {
            newly_blocked.insert(t[0] as usize);
        }
        let next_c = self.unblocked().difference(&newly_blocked);
        let survives = |e: &Tuple| {
            let mut hit = fset.contains(&e[..]);
            for_each_proper_subset(e, |sub| hit = hit || fset.contains(sub));
            !hit
        };
        let mut child = Self::empty(self.params.clone());
        for v in &self.blocked {
            child.insert(SmallVec::from_slice(&[v as u32]));
        }
        let via_index: usize = next_c.iter().map(|v| self.incidence[v].len()).sum();
        if via_index < self.edges.len() {
            for v in &next_c {
                for &id in &self.incidence[v] {
                    let e = &self.edges[id as usize];
                    if self.alive[id as usize] && e.len() >= 2 && e[0] as usize == v && survives(e) {
                        child.insert(e.clone());
                    }
                }
            }
        } else {
            for (id, e) in self.edges.iter().enumerate() {
                if self.alive[id] && e.len() >= 2 && survives(e) {
                    child.insert(e.clone());
                }
            }
        }
        for t in &f {
            child.insert(t.clone());
        }
        child.round = self.round;
        if checks.enabled() {
            let before = self.lower_weight();
            child.post_checks(&f, &before, true, checks);
        }
        child.round += 1;
        Ok((child, f.iter().map(|t| to_set(t)).collect()))
    }

    fn unblocked(&self) -> VertexSet {
        self.params.ground.difference(&self.blocked)
    }

    fn output_hypergraph(&self) -> Option<Hypergraph> {
        let edges =
            self.edges.iter().zip(&self.alive).filter(|(e, &a)| a && e.len() >= 2).map(|(e, _)| to_set(e)).collect();
        Some(Hypergraph::from_trusted(self.params.n, self.params.ground.clone(), edges))
    }
}

impl CoverState {
    fn blocked_complement_len(&self) -> usize {
        self.params.ground.len() - self.size_count.get(1).copied().unwrap_or(0)
    }
}

/// Step (2c) of the cover algorithm on a given `H_i`: the smallest
/// `s ∈ {2..r}` admitting a nonempty `L ∉ H_i` with
/// `w_p(∂_L H_i^s) ≥ 1/(4r)`, and the canonical inclusion-maximal such `L`.
///
/// `r` is the uniformity of the original hypergraph; `H_i` itself need not
/// be uniform but may not have edges larger than `r`.
pub fn select_cover_branch(h_i: &Hypergraph, p: &Rational, r: usize) -> Result<Option<(usize, VertexSet)>> {
    if !rational::is_in_unit_interval(p) || p.is_zero() {
        return Err(Error::param("p", "must lie in (0, 1]"));
    }
    if r == 0 {
        return Err(Error::param("r", "must be positive"));
    }
    let params = Params::new(h_i.n(), h_i.ground().clone(), p, r, &StopRule::Standard)?;
    let state = CoverState::from_hypergraph(h_i, params)?;
    Ok(state.choose().map(|(s, l)| (s, to_set(&l))))
}
