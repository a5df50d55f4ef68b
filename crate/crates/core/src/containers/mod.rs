//! The three container algorithms and the family builder.
//!
//! Each algorithm repeatedly asks "is `L ⊆ I`?" for a deterministically
//! chosen query set `L`, growing a fingerprint `S ⊆ I` and a hypergraph whose
//! unblocked vertices form the container `C ⊇ I`. All tie-breaks follow the
//! canonical `(size, lex)` order on vertex sets.

mod cover;
mod family;
mod hardcore;
mod interpolating;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed};

use crate::rational::{self, Rational};
use crate::report::Checks;
use crate::{Error, Hypergraph, Limits, Result, VerificationReport, VertexSet};

pub use cover::select_cover_branch;
pub use family::{Family, FamilyEntry, FamilyOptions};
pub use hardcore::select_hardcore_vertex;
pub use interpolating::select_interpolating_set;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Cover,
    Hardcore,
    Interpolating,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Cover => "cover",
            Mode::Hardcore => "hardcore",
            Mode::Interpolating => "interpolating",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "cover" => Some(Mode::Cover),
            "hardcore" => Some(Mode::Hardcore),
            "interpolating" => Some(Mode::Interpolating),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Stopping rule of the cover algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopRule {
    /// Stop once `w_p(H_i^{>1}) ≤ p|C_i|`.
    Standard,
    /// Stop once `w_p(H_i^{>1}) ≤ (ln r / r) p|C_i|` or `|C_i| ≤ (1 - 1/(2K))|V|`.
    LogR { k: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmParams {
    pub mode: Mode,
    pub p: Rational,
    /// Required by the hard-core and interpolating modes, unused by cover.
    pub delta: Option<Rational>,
    pub stop_rule: StopRule,
}

impl AlgorithmParams {
    pub fn cover(p: Rational) -> Self {
        Self { mode: Mode::Cover, p, delta: None, stop_rule: StopRule::Standard }
    }

    pub fn cover_logr(p: Rational, k: Rational) -> Self {
        Self { mode: Mode::Cover, p, delta: None, stop_rule: StopRule::LogR { k } }
    }

    pub fn hardcore(p: Rational, delta: Rational) -> Self {
        Self { mode: Mode::Hardcore, p, delta: Some(delta), stop_rule: StopRule::Standard }
    }

    pub fn interpolating(p: Rational, delta: Rational) -> Self {
        Self { mode: Mode::Interpolating, p, delta: Some(delta), stop_rule: StopRule::Standard }
    }

    /// The `δ` of the probabilistic modes.
    pub fn delta(&self) -> Result<&Rational> {
        self.delta.as_ref().ok_or_else(|| Error::param("delta", format!("{} mode needs delta", self.mode)))
    }

    /// Checks the parameters against `H`. For cover mode returns the
    /// uniformity `r` (an edgeless hypergraph counts as 1-uniform); the other
    /// modes return the rank.
    pub fn validate(&self, h: &Hypergraph) -> Result<usize> {
        match self.mode {
            Mode::Cover => {
                if self.delta.is_some() {
                    return Err(Error::param("delta", "cover mode takes no delta"));
                }
                let r = match h.uniformity() {
                    Some(r) => r,
                    None if h.is_empty() => 1,
                    None => return Err(Error::NotUniform),
                };
                let cap = rational::ratio(1, 8 * (r * r) as i64);
                if !self.p.is_positive() || self.p > cap {
                    return Err(Error::param(
                        "p",
                        format!("cover mode needs 0 < p ≤ 1/(8r²) = {}", rational::format(&cap)),
                    ));
                }
                if let StopRule::LogR { k } = &self.stop_rule {
                    if *k < rational::int(r) {
                        return Err(Error::param("K", format!("the log-r rule needs K ≥ r = {r}")));
                    }
                }
                Ok(r)
            }
            Mode::Hardcore | Mode::Interpolating => {
                if self.stop_rule != StopRule::Standard {
                    return Err(Error::param("stop_rule", "only cover mode has a stop rule"));
                }
                let d = self.delta()?;
                if !self.p.is_positive() || self.p > *d || *d >= Rational::one() {
                    return Err(Error::param("p", "needs 0 < p ≤ delta < 1"));
                }
                Ok(h.rank())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    InsideI,
    OutsideI,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::InsideI => "inside_I",
            Branch::OutsideI => "outside_I",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub round: usize,
    /// `L_i`, or `{v_i}` in hard-core mode.
    pub chosen: VertexSet,
    /// `s_i` (cover mode only).
    pub s: Option<usize>,
    pub branch: Branch,
    pub fingerprint_size_after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainerOutput {
    pub s: VertexSet,
    pub c: VertexSet,
    /// `H_J^{>1}` in cover mode, `H_J[C]` in interpolating mode.
    pub g: Option<Hypergraph>,
    pub trace: Vec<TraceStep>,
    pub rounds: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildOptions {
    pub limits: Limits,
    /// Evaluate the per-round invariants and collect them in a report.
    pub checks: bool,
    /// Round watchdog; defaults to `3^n` (saturating).
    pub max_rounds: Option<usize>,
}

impl BuildOptions {
    pub fn checked() -> Self {
        Self { checks: true, ..Self::default() }
    }

    pub(crate) fn watchdog(&self, n: usize) -> usize {
        self.max_rounds.unwrap_or_else(|| {
            let mut cap: usize = 1;
            for _ in 0..n {
                cap = cap.saturating_mul(3);
            }
            cap
        })
    }
}

/// Output of a single run together with the invariant report (empty when
/// checks are off).
#[derive(Debug, Clone)]
pub struct Run {
    pub output: ContainerOutput,
    pub report: VerificationReport,
}

/// Next query chosen by an algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Step {
    pub set: VertexSet,
    pub s: Option<usize>,
}

/// Check identifiers shared by the generic driver.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ids {
    pub sandwich: &'static str,
    pub contained: &'static str,
    pub determinism: &'static str,
    pub rerun: &'static str,
    pub termination: &'static str,
    /// Whether the round count is bounded by `|V|` rather than the watchdog.
    pub rounds_at_most_n: bool,
}

/// One container algorithm, as a state machine over `H_i`.
pub(crate) trait Runner: Sized {
    const IDS: Ids;

    /// Picks the next query given the fingerprint so far, or `None` to stop.
    fn select(&mut self, s: &VertexSet, checks: &mut Checks) -> Result<Option<Step>>;

    /// Moves to `H_{i+1}` along the given branch and returns the sets added
    /// to the hypergraph, which contain every edge of `H_{i+1}` not in `H_i`.
    fn apply(&mut self, step: &Step, inside: bool, s: &VertexSet, checks: &mut Checks) -> Result<Vec<VertexSet>>;

    /// The inside child as a separate state; `self` is left untouched.
    fn fork_inside(&self, step: &Step, s: &VertexSet, checks: &mut Checks) -> Result<(Self, Vec<VertexSet>)>;

    /// `C_i`.
    fn unblocked(&self) -> VertexSet;

    fn output_hypergraph(&self) -> Option<Hypergraph>;
}

pub(crate) fn record_sandwich(
    checks: &mut Checks,
    ids: &Ids,
    s: &VertexSet,
    i: &VertexSet,
    c: &VertexSet,
    round: usize,
) {
    checks.record(ids.sandwich, s.is_subset(i) && i.is_subset(c), || format!("round {round}: S={s} I={i} C={c}"));
}

pub(crate) fn record_added_independent(
    checks: &mut Checks,
    ids: &Ids,
    added: &[VertexSet],
    i: &VertexSet,
    round: usize,
) {
    let hit = added.iter().find(|f| f.is_subset(i));
    checks.record(ids.sandwich, hit.is_none(), || format!("round {round}: I={i} contains new edge {}", hit.unwrap()));
}

pub(crate) fn record_termination(checks: &mut Checks, ids: &Ids, rounds: usize, n: usize) {
    if ids.rounds_at_most_n {
        checks.record(ids.termination, rounds <= n, || format!("{rounds} rounds on {n} vertices"));
    } else {
        checks.record(ids.termination, true, String::new);
    }
}

fn drive<R: Runner>(
    mut state: R,
    i: &VertexSet,
    n: usize,
    opts: &BuildOptions,
    checks: &mut Checks,
) -> Result<ContainerOutput> {
    let watchdog = opts.watchdog(n);
    let mut s = VertexSet::new();
    let mut trace: Vec<TraceStep> = Vec::new();
    loop {
        let round = trace.len();
        if checks.enabled() {
            record_sandwich(checks, &R::IDS, &s, i, &state.unblocked(), round);
        }
        let Some(step) = state.select(&s, checks)? else { break };
        if round >= watchdog {
            return Err(Error::Watchdog { rounds: round });
        }
        let inside = step.set.is_subset(i);
        let added = state.apply(&step, inside, &s, checks)?;
        if checks.enabled() {
            record_added_independent(checks, &R::IDS, &added, i, round);
        }
        let branch = if inside {
            s.union_with(&step.set);
            Branch::InsideI
        } else {
            Branch::OutsideI
        };
        trace.push(TraceStep { round, chosen: step.set, s: step.s, branch, fingerprint_size_after: s.len() });
    }
    let c = state.unblocked();
    if checks.enabled() {
        record_termination(checks, &R::IDS, trace.len(), n);
        checks.record(R::IDS.contained, s.is_subset(i) && i.is_subset(&c), || format!("S={s} I={i} C={c}"));
    }
    Ok(ContainerOutput { g: state.output_hypergraph(), s, c, rounds: trace.len(), trace })
}

fn check_input(h: &Hypergraph, i: &VertexSet) -> Result<()> {
    h.check_subset_of_ground(i)?;
    if !h.is_independent(i) {
        return Err(Error::NotIndependent);
    }
    Ok(())
}

/// Runs the algorithm selected by `params.mode` on input `I`.
pub fn build_container(h: &Hypergraph, params: &AlgorithmParams, i: &VertexSet, opts: &BuildOptions) -> Result<Run> {
    let r = params.validate(h)?;
    check_input(h, i)?;
    let mut checks = if opts.checks { Checks::on() } else { Checks::off() };
    let n = h.vertex_count();
    let output = match params.mode {
        Mode::Cover => {
            let state = cover::CoverState::start(h, params, r, &mut checks)?;
            drive(state, i, n, opts, &mut checks)?
        }
        Mode::Hardcore => {
            let state = hardcore::HardcoreState::start(h, params, opts.limits)?;
            drive(state, i, n, opts, &mut checks)?
        }
        Mode::Interpolating => {
            let state = interpolating::InterpolatingState::start(h, params, opts.limits)?;
            drive(state, i, n, opts, &mut checks)?
        }
    };
    Ok(Run { output, report: checks.report.unwrap_or_default() })
}

pub fn build_cover_container(h: &Hypergraph, params: &AlgorithmParams, i: &VertexSet) -> Result<ContainerOutput> {
    expect_mode(params, Mode::Cover)?;
    Ok(build_container(h, params, i, &BuildOptions::default())?.output)
}

pub fn build_hardcore_container(h: &Hypergraph, params: &AlgorithmParams, i: &VertexSet) -> Result<ContainerOutput> {
    expect_mode(params, Mode::Hardcore)?;
    Ok(build_container(h, params, i, &BuildOptions::default())?.output)
}

pub fn build_interpolating_container(
    h: &Hypergraph,
    params: &AlgorithmParams,
    i: &VertexSet,
) -> Result<ContainerOutput> {
    expect_mode(params, Mode::Interpolating)?;
    Ok(build_container(h, params, i, &BuildOptions::default())?.output)
}

/// Builds the whole family `S ↦ (C, G)` by exploring the decision tree of
/// the algorithm; see [`Family`].
pub fn build_family(h: &Hypergraph, params: &AlgorithmParams, opts: &FamilyOptions) -> Result<Family> {
    family::build(h, params, opts)
}

fn expect_mode(params: &AlgorithmParams, mode: Mode) -> Result<()> {
    if params.mode != mode {
        return Err(Error::param("mode", format!("expected {mode} parameters, got {}", params.mode)));
    }
    Ok(())
}

pub(crate) fn describe_sets(sets: &[VertexSet]) -> String {
    let parts: Vec<String> = sets.iter().map(|s| format!("{s}")).collect();
    format!("[{}]", parts.join(","))
}
