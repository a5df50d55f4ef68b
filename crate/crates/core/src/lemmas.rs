//! Output-level guarantees of the three container lemmas, checked exactly
//! on each `(S, C, G)` of a family.
//!
//! Check identifiers:
//!
//! | id | claim |
//! |----|-------|
//! | `cover/covers` | `G` covers `H[C]` |
//! | `cover/min-edge-size` | every edge of `G` has at least two vertices |
//! | `cover/weight` | `w_p(G) ≤ p|C|` (or the log-r stopping condition) |
//! | `cover/fingerprint-size` | `|S| ≤ 8r²p|V|`, or `16 r ln r · p|V|` under the log-r rule |
//! | `hardcore/fingerprint-size` | `δ|S| ≤ p|V|` |
//! | `hardcore/probability` | `Pr(S ∪ C_p ∈ I(H)) ≥ (1-p)^{δ|C\S|}` |
//! | `interpolating/covers`, `interpolating/min-edge-size` | as for cover mode |
//! | `interpolating/disjoint-output` | `E ∩ S = ∅` for `E ∈ G` |
//! | `interpolating/fingerprint-size` | `|S| ≤ p|V|/δ` |
//! | `interpolating/conditional` | `Pr(L ⊆ C_p | C_p ∈ I(G)) ≥ ((1-δ)p)^{|L|}` for all `L ∈ I(G)` |
//!
//! Per-round checks (antichain, up-set growth, sandwich, ...) are produced
//! by the builders themselves when checks are enabled.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::certified::{self, PowOrdering};
use crate::containers::{describe_sets, AlgorithmParams, Family, FamilyEntry, Mode, StopRule};
use crate::exact::{Compact, Engine, SupersetTable, Weigher};
use crate::rational::{self, Rational};
use crate::{Error, Hypergraph, Limits, Result, VerificationReport, VertexSet};

/// Checks one family entry against the guarantees of its mode.
pub fn check_entry(
    h: &Hypergraph,
    params: &AlgorithmParams,
    entry: &FamilyEntry,
    limits: &Limits,
    report: &mut VerificationReport,
) -> Result<()> {
    let r = params.validate(h)?;
    match params.mode {
        Mode::Cover => check_cover_entry(h, params, r, entry, report),
        Mode::Hardcore => check_hardcore_entry(h, params, entry, limits, report),
        Mode::Interpolating => check_interpolating_entry(h, params, entry, limits, report),
    }
}

/// Entry checks for every container of `family`, plus the per-input walk
/// (`S_i ⊆ I ⊆ C_i` and independence in every `H_i`) for each of `inputs`.
pub fn verify_family(
    family: &Family,
    params: &AlgorithmParams,
    limits: &Limits,
    inputs: impl IntoIterator<Item = VertexSet>,
) -> Result<VerificationReport> {
    let mut report = family.report().clone();
    for entry in family.entries() {
        check_entry(family.hypergraph(), params, entry, limits, &mut report)?;
    }
    for i in inputs {
        family.check_input(&i, &mut report)?;
    }
    Ok(report)
}

fn g_of(entry: &FamilyEntry) -> Result<&Hypergraph> {
    entry.g.as_ref().ok_or_else(|| Error::Internal("entry has no cover".into()))
}

fn record_cover_shape(
    report: &mut VerificationReport,
    prefix: Mode,
    h: &Hypergraph,
    entry: &FamilyEntry,
) -> Result<()> {
    let g = g_of(entry)?;
    let (covers, min_size) = match prefix {
        Mode::Cover => ("cover/covers", "cover/min-edge-size"),
        _ => ("interpolating/covers", "interpolating/min-edge-size"),
    };
    let target = h.restrict(&entry.c);
    report.record(covers, g.covers(&target), || format!("S={}: G does not cover H[C] for C={}", entry.s, entry.c));
    let small: Vec<VertexSet> = g.edges().iter().filter(|e| e.len() < 2).cloned().collect();
    report.record(min_size, small.is_empty(), || format!("S={}: G has edges {}", entry.s, describe_sets(&small)));
    Ok(())
}

fn check_cover_entry(
    h: &Hypergraph,
    params: &AlgorithmParams,
    r: usize,
    entry: &FamilyEntry,
    report: &mut VerificationReport,
) -> Result<()> {
    record_cover_shape(report, Mode::Cover, h, entry)?;
    let g = g_of(entry)?;
    let p = &params.p;
    let w = g.weight(p)?;
    let c = rational::int(entry.c.len());
    let v = rational::int(h.vertex_count());
    let s = rational::int(entry.s.len());
    match &params.stop_rule {
        StopRule::Standard => {
            report.record("cover/weight", w <= p * &c, || {
                format!("S={}: w_p(G)={} > p|C|={}", entry.s, rational::format(&w), rational::format(&(p * &c)))
            });
            let cap = rational::int(8 * r * r) * p * &v;
            report.record("cover/fingerprint-size", s <= cap, || {
                format!("|S|={} > 8r²p|V|={}", entry.s.len(), rational::format(&cap))
            });
        }
        StopRule::LogR { k } => {
            // A lower bound on ln r makes both tests at least as strict as the claim.
            let ln = certified::ln_lower(&rational::int(r), 64)?;
            let ln = ln.max(Rational::from_integer(0.into()));
            let rr = rational::int(r);
            let one = Rational::one();
            let cut = (&one - &one / (rational::int(2) * k)) * &v;
            let ok = w <= &ln / &rr * p * &c || c <= cut;
            report.record("cover/weight", ok, || format!("S={}: log-r stopping condition fails", entry.s));
            let cap = rational::int(16) * &rr * &ln * p * &v;
            report.record("cover/fingerprint-size", s <= cap, || {
                format!("|S|={} > 16 r ln r p|V| ≈ {}", entry.s.len(), rational::to_f64(&cap))
            });
        }
    }
    Ok(())
}

fn check_hardcore_entry(
    h: &Hypergraph,
    params: &AlgorithmParams,
    entry: &FamilyEntry,
    limits: &Limits,
    report: &mut VerificationReport,
) -> Result<()> {
    let p = &params.p;
    let delta = params.delta()?;
    let v = rational::int(h.vertex_count());
    let s = rational::int(entry.s.len());
    report.record("hardcore/fingerprint-size", delta * &s <= p * &v, || {
        format!("δ|S|={} > p|V|={}", rational::format(&(delta * &s)), rational::format(&(p * &v)))
    });
    let engine = Engine::new(*limits);
    let prob = engine.prob_with_forced(h, p, &entry.s, &entry.c)?;
    let exponent = delta * rational::int(entry.c.difference(&entry.s).len());
    let base = Rational::one() - p;
    let ord = certified::compare_pow(&prob, &base, &exponent)?;
    report.record("hardcore/probability", ord.is_ge(), || {
        format!(
            "S={} C={}: Pr={} vs (1-p)^{} ({ord:?})",
            entry.s,
            entry.c,
            rational::format(&prob),
            rational::format(&exponent)
        )
    });
    Ok(())
}

fn check_interpolating_entry(
    h: &Hypergraph,
    params: &AlgorithmParams,
    entry: &FamilyEntry,
    limits: &Limits,
    report: &mut VerificationReport,
) -> Result<()> {
    record_cover_shape(report, Mode::Interpolating, h, entry)?;
    let g = g_of(entry)?;
    let p = &params.p;
    let delta = params.delta()?;
    let meets: Vec<VertexSet> = g.edges().iter().filter(|e| e.intersects(&entry.s)).cloned().collect();
    report.record("interpolating/disjoint-output", meets.is_empty(), || {
        format!("S={} meets {}", entry.s, describe_sets(&meets))
    });
    let v = rational::int(h.vertex_count());
    let s = rational::int(entry.s.len());
    report.record("interpolating/fingerprint-size", delta * &s <= p * &v, || format!("|S|={} > p|V|/δ", entry.s.len()));
    match conditional_violation(g, &entry.c, p, delta, limits)? {
        None => report.pass("interpolating/conditional"),
        Some(l) => {
            report.fail("interpolating/conditional", format!("S={} C={}: L={l} is too unlikely", entry.s, entry.c))
        }
    }
    Ok(())
}

/// First `L ∈ I(G)` (over ground `C`) with
/// `Pr(L ⊆ C_p | C_p ∈ I(G)) < ((1-δ)p)^{|L|}`, if any.
pub fn conditional_violation(
    g: &Hypergraph,
    c: &VertexSet,
    p: &Rational,
    delta: &Rational,
    limits: &Limits,
) -> Result<Option<VertexSet>> {
    let k = c.len();
    let limit = limits.subset_search_n.min(Limits::HARD_CEILING);
    if k > limit {
        return Err(Error::Guard { what: "conditional check over I(G)", n: k, limit });
    }
    let compact = Compact::new(g, c)?;
    let table = SupersetTable::build(k, &compact.edges);
    let w = Weigher::new(p, k);
    let z = w.eval_u32(table.row(0), 0);
    let q = (Rational::one() - delta) * p;
    let (qn, qd) = (rational::numer_u(&q), rational::denom_u(&q));
    let qn_pows: Vec<BigUint> = (0..=k).map(|j| Pow::pow(&qn, j as u64) * &z).collect();
    let qd_pows: Vec<BigUint> = (0..=k).map(|j| Pow::pow(&qd, j as u64)).collect();
    for mask in 1u64..(1u64 << k) {
        if !table.is_independent(mask) {
            continue;
        }
        let j = mask.count_ones() as usize;
        if w.eval_u32(table.row(mask), 0) * &qd_pows[j] < qn_pows[j] {
            return Ok(Some(compact.set(mask)));
        }
    }
    Ok(None)
}

/// Exact `Pr ≥ (1-p)^x` comparison used by the hard-core probability check.
pub fn probability_at_least_power(prob: &Rational, p: &Rational, x: &Rational) -> Result<PowOrdering> {
    certified::compare_pow(prob, &(Rational::one() - p), x)
}
