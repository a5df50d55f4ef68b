//! The verification suites. Each suite runs a fixed battery of exact checks
//! on one instance; corpora fan out over a rayon pool.

use std::time::Instant;

use container_lab_core::bounds::{self, EfficientParams};
use container_lab_core::certified;
use container_lab_core::containers::{build_family, AlgorithmParams, BuildOptions, FamilyOptions};
use container_lab_core::exact::Engine;
use container_lab_core::lemmas::verify_family;
use container_lab_core::rational::{self, ratio};
use container_lab_core::{Error, Hypergraph, Limits, Rational, Result, VerificationReport, VertexSet};
use rayon::prelude::*;

use crate::corpus::Instance;
use crate::generators::random_independent_sets;
use crate::report::{ContainerRecord, InstanceReport, Status, TraceRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Suite {
    CoverLemmas,
    HardcoreLemmas,
    InterpolatingLemmas,
    Prop21,
    Prop23,
    Janson,
    Lymb,
    Efficient,
    Packaged,
    Crosscheck,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::CoverLemmas,
        Suite::HardcoreLemmas,
        Suite::InterpolatingLemmas,
        Suite::Prop21,
        Suite::Prop23,
        Suite::Janson,
        Suite::Lymb,
        Suite::Efficient,
        Suite::Packaged,
        Suite::Crosscheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CoverLemmas => "cover-lemmas",
            Suite::HardcoreLemmas => "hardcore-lemmas",
            Suite::InterpolatingLemmas => "interpolating-lemmas",
            Suite::Prop21 => "prop21",
            Suite::Prop23 => "prop23",
            Suite::Janson => "janson",
            Suite::Lymb => "lymb",
            Suite::Efficient => "efficient",
            Suite::Packaged => "packaged",
            Suite::Crosscheck => "crosscheck",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub limits: Limits,
    /// Overrides the suite's default density (or densities).
    pub p: Option<Rational>,
    /// Overrides the suite's default δ; used with `p`.
    pub delta: Option<Rational>,
    pub seed: u64,
    /// Independent sets are enumerated up to this many vertices...
    pub enumerate_max: usize,
    /// ...and sampled (this many) above it.
    pub input_samples: usize,
    pub trials: usize,
    pub efficient: EfficientParams,
    pub rerun_limit: Option<usize>,
    /// Record containers and the trace of `I = ∅` in the report.
    pub detail: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            limits: Limits::default(),
            p: None,
            delta: None,
            seed: 0,
            enumerate_max: 18,
            input_samples: 100,
            trials: 1000,
            efficient: EfficientParams::new(ratio(3, 10), rational::int(2)),
            rerun_limit: Some(64),
            detail: false,
        }
    }
}

impl SuiteConfig {
    fn family_options(&self) -> FamilyOptions {
        let build = BuildOptions { limits: self.limits, ..BuildOptions::checked() };
        FamilyOptions { build, rerun_limit: self.rerun_limit }
    }

    fn engine(&self) -> Engine {
        Engine::new(self.limits)
    }

    fn inputs(&self, h: &Hypergraph) -> Result<Vec<VertexSet>> {
        let n = h.vertex_count();
        if n <= self.enumerate_max.min(self.limits.enumerate_n) {
            self.engine().independent_sets(h)
        } else {
            Ok(random_independent_sets(h, self.input_samples, self.seed))
        }
    }

    fn densities(&self, defaults: Vec<Rational>) -> Vec<Rational> {
        match &self.p {
            Some(p) => vec![p.clone()],
            None => defaults,
        }
    }

    fn pairs(&self) -> Result<Vec<(Rational, Rational)>> {
        match (&self.p, &self.delta) {
            (Some(p), Some(d)) => Ok(vec![(p.clone(), d.clone())]),
            (None, None) => {
                Ok(vec![(ratio(1, 4), ratio(1, 4)), (ratio(1, 8), ratio(1, 4)), (ratio(1, 10), ratio(1, 2))])
            }
            _ => Err(Error::Parameter { name: "delta", detail: "give both p and delta, or neither".into() }),
        }
    }
}

fn uniformity(h: &Hypergraph) -> Result<usize> {
    match h.uniformity() {
        Some(r) => Ok(r),
        None if h.is_empty() => Ok(1),
        None => Err(Error::NotUniform),
    }
}

fn inv(k: usize) -> Rational {
    ratio(1, k as i64)
}

/// Runs one suite on one instance. Errors are reported in the instance
/// record, never propagated.
pub fn run_instance(suite: Suite, inst: &Instance, cfg: &SuiteConfig) -> InstanceReport {
    let start = Instant::now();
    let mut out = InstanceReport::new(&inst.name, &inst.h);
    out.digest = inst.digest.clone();
    let mut report = VerificationReport::new();
    match run_checks(suite, &inst.h, cfg, &mut report, &mut out) {
        Ok(()) => out.absorb(&report),
        Err(e) => {
            out.absorb(&report);
            out.fail_with_error(e);
        }
    }
    out.elapsed_ms = start.elapsed().as_millis() as u64;
    out
}

pub fn run_suite(suite: Suite, instances: &[Instance], cfg: &SuiteConfig) -> Vec<InstanceReport> {
    instances.par_iter().map(|inst| run_instance(suite, inst, cfg)).collect()
}

fn run_checks(
    suite: Suite,
    h: &Hypergraph,
    cfg: &SuiteConfig,
    report: &mut VerificationReport,
    out: &mut InstanceReport,
) -> Result<()> {
    match suite {
        Suite::CoverLemmas => {
            let r = uniformity(h)?;
            for (k, p) in cfg.densities(vec![inv(8 * r * r), inv(16 * r * r)]).into_iter().enumerate() {
                let params = AlgorithmParams::cover(p);
                run_family(h, &params, cfg, report, out, k == 0)?;
            }
        }
        Suite::HardcoreLemmas => {
            for (k, (p, d)) in cfg.pairs()?.into_iter().enumerate() {
                run_family(h, &AlgorithmParams::hardcore(p, d), cfg, report, out, k == 0)?;
            }
        }
        Suite::InterpolatingLemmas => {
            for (k, (p, d)) in cfg.pairs()?.into_iter().enumerate() {
                run_family(h, &AlgorithmParams::interpolating(p, d), cfg, report, out, k == 0)?;
            }
        }
        Suite::Crosscheck => {
            let r = uniformity(h)?;
            for p in cfg.densities(vec![inv(8 * r * r), inv(16 * r * r)]) {
                report.merge(bounds::crosscheck_hcl4_implies_hcl1(h, &p, &cfg.family_options())?);
            }
        }
        Suite::Prop21 => {
            let r = uniformity(h)?;
            let engine = cfg.engine();
            for p in cfg.densities(vec![inv(4 * r + 1), inv(8 * r)]) {
                let cover = match bounds::construct_cover(h, &p) {
                    Ok(c) => c,
                    Err(Error::Internal(msg)) => {
                        report.fail("prop21/chain", msg);
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                report.pass("prop21/chain");
                let g = &cover.g;
                report.record("prop21/covers", g.covers(h) && g.is_antichain(), || format!("p={p}"));
                let decision = bounds::cover_bound_holds(h, &p, &cover, &engine)?;
                report.record("prop21/probability", decision.holds(), || format!("p={p}: {decision:?}"));
                report.record("prop21/harris", bounds::harris_holds(h, g, &p, &engine)?, || format!("p={p}"));
                let harris = bounds::harris_bound(g, &p)?;
                let exp_ok = certified::ge_exp(&harris.product, &(-rational::int(2) * &harris.weight)).holds();
                report.record("prop21/harris-exp", exp_ok, || format!("p={p}"));
                if cfg.detail {
                    out.value(&format!("w_{{p/(4r²)}}(G) at p={p}"), &g.weight(&(&p / rational::int(4 * r * r)))?);
                }
            }
        }
        Suite::Janson => {
            let engine = cfg.engine();
            for p in cfg.densities(vec![ratio(1, 10), ratio(1, 4), ratio(1, 2)]) {
                let bound = bounds::janson_bound(h, &p)?;
                let prob = engine.prob_independent(h, &p)?;
                let decision = bound.dominates(&prob);
                report.record("janson/dominates", decision.holds(), || {
                    format!("p={p}: Pr={} vs bound≈{} ({decision:?})", rational::format(&prob), bound.bound_f64())
                });
                if cfg.detail {
                    out.value(&format!("mu at p={p}"), &bound.mu);
                    out.value(&format!("delta_star at p={p}"), &bound.delta_star);
                }
            }
        }
        Suite::Lymb => {
            let a = h.minimal_elements();
            let sum = bounds::lymb_sum(&a)?;
            report.record("lymb/sum", sum <= Rational::from_integer(1.into()), || rational::format(&sum));
            if cfg.detail {
                out.value("lymb_sum", &sum);
            }
        }
        Suite::Prop23 => {
            let engine = cfg.engine();
            let power_set = h.edges().iter().all(|e| e.len() == 1);
            for p in cfg.densities(vec![ratio(1, 10), ratio(1, 3), ratio(1, 2), ratio(9, 10)]) {
                let k = bounds::key_inequality_check(h, &p, &engine)?;
                report.record("key-inequality/holds", k.holds(), || {
                    format!(
                        "p={p}: Pr={} x={} ({:?})",
                        rational::format(&k.prob),
                        rational::format(&k.exponent),
                        k.ordering
                    )
                });
                if power_set {
                    report.record("key-inequality/equality", k.is_equality(), || format!("p={p}: {:?}", k.ordering));
                }
            }
        }
        Suite::Efficient => {
            if !bounds::efficient_assumptions_hold(h, &cfg.efficient)? {
                out.status = Status::Skipped;
                out.values.insert("skipped".into(), "degree assumptions do not hold".into());
                return Ok(());
            }
            report.merge(bounds::check_efficient_conclusion(h, &cfg.efficient, &cfg.family_options())?);
        }
        Suite::Packaged => {
            let r = uniformity(h)?;
            for p in cfg.densities(vec![inv(8 * r * r)]) {
                report.merge(bounds::check_packaged_conclusion(h, &p, cfg.trials, cfg.seed, &cfg.family_options())?);
            }
        }
    }
    Ok(())
}

fn run_family(
    h: &Hypergraph,
    params: &AlgorithmParams,
    cfg: &SuiteConfig,
    report: &mut VerificationReport,
    out: &mut InstanceReport,
    first: bool,
) -> Result<()> {
    let family = build_family(h, params, &cfg.family_options())?;
    let inputs = cfg.inputs(h)?;
    report.merge(verify_family(&family, params, &cfg.limits, inputs)?);
    if cfg.detail && first {
        out.containers = family.entries().iter().map(ContainerRecord::from).collect();
        let trace = family.trace(&VertexSet::new())?;
        out.trace = Some(trace.iter().map(TraceRecord::from).collect());
    }
    Ok(())
}
