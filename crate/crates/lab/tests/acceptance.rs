//! End-to-end acceptance run. Prints one `ACCEPTANCE <n> PASS|FAIL` line per
//! criterion and exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use container_lab::corpus;
use container_lab::generators as gen;
use container_lab::report::{InstanceReport, Status};
use container_lab::suites::{run_suite, Suite, SuiteConfig};
use container_lab_core::containers::{build_container, AlgorithmParams, BuildOptions};
use container_lab_core::exact::{mc_prob_independent, Engine};
use container_lab_core::rational::{self, int, pow, ratio};
use container_lab_core::{Hypergraph, Rational, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Tally {
    instances: usize,
    checks: BTreeMap<String, (u64, u64)>,
    problems: Vec<String>,
}

fn tally(reports: &[InstanceReport]) -> Tally {
    let mut t = Tally { instances: reports.len(), checks: BTreeMap::new(), problems: Vec::new() };
    for r in reports {
        if r.status != Status::Pass {
            t.problems.push(format!(
                "{} {:?}: {}",
                r.name,
                r.status,
                r.error.clone().unwrap_or_else(|| first_witness(r))
            ));
        }
        for c in &r.checks {
            let e = t.checks.entry(c.id.clone()).or_default();
            e.0 += c.checked;
            e.1 += c.failures;
        }
    }
    t
}

fn first_witness(r: &InstanceReport) -> String {
    r.checks
        .iter()
        .find(|c| c.failures > 0)
        .map(|c| format!("{}: {}", c.id, c.witness.clone().unwrap_or_default()))
        .unwrap_or_default()
}

impl Tally {
    fn require(&mut self, ids: &[&str]) {
        for id in ids {
            match self.checks.get(*id) {
                Some((n, _)) if *n > 0 => {}
                _ => self.problems.push(format!("check {id} never ran")),
            }
        }
    }

    fn total(&self) -> u64 {
        self.checks.values().map(|c| c.0).sum()
    }
}

fn suite(s: Suite) -> Tally {
    let instances = corpus::standard(s, 0).expect("standard corpus builds");
    tally(&run_suite(s, &instances, &SuiteConfig::default()))
}

fn within(start: Instant, limit: Duration, problems: &mut Vec<String>) {
    let took = start.elapsed();
    if took > limit {
        problems.push(format!("took {took:.1?}, limit {limit:?}"));
    }
}

fn verdict(problems: Vec<String>, ok: String) -> Outcome {
    if problems.is_empty() {
        Ok(ok)
    } else {
        Err(problems.into_iter().take(5).collect::<Vec<_>>().join("; "))
    }
}

const MIN: Duration = Duration::from_secs(60);

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let instances = corpus::standard(Suite::CoverLemmas, 0).unwrap();
    let mut problems = Vec::new();
    if instances.len() < 200 {
        problems.push(format!("only {} instances", instances.len()));
    }
    if instances.iter().any(|i| i.h.vertex_count() > 120) {
        problems.push("instance with more than 120 vertices".into());
    }
    let mut t = tally(&run_suite(Suite::CoverLemmas, &instances, &SuiteConfig::default()));
    t.require(&[
        "cover/antichain",
        "cover/upset-growth",
        "cover/update-uniform",
        "cover/link-weight",
        "cover/heavy-link-exists",
        "cover/weight-increase",
        "cover/covers",
        "cover/min-edge-size",
        "cover/weight",
        "cover/fingerprint-size",
        "cover/sandwich",
        "cover/contained",
        "cover/determinism",
        "cover/rerun",
    ]);
    problems.append(&mut t.problems);
    within(start, 5 * MIN, &mut problems);
    verdict(problems, format!("{} instances, {} exact checks", t.instances, t.total()))
}

fn criterion_2() -> Outcome {
    let h = gen::complete(100, 2).unwrap();
    let p = ratio(1, 32);
    let run = build_container(&h, &AlgorithmParams::cover(p.clone()), &VertexSet::new(), &BuildOptions::checked())
        .map_err(|e| e.to_string())?;
    let out = run.output;
    let w = out.g.as_ref().map(|g| g.weight(&p).unwrap());
    let mut problems = Vec::new();
    if out.rounds != 35 || out.trace.len() != 35 {
        problems.push(format!("{} rounds", out.rounds));
    }
    if out.c.len() != 65 {
        problems.push(format!("|C| = {}", out.c.len()));
    }
    if w != Some(ratio(65, 32)) || w != Some(&p * int(out.c.len())) {
        problems.push(format!("w_p(G) = {w:?}"));
    }
    if !run.report.all_passed() {
        problems.push(format!("{:?}", run.report.failures()));
    }
    verdict(problems, "35 rounds, |C| = 65, w_p(G) = 65/32 = p|C|".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let instances = corpus::standard(Suite::HardcoreLemmas, 0).unwrap();
    let mut problems = Vec::new();
    let nonuniform = instances.iter().filter(|i| i.h.uniformity().is_none() && !i.h.is_empty()).count();
    if instances.len() < 100 || nonuniform == 0 || instances.iter().any(|i| i.h.vertex_count() > 18) {
        problems.push(format!("corpus: {} instances, {nonuniform} non-uniform", instances.len()));
    }
    let mut t = tally(&run_suite(Suite::HardcoreLemmas, &instances, &SuiteConfig::default()));
    t.require(&["hardcore/fingerprint-size", "hardcore/probability", "hardcore/sandwich", "hardcore/rerun"]);
    problems.append(&mut t.problems);

    let star = gen::star(3);
    let params = AlgorithmParams::hardcore(ratio(1, 2), ratio(1, 2));
    for (i, s, c) in [
        (VertexSet::singleton(0), VertexSet::singleton(0), VertexSet::singleton(0)),
        (VertexSet::new(), VertexSet::new(), VertexSet::from([1, 2, 3])),
    ] {
        match build_container(&star, &params, &i, &BuildOptions::checked()) {
            Ok(run) if run.output.s == s && run.output.c == c => {}
            other => problems.push(format!("star golden for I={i}: {:?}", other.map(|r| (r.output.s, r.output.c)))),
        }
    }
    within(start, 5 * MIN, &mut problems);
    verdict(
        problems,
        format!("{} instances ({nonuniform} non-uniform), {} exact checks, star goldens", t.instances, t.total()),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let instances = corpus::standard(Suite::InterpolatingLemmas, 0).unwrap();
    if instances.len() < 50 || instances.iter().any(|i| i.h.vertex_count() > 14) {
        problems.push(format!("corpus has {} instances", instances.len()));
    }
    let mut t = tally(&run_suite(Suite::InterpolatingLemmas, &instances, &SuiteConfig::default()));
    t.require(&[
        "interpolating/covers",
        "interpolating/min-edge-size",
        "interpolating/disjoint-output",
        "interpolating/fingerprint-size",
        "interpolating/conditional",
        "interpolating/sandwich",
    ]);
    problems.append(&mut t.problems);
    let mut x = suite(Suite::Crosscheck);
    x.require(&["crosscheck/covers", "crosscheck/weight"]);
    problems.append(&mut x.problems);
    within(start, 5 * MIN, &mut problems);
    verdict(
        problems,
        format!(
            "{} instances, {} checks; crosscheck on {} instances, {} checks",
            t.instances,
            t.total(),
            x.instances,
            x.total()
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut t = suite(Suite::Prop23);
    t.require(&["key-inequality/holds", "key-inequality/equality"]);
    let mut problems = std::mem::take(&mut t.problems);
    if t.instances < 756 {
        problems.push(format!("only {} instances", t.instances));
    }
    if t.checks.get("key-inequality/equality").map_or(0, |c| c.0) < 256 * 2 {
        problems.push("equality not checked for every U at two densities".into());
    }
    within(start, 2 * MIN, &mut problems);
    verdict(problems, format!("{} instances, {} exact checks", t.instances, t.total()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut p = suite(Suite::Prop21);
    p.require(&["prop21/covers", "prop21/probability", "prop21/harris"]);
    let mut j = suite(Suite::Janson);
    j.require(&["janson/dominates"]);
    let mut l = suite(Suite::Lymb);
    l.require(&["lymb/sum"]);
    let mut problems = Vec::new();
    for t in [&mut p, &mut j, &mut l] {
        problems.append(&mut t.problems);
    }
    if p.instances < 100 || j.instances < 100 || l.instances < 500 {
        problems.push("corpus too small".into());
    }
    within(start, 3 * MIN, &mut problems);
    verdict(problems, format!("prop21 {} / janson {} / lymb {} instances", p.instances, j.instances, l.instances))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut e = suite(Suite::Efficient);
    e.require(&["efficient/fingerprint-size", "efficient/container-size"]);
    let mut k = suite(Suite::Packaged);
    k.require(&["packaged/certificate", "packaged/spot-check"]);
    let mut problems = Vec::new();
    problems.append(&mut e.problems);
    problems.append(&mut k.problems);
    within(start, 3 * MIN, &mut problems);
    let containers = e.checks.get("efficient/container-size").map_or(0, |c| c.0);
    verdict(problems, format!("K_1000: {containers} containers checked; packaged: {} checks", k.total()))
}

// Brute-force oracle: enumerate all 2^n subsets.
fn oracle(h: &Hypergraph, p: &Rational, lambda: &Rational, l: &VertexSet) -> [Rational; 4] {
    let n = h.n();
    let (mut z, mut prob, mut size, mut with_l) = (int(0), int(0), int(0), int(0));
    for mask in 0u64..1 << n {
        let s = VertexSet::from_mask(mask);
        if !h.edges().iter().all(|e| !e.iter().all(|v| s.contains(v))) {
            continue;
        }
        z += pow(lambda, s.len());
        let w = pow(p, s.len()) * pow(&(int(1) - p), n - s.len());
        size += &w * int(s.len());
        if l.iter().all(|v| s.contains(v)) {
            with_l += &w;
        }
        prob += w;
    }
    let expected = &size / &prob;
    let cond = &with_l / &prob;
    [z, prob, expected, cond]
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let engine = Engine::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut problems = Vec::new();
    let mut mc_runs = 0;
    for i in 0..200u64 {
        let n = rng.random_range(1..=10);
        let m = rng.random_range(0..=6);
        let edges: Vec<VertexSet> = (0..m)
            .map(|_| {
                let k = rng.random_range(1..=n.min(4));
                rand::seq::index::sample(&mut rng, n, k).into_iter().collect()
            })
            .collect();
        let h = Hypergraph::new(n, edges).unwrap();
        let p = ratio(rng.random_range(1..=9), 10);
        let lambda = ratio(rng.random_range(1..=7), rng.random_range(1..=4));
        let l: VertexSet = (0..n).filter(|_| rng.random_bool(0.25)).collect();
        let [z, prob, expected, cond] = oracle(&h, &p, &lambda, &l);
        let got = (
            engine.partition_function(&h, &lambda).map(|e| e.z),
            engine.prob_independent(&h, &p),
            engine.conditional_expected_size(&h, &p),
            engine.conditional_subset_prob(&h, &p, &l),
        );
        if got != (Ok(z), Ok(prob.clone()), Ok(expected), Ok(cond)) {
            problems.push(format!("instance {i}: engine disagrees with enumeration"));
        }
        if i % 4 == 0 {
            mc_runs += 1;
            let est = mc_prob_independent(&h, &p, 20_000, i).unwrap();
            let exact = rational::to_f64(&prob);
            let sigma = (exact * (1.0 - exact) / est.samples as f64).sqrt();
            if (est.estimate - exact).abs() > 4.0 * sigma + 1e-12 {
                problems.push(format!("instance {i}: MC {} vs exact {exact}", est.estimate));
            }
        }
    }
    within(start, 2 * MIN, &mut problems);
    verdict(problems, format!("200 instances match enumeration; MC within 4σ on {mc_runs}"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("cover containers", criterion_1),
        ("K_100 golden trace", criterion_2),
        ("hard-core containers", criterion_3),
        ("interpolating containers and crosscheck", criterion_4),
        ("key inequality", criterion_5),
        ("cover construction, Harris, Janson, LYMB", criterion_6),
        ("efficient and packaged statements", criterion_7),
        ("engine against enumeration", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("ACCEPTANCE {} PASS {name}: {detail} ({took:.1?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("ACCEPTANCE {} FAIL {name}: {why} ({took:.1?})", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
