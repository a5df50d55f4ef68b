//! Command-line front end.
//!
//! Exit codes: 0 when everything checked passes, 1 on an invariant failure,
//! 2 on a usage or input error.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use container_lab_core::bounds;
use container_lab_core::containers::{
    build_container, build_family, AlgorithmParams, BuildOptions, FamilyEntry, FamilyOptions, Mode,
};
use container_lab_core::exact::{mc_prob_independent, Engine};
use container_lab_core::lemmas::{check_entry, verify_family};
use container_lab_core::rational;
use container_lab_core::{Error, Hypergraph, Limits, Rational, VerificationReport, VertexSet};

use crate::corpus::{self, Instance};
use crate::document::{self, HypergraphDocument};
use crate::generators as gen;
use crate::report::{sha256_hex, ContainerRecord, InstanceReport, RunReport, TraceRecord};
use crate::suites::{run_suite, Suite, SuiteConfig};

pub const GUARD_ENV: &str = "CONTAINER_LAB_GUARD_N";

#[derive(Debug, Parser)]
#[command(name = "container-lab", version, about = "Hypergraph containers with exact verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated instance as a hypergraph document.
    Generate(GenerateArgs),
    /// Run a container algorithm and report fingerprints, containers and covers.
    Containers(ContainersArgs),
    /// Run a verification suite on a document or a corpus.
    Verify(VerifyArgs),
    /// Evaluate the Janson, Harris, LYMB, constructive-cover or key-inequality bounds.
    Bounds(BoundsArgs),
    /// Exact (or Monte Carlo) independence probabilities.
    Prob(ProbArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Random,
    Triangles,
    Aps,
    Complete,
    Star,
    Graph,
    Decreasing,
    Nonuniform,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub kind: Kind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub leaves: Option<usize>,
    /// Edge density as "num/den" (graph, decreasing).
    #[arg(long)]
    pub density: Option<String>,
    #[arg(long)]
    pub max_size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ContainersArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Mode,
    /// Density p as "num/den".
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub delta: Option<String>,
    /// Cover mode only: use the log-r stopping rule with this K.
    #[arg(long)]
    pub logr: Option<String>,
    /// Comma-separated vertices of the input independent set (default: empty).
    #[arg(long, conflicts_with = "all")]
    pub input_set: Option<String>,
    /// Build the whole family and check it against every independent set.
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CorpusKind {
    Standard,
    Random,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub suite: Suite,
    #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<CorpusKind>,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value = "3/10")]
    pub tau: String,
    #[arg(long = "big-k", default_value = "2")]
    pub big_k: String,
    /// Re-derive every family entry from its fingerprint, not a sample.
    #[arg(long)]
    pub rerun_all: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Which {
    Janson,
    Harris,
    Lymb,
    Cover,
    Key,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub which: Which,
    #[arg(long)]
    pub p: Option<String>,
}

#[derive(Debug, Args)]
pub struct ProbArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub p: String,
    /// `Pr(L ⊆ V_p | V_p independent)` for the comma-separated set `L`.
    #[arg(long)]
    pub conditional: Option<String>,
    /// `E[|V_p| | V_p independent]`.
    #[arg(long)]
    pub expected: bool,
    /// Monte Carlo estimate: SAMPLES [SEED].
    #[arg(long, num_args = 1..=2, value_names = ["SAMPLES", "SEED"])]
    pub mc: Option<Vec<u64>>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    Mode::parse(s).ok_or_else(|| format!("unknown mode {s:?}; expected cover, hardcore or interpolating"))
}

/// A failed invariant, as opposed to bad input.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InvariantFailure(pub String);

/// Maps an error to its exit code.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<InvariantFailure>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Internal(_)) | Some(Error::Watchdog { .. }) => 1,
        _ => 2,
    }
}

pub fn limits_from_env() -> anyhow::Result<Limits> {
    match std::env::var(GUARD_ENV) {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("{GUARD_ENV}={v:?} is not a number"))?;
            Ok(Limits::uniform(n))
        }
        Err(_) => Ok(Limits::default()),
    }
}

fn rat(text: &str) -> anyhow::Result<Rational> {
    Ok(rational::parse(text)?)
}

fn parse_set(text: &str) -> anyhow::Result<VertexSet> {
    let mut s = VertexSet::new();
    for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        s.insert(item.parse().with_context(|| format!("bad vertex {item:?}"))?);
    }
    Ok(s)
}

struct Loaded {
    h: Hypergraph,
    digest: String,
    name: String,
}

fn load(path: &Path) -> anyhow::Result<Loaded> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = document::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}; canonicalized", path.display());
    }
    let h = parsed.document.to_hypergraph()?;
    let name = parsed.document.meta.get("name").cloned().unwrap_or_else(|| path.display().to_string());
    Ok(Loaded { h, digest: sha256_hex(text.as_bytes()), name })
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn finish(mut report: RunReport, start: Instant, out: Option<&Path>) -> anyhow::Result<u8> {
    report.finish(start.elapsed().as_millis() as u64);
    let mut json = report.to_json();
    json.push('\n');
    emit(out, &json)?;
    let s = &report.summary;
    eprintln!(
        "{}: {} instances, {} passed, {} failed, {} errors, {} skipped; {} checks, {} failures",
        report.command, s.instances, s.passed, s.failed, s.errors, s.skipped, s.checks, s.failures
    );
    Ok(if report.all_passed() { 0 } else { 1 })
}

pub fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Containers(a) => containers(a),
        Command::Verify(a) => verify(a),
        Command::Bounds(a) => bounds_cmd(a),
        Command::Prob(a) => prob(a),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| anyhow!("missing --{flag}"))
}

fn generate(a: GenerateArgs) -> anyhow::Result<u8> {
    let mut meta: BTreeMap<String, String> = BTreeMap::new();
    let mut note = |k: &str, v: String| {
        meta.insert(k.to_owned(), v);
    };
    let h = match a.kind {
        Kind::Random => {
            let (n, r, m) = (need(a.n, "n")?, need(a.r, "r")?, need(a.m, "m")?);
            note("parameters", format!("n={n} r={r} m={m} seed={}", a.seed));
            gen::random_uniform(n, r, m, a.seed)?
        }
        Kind::Triangles => {
            let n = need(a.n, "n")?;
            note("parameters", format!("n={n}"));
            gen::triangles(n)?
        }
        Kind::Aps => {
            let (n, k) = (need(a.n, "n")?, need(a.k, "k")?);
            note("parameters", format!("n={n} k={k}"));
            gen::aps(n, k)?
        }
        Kind::Complete => {
            let (n, r) = (need(a.n, "n")?, a.r.unwrap_or(2));
            note("parameters", format!("n={n} r={r}"));
            gen::complete(n, r)?
        }
        Kind::Star => {
            let leaves = need(a.leaves.or(a.n), "leaves")?;
            note("parameters", format!("leaves={leaves}"));
            gen::star(leaves)
        }
        Kind::Graph => {
            let (n, d) = (need(a.n, "n")?, rat(&need(a.density, "density")?)?);
            note("parameters", format!("n={n} density={d} seed={}", a.seed));
            gen::random_graph(n, &d, a.seed)?
        }
        Kind::Decreasing => {
            let (n, d) = (need(a.n, "n")?, rat(&need(a.density, "density")?)?);
            note("parameters", format!("n={n} density={d} seed={}", a.seed));
            gen::decreasing_family(n, &d, a.seed)?
        }
        Kind::Nonuniform => {
            let (n, m) = (need(a.n, "n")?, need(a.m, "m")?);
            let max = a.max_size.unwrap_or(3);
            note("parameters", format!("n={n} m={m} max_size={max} seed={}", a.seed));
            gen::random_nonuniform(n, m, max, a.seed)?
        }
    };
    let kind = a.kind.to_possible_value().expect("no skipped variants").get_name().to_owned();
    meta.insert("generator".into(), kind);
    let mut doc = HypergraphDocument::from_hypergraph(&h);
    doc.meta = meta;
    emit(a.out.as_deref(), &document::serialize(&doc))?;
    Ok(0)
}

fn algorithm_params(mode: Mode, p: &str, delta: Option<&str>, logr: Option<&str>) -> anyhow::Result<AlgorithmParams> {
    let p = rat(p)?;
    Ok(match mode {
        Mode::Cover => {
            if delta.is_some() {
                bail!("cover mode takes no --delta");
            }
            match logr {
                Some(k) => AlgorithmParams::cover_logr(p, rat(k)?),
                None => AlgorithmParams::cover(p),
            }
        }
        Mode::Hardcore | Mode::Interpolating => {
            if logr.is_some() {
                bail!("--logr applies to cover mode only");
            }
            let d = rat(delta.ok_or_else(|| anyhow!("{mode} mode needs --delta"))?)?;
            if mode == Mode::Hardcore {
                AlgorithmParams::hardcore(p, d)
            } else {
                AlgorithmParams::interpolating(p, d)
            }
        }
    })
}

fn containers(a: ContainersArgs) -> anyhow::Result<u8> {
    let start = Instant::now();
    let limits = limits_from_env()?;
    let loaded = load(&a.input)?;
    let h = &loaded.h;
    let params = algorithm_params(a.mode, &a.p, a.delta.as_deref(), a.logr.as_deref())?;
    params.validate(h)?;

    let mut run_params = BTreeMap::new();
    run_params.insert("mode".into(), a.mode.name().into());
    run_params.insert("p".into(), rational::format(&params.p));
    if let Some(d) = &params.delta {
        run_params.insert("delta".into(), rational::format(d));
    }
    if let Some(k) = &a.logr {
        run_params.insert("logr_k".into(), k.clone());
    }
    let mut inst = InstanceReport::new(&loaded.name, h);
    let mut checks = VerificationReport::new();

    if a.all {
        run_params.insert("inputs".into(), "all".into());
        let opts = FamilyOptions { build: BuildOptions { limits, ..BuildOptions::checked() }, rerun_limit: Some(64) };
        let family = build_family(h, &params, &opts)?;
        let inputs = if h.vertex_count() <= limits.enumerate_n {
            Engine::new(limits).independent_sets(h)?
        } else {
            run_params.insert("inputs".into(), "100 sampled independent sets".into());
            gen::random_independent_sets(h, 100, 0)
        };
        inst.values.insert("inputs_checked".into(), inputs.len().to_string());
        checks.merge(verify_family(&family, &params, &limits, inputs)?);
        inst.containers = family.entries().iter().map(ContainerRecord::from).collect();
    } else {
        let i = parse_set(a.input_set.as_deref().unwrap_or(""))?;
        run_params.insert("input_set".into(), i.to_string());
        let run = build_container(h, &params, &i, &BuildOptions { limits, ..BuildOptions::checked() })?;
        let out = run.output;
        checks.merge(run.report);
        let entry = FamilyEntry { s: out.s.clone(), c: out.c.clone(), g: out.g.clone(), rounds: out.rounds };
        check_entry(h, &params, &entry, &limits, &mut checks)?;
        inst.trace = Some(out.trace.iter().map(TraceRecord::from).collect());
        inst.containers = vec![ContainerRecord::from(&out)];
    }
    inst.absorb(&checks);
    let mut report = RunReport::new("containers", loaded.digest, run_params);
    report.instances.push(inst);
    finish(report, start, a.out.as_deref())
}

fn verify(a: VerifyArgs) -> anyhow::Result<u8> {
    let start = Instant::now();
    let mut cfg = SuiteConfig {
        limits: limits_from_env()?,
        p: a.p.as_deref().map(rat).transpose()?,
        delta: a.delta.as_deref().map(rat).transpose()?,
        seed: a.seed,
        trials: a.trials,
        efficient: bounds::EfficientParams::new(rat(&a.tau)?, rat(&a.big_k)?),
        rerun_limit: if a.rerun_all { None } else { Some(64) },
        ..SuiteConfig::default()
    };
    let mut params = BTreeMap::new();
    params.insert("suite".into(), a.suite.name().into());
    params.insert("seed".into(), a.seed.to_string());
    if let Some(p) = &cfg.p {
        params.insert("p".into(), rational::format(p));
    }
    if let Some(d) = &cfg.delta {
        params.insert("delta".into(), rational::format(d));
    }
    let (instances, digest) = match (&a.input, a.corpus) {
        (Some(path), _) => {
            let loaded = load(path)?;
            cfg.detail = true;
            (vec![Instance { name: loaded.name, h: loaded.h, digest: loaded.digest.clone() }], loaded.digest)
        }
        (None, Some(kind)) => {
            let instances = match kind {
                CorpusKind::Standard => corpus::standard(a.suite, a.seed)?,
                CorpusKind::Random => corpus::random(a.suite, a.count, a.seed)?,
            };
            let description = format!("corpus={kind:?} suite={} count={} seed={}", a.suite.name(), a.count, a.seed);
            params.insert("corpus".into(), format!("{kind:?}").to_lowercase());
            (instances, sha256_hex(description.as_bytes()))
        }
        (None, None) => bail!("give --input or --corpus"),
    };
    let mut report = RunReport::new("verify", digest, params);
    report.instances = run_suite(a.suite, &instances, &cfg);
    finish(report, start, a.out.as_deref())
}

fn show(label: &str, v: &Rational) {
    println!("{label} = {} (≈ {:.9})", rational::format(v), rational::to_f64(v));
}

fn bounds_cmd(a: BoundsArgs) -> anyhow::Result<u8> {
    let limits = limits_from_env()?;
    let engine = Engine::new(limits);
    let h = load(&a.input)?.h;
    let p = || -> anyhow::Result<Rational> { rat(a.p.as_deref().ok_or_else(|| anyhow!("missing --p"))?) };
    match a.which {
        Which::Janson => {
            let p = p()?;
            let j = bounds::janson_bound(&h, &p)?;
            show("mu", &j.mu);
            show("delta_star", &j.delta_star);
            show("exponent mu^2/(2 delta_star)", &j.exponent);
            show("upper enclosure of exp(-exponent)", &j.upper);
            if h.vertex_count() <= limits.exact_n {
                let prob = engine.prob_independent(&h, &p)?;
                show("Pr(V_p independent)", &prob);
                if !j.dominates(&prob).holds() {
                    return Err(InvariantFailure("Janson bound does not dominate the exact probability".into()).into());
                }
            }
        }
        Which::Harris => {
            let p = p()?;
            let b = bounds::harris_bound(&h, &p)?;
            show("w_p(G)", &b.weight);
            show("product", &b.product);
            println!("exp(-2w) ≈ {:.9}", (-2.0 * rational::to_f64(&b.weight)).exp());
        }
        Which::Lymb => {
            let sum = bounds::lymb_sum(&h)?;
            show("lymb_sum", &sum);
            if sum > rational::int(1) {
                return Err(InvariantFailure("LYMB sum exceeds 1".into()).into());
            }
        }
        Which::Cover => {
            let p = p()?;
            let c = bounds::construct_cover(&h, &p)?;
            let r = h.uniformity().unwrap_or(1);
            println!("caps = {:?}", c.caps);
            println!("e(H') = {}", c.h_prime.edge_count());
            println!("G = {:?}", crate::report::edge_lists(&c.g));
            show("w_{p/(4r^2)}(G)", &c.g.weight(&(&p / rational::int(4 * r * r)))?);
            show("mu = e(H')p^r", &c.mu(&p, r));
            if h.vertex_count() <= limits.exact_n {
                let d = bounds::cover_bound_holds(&h, &p, &c, &engine)?;
                println!("Pr(V_p independent) ≤ exp(-w/8): {d:?}");
                if !d.holds() {
                    return Err(InvariantFailure("constructive cover bound not certified".into()).into());
                }
            }
        }
        Which::Key => {
            let p = p()?;
            let k = bounds::key_inequality_check(&h, &p, &engine)?;
            show("Pr(C_p in I)", &k.prob);
            show("E[|C_p| | C_p in I]", &k.expected_size);
            show("x", &k.exponent);
            println!("Pr vs (1-p)^x: {:?}", k.ordering);
            if !k.holds() {
                return Err(InvariantFailure("key inequality fails".into()).into());
            }
        }
    }
    Ok(0)
}

fn prob(a: ProbArgs) -> anyhow::Result<u8> {
    let limits = limits_from_env()?;
    let engine = Engine::new(limits);
    let h = load(&a.input)?.h;
    let p = rat(&a.p)?;
    if let Some(mc) = &a.mc {
        let samples = mc[0];
        let seed = mc.get(1).copied().unwrap_or(0);
        let est = mc_prob_independent(&h, &p, samples, seed)?;
        println!(
            "estimate = {:.6} ± {:.6} (95%, {} samples, seed {})",
            est.estimate, est.half_width, est.samples, est.seed
        );
        return Ok(0);
    }
    if let Some(l) = &a.conditional {
        let l = parse_set(l)?;
        println!("{}", rational::format(&engine.conditional_subset_prob(&h, &p, &l)?));
    } else if a.expected {
        println!("{}", rational::format(&engine.conditional_expected_size(&h, &p)?));
    } else {
        println!("{}", rational::format(&engine.prob_independent(&h, &p)?));
    }
    Ok(0)
}
