//! JSON run reports. The schema is described in `docs/report-schema.md`
//! and published as `docs/report.schema.json`.

use std::collections::BTreeMap;

use container_lab_core::containers::{ContainerOutput, FamilyEntry, TraceStep};
use container_lab_core::{rational, Hypergraph, Rational, VerificationReport, VertexSet};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::document::{serialize, HypergraphDocument};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Self { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub claim: &'static str,
    pub checked: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainerRecord {
    pub fingerprint: Vec<usize>,
    pub container: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<Vec<usize>>>,
    pub rounds: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRecord {
    pub round: usize,
    pub chosen: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniformity: Option<usize>,
    pub branch: &'static str,
    pub fingerprint_size_after: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub name: String,
    pub digest: String,
    pub n: usize,
    pub edges: usize,
    pub status: Status,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub containers: Vec<ContainerRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRecord>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub skipped: usize,
    pub checks: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub total_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: String,
    pub input_digest: String,
    pub params: BTreeMap<String, String>,
    pub instances: Vec<InstanceReport>,
    pub summary: Summary,
    pub timing: Timing,
}

impl RunReport {
    pub fn new(command: &str, input_digest: String, params: BTreeMap<String, String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: Tool::default(),
            command: command.to_owned(),
            input_digest,
            params,
            instances: Vec::new(),
            summary: Summary::default(),
            timing: Timing { total_ms: 0 },
        }
    }

    /// Sorts instances by digest (then name) and recomputes the summary.
    pub fn finish(&mut self, total_ms: u64) {
        self.instances.sort_by(|a, b| (&a.digest, &a.name).cmp(&(&b.digest, &b.name)));
        let mut s = Summary { instances: self.instances.len(), ..Summary::default() };
        for inst in &self.instances {
            match inst.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Error => s.errors += 1,
                Status::Skipped => s.skipped += 1,
            }
            s.checks += inst.checks.iter().map(|c| c.checked).sum::<u64>();
            s.failures += inst.checks.iter().map(|c| c.failures).sum::<u64>();
        }
        self.summary = s;
        self.timing.total_ms = total_ms;
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.errors == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

impl InstanceReport {
    pub fn new(name: impl Into<String>, h: &Hypergraph) -> Self {
        Self {
            name: name.into(),
            digest: hypergraph_digest(h),
            n: h.n(),
            edges: h.edge_count(),
            status: Status::Pass,
            checks: Vec::new(),
            containers: Vec::new(),
            trace: None,
            values: BTreeMap::new(),
            error: None,
            elapsed_ms: 0,
        }
    }

    /// Copies the outcomes of `report` and sets the status accordingly.
    pub fn absorb(&mut self, report: &VerificationReport) {
        for o in report.outcomes() {
            self.checks.push(CheckRecord {
                id: o.id.to_owned(),
                claim: claim(o.id),
                checked: o.checked,
                failures: o.failures,
                witness: o.witness.clone(),
            });
        }
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self.refresh_status();
    }

    pub fn refresh_status(&mut self) {
        if self.error.is_some() {
            self.status = Status::Error;
        } else if self.checks.iter().any(|c| c.failures > 0) {
            self.status = Status::Fail;
        }
    }

    pub fn fail_with_error(&mut self, err: impl ToString) {
        self.error = Some(err.to_string());
        self.status = Status::Error;
    }

    pub fn value(&mut self, key: &str, v: &Rational) {
        self.values.insert(key.to_owned(), rational::format(v));
        self.values.insert(format!("{key}~"), format!("{:.6e}", rational::to_f64(v)));
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(71);
    out.push_str("sha256:");
    for b in digest.iter() {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Digest of the canonical document text of `h` (without metadata).
pub fn hypergraph_digest(h: &Hypergraph) -> String {
    sha256_hex(serialize(&HypergraphDocument::from_hypergraph(h)).as_bytes())
}

pub fn set_list(s: &VertexSet) -> Vec<usize> {
    s.iter().collect()
}

pub fn edge_lists(h: &Hypergraph) -> Vec<Vec<usize>> {
    h.edges().iter().map(set_list).collect()
}

impl From<&FamilyEntry> for ContainerRecord {
    fn from(e: &FamilyEntry) -> Self {
        Self {
            fingerprint: set_list(&e.s),
            container: set_list(&e.c),
            cover: e.g.as_ref().map(edge_lists),
            rounds: e.rounds,
        }
    }
}

impl From<&ContainerOutput> for ContainerRecord {
    fn from(o: &ContainerOutput) -> Self {
        Self {
            fingerprint: set_list(&o.s),
            container: set_list(&o.c),
            cover: o.g.as_ref().map(edge_lists),
            rounds: o.rounds,
        }
    }
}

impl From<&TraceStep> for TraceRecord {
    fn from(t: &TraceStep) -> Self {
        Self {
            round: t.round,
            chosen: set_list(&t.chosen),
            uniformity: t.s,
            branch: t.branch.name(),
            fingerprint_size_after: t.fingerprint_size_after,
        }
    }
}

/// The statement each check id verifies.
pub fn claim(id: &str) -> &'static str {
    match id {
        "cover/antichain" => "H_i is an antichain in every round",
        "cover/upset-growth" => "the added family F_i is nonempty and disjoint from the up-set of H_i",
        "cover/update-uniform" => "every edge added in round i has fewer than s_i vertices",
        "cover/link-weight" => "links of inclusion-maximal heavy sets have small weight",
        "cover/heavy-link-exists" => "while w_p(H_i^{>1}) > p|C_i| some set L is heavy with a heavy link",
        "cover/weight-increase" => "each inside step raises the weight of H_i^{<r} by at least 1/(8r)",
        "cover/covers" => "G covers H[C]",
        "cover/min-edge-size" => "every edge of G has at least two vertices",
        "cover/weight" => "w_p(G) ≤ p|C| (or the log-r stopping condition)",
        "cover/fingerprint-size" => "|S| ≤ 8r²p|V| (or 16 r ln r p|V| under the log-r rule)",
        "cover/sandwich" | "hardcore/sandwich" | "interpolating/sandwich" => {
            "S_i ⊆ I ⊆ C_i and I is independent in H_i in every round"
        }
        "cover/contained" | "hardcore/contained" | "interpolating/contained" => "S ⊆ I ⊆ C for the final output",
        "cover/determinism" | "hardcore/determinism" | "interpolating/determinism" => {
            "the output depends only on the fingerprint S"
        }
        "cover/rerun" | "hardcore/rerun" | "interpolating/rerun" => {
            "running the algorithm on input S reproduces (S, C)"
        }
        "cover/termination" | "interpolating/termination" => "the algorithm terminates",
        "hardcore/rounds" => "the algorithm stops after at most |V| rounds",
        "hardcore/fingerprint-equivalence" | "interpolating/fingerprint-equivalence" => {
            "I' ∈ I(H_i) iff S_i ∪ I' ∈ I(H_i)"
        }
        "hardcore/fingerprint-size" => "δ|S| ≤ p|V|",
        "hardcore/probability" => "Pr(S ∪ C_p ∈ I(H)) ≥ (1-p)^{δ|C\\S|}",
        "interpolating/disjoint" => "no edge of H_i meets S_i",
        "interpolating/disjoint-output" => "no edge of G meets S",
        "interpolating/covers" => "G covers H[C]",
        "interpolating/min-edge-size" => "every edge of G has at least two vertices",
        "interpolating/fingerprint-size" => "|S| ≤ p|V|/δ",
        "interpolating/conditional" => "Pr(L ⊆ C_p | C_p ∈ I(G)) ≥ ((1-δ)p)^{|L|} for every L ∈ I(G)",
        "efficient/fingerprint-size" => "|S| ≤ τ|V|",
        "efficient/container-size" => "|C| ≤ (1 - 1/(2K))|V|",
        "packaged/certificate" => "w_p(G) ≤ p|C| and G covers H[C], so no H_S ⊆ H[C] is supersaturated",
        "packaged/spot-check" => "sampled subhypergraphs of H[C] are not supersaturated",
        "crosscheck/covers" => "the minimal cover from interpolating mode covers H[C]",
        "crosscheck/min-edge-size" => "the minimal cover has no singleton edges",
        "crosscheck/weight" => "w_p of the minimal cover is at most p|C|",
        "crosscheck/fingerprint-size" => "|S| ≤ 8r²p|V|",
        "prop21/chain" => "the greedy subhypergraph H' and its cover G meet the degree caps and weight bound",
        "prop21/covers" => "the constructed G covers H and is an antichain",
        "prop21/probability" => "Pr(V_p ∈ I(H)) ≤ exp(-w_{p/(4r²)}(G)/8)",
        "prop21/harris" => "Pr(V_p ∈ I(H)) ≥ Π_{A∈G}(1 - p^{|A|})",
        "prop21/harris-exp" => "Π_{A∈G}(1 - p^{|A|}) ≥ exp(-2 w_p(G))",
        "janson/dominates" => "Pr(V_p ∈ I(H)) ≤ exp(-μ²/(2Δ*))",
        "lymb/sum" => "Σ_{A} 1/C(|X|,|A|) ≤ 1 over the antichain of minimal edges",
        "key-inequality/holds" => "Pr(C_p ∈ I) ≥ (1-p)^{|C| - E[|C_p| | C_p ∈ I]/p}",
        "key-inequality/equality" => "equality holds when I = 2^U",
        _ => "",
    }
}
