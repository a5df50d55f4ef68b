use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

/// Aggregated result of one named check across all the places it was
/// evaluated. Only the first failure keeps its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub checked: u64,
    pub failures: u64,
    pub witness: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Per-check pass/fail tallies, keyed by stable check identifiers such as
/// `cover/antichain` or `hardcore/probability`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    outcomes: BTreeMap<&'static str, CheckOutcome>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one evaluation of `id`. The witness closure runs only on the
    /// first failure.
    pub fn record(&mut self, id: &'static str, ok: bool, witness: impl FnOnce() -> String) {
        let entry = self.outcomes.entry(id).or_insert(CheckOutcome { id, checked: 0, failures: 0, witness: None });
        entry.checked += 1;
        if !ok {
            entry.failures += 1;
            if entry.witness.is_none() {
                entry.witness = Some(witness());
            }
        }
    }

    pub fn pass(&mut self, id: &'static str) {
        self.record(id, true, String::new);
    }

    pub fn fail(&mut self, id: &'static str, witness: String) {
        self.record(id, false, || witness);
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for (id, o) in other.outcomes {
            let entry = self.outcomes.entry(id).or_insert(CheckOutcome { id, checked: 0, failures: 0, witness: None });
            entry.checked += o.checked;
            entry.failures += o.failures;
            if entry.witness.is_none() {
                entry.witness = o.witness;
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.outcomes.values().all(CheckOutcome::passed)
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.values()
    }

    pub fn get(&self, id: &str) -> Option<&CheckOutcome> {
        self.outcomes.get(id)
    }

    pub fn failures(&self) -> Vec<&CheckOutcome> {
        self.outcomes.values().filter(|o| !o.passed()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

/// Optional report sink threaded through the builders.
#[derive(Debug, Default)]
pub(crate) struct Checks {
    pub report: Option<VerificationReport>,
}

impl Checks {
    pub fn off() -> Self {
        Self { report: None }
    }

    pub fn on() -> Self {
        Self { report: Some(VerificationReport::new()) }
    }

    pub fn enabled(&self) -> bool {
        self.report.is_some()
    }

    pub fn record(&mut self, id: &'static str, ok: bool, witness: impl FnOnce() -> String) {
        if let Some(r) = &mut self.report {
            r.record(id, ok, witness);
        }
    }
}
