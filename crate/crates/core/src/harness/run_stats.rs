use std::time::Duration;

use crate::adversary::TpStrategy;
use crate::protocol::{Classification, ComponentKind, Group, Outcome, Stage, Status, Step4Result};

/// Per-trial outcome record; one CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub trial: u64,
    pub n: usize,
    pub strategy: String,
    pub status: Status,
    pub abort_stage: Option<Stage>,
    pub abort_component: Option<ComponentKind>,
    /// Raw key length; `None` when aborted.
    pub raw_key_len: Option<usize>,
    pub final_key_len: Option<usize>,
    pub keys_match: Option<bool>,
    pub case1_bits: usize,
    pub case3_bits: usize,
    pub case4_disclosed_bits: usize,
    pub cycle_components: usize,
    pub chain_components: usize,
    /// Qubits transmitted: `2n`.
    pub qubit_total: usize,
    pub group1_checks: usize,
    pub group1_passed: usize,
    pub group2_checks: usize,
    pub group2_passed: usize,
    pub case4_checks: usize,
    pub case4_passed: usize,
    /// Wall time of the run. Not written to CSV.
    pub elapsed: Duration,
}

impl RunStats {
    pub(crate) fn from_run(
        n: usize,
        strategy: &TpStrategy,
        outcome: &Outcome,
        classification: &Classification,
        step4: &Step4Result,
        elapsed: Duration,
    ) -> Self {
        let completed = outcome.status == Status::Completed;
        let count = |g: Group| step4.checks.iter().filter(|c| c.group == g).count();
        let passed = |g: Group| step4.checks.iter().filter(|c| c.group == g && c.passed == Some(true)).count();
        let abort_component = outcome.abort.map(|a| classification.components[a.component].kind);
        RunStats {
            trial: 0,
            n,
            strategy: strategy.to_string(),
            status: outcome.status,
            abort_stage: outcome.abort.map(|a| a.stage),
            abort_component,
            raw_key_len: completed.then_some(outcome.raw_key_alice.len()),
            final_key_len: completed.then_some(outcome.key_alice.len()),
            keys_match: completed.then_some(outcome.raw_key_alice == outcome.raw_key_bob),
            case1_bits: classification.case1.len(),
            case3_bits: count(Group::Three),
            case4_disclosed_bits: step4.disclosures.len(),
            cycle_components: classification.cycles().count(),
            chain_components: classification.chains().count(),
            qubit_total: 2 * n,
            group1_checks: count(Group::One),
            group1_passed: passed(Group::One),
            group2_checks: count(Group::Two),
            group2_passed: passed(Group::Two),
            case4_checks: count(Group::Four),
            case4_passed: passed(Group::Four),
            elapsed,
        }
    }

    pub fn aborted(&self) -> bool {
        self.status == Status::Aborted
    }

    /// Key bits the parties would have kept: Case 1 plus Case 3.
    pub fn candidate_key_len(&self) -> usize {
        self.case1_bits + self.case3_bits
    }
}
