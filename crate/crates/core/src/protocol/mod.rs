//! The three-party protocol schedule.
//!
//! 1. TP prepares `n` φ+ pairs and sends wire A to Alice and wire B to Bob.
//! 2. Each party Z-measures a uniform half of its qubits and returns the
//!    rest in a secret random order.
//! 3. TP Bell-measures slot `k` of both returned sequences and announces
//!    the results.
//! 4. Only then do the parties reveal orders and measured positions, after
//!    which everyone can classify the pairing graph and run the checks.
//! 5. On success both raw keys are compressed by a shared Toeplitz hash.

pub mod components;
pub mod party;
pub mod step4;
pub mod transcript;

use std::time::Instant;

use crate::adversary::{SideInfo, TpStrategy};
use crate::bell::{BellType, Bit};
use crate::engine::{BackendKind, QubitId, Register};
use crate::error::{invalid, Result};
use crate::harness::RunStats;
use crate::privacy::{amplify, PaParams, PaRatio};
use crate::rng::{stream, Stream};

pub use components::{classify_components, Classification, Component, ComponentKind, Group};
pub use party::{party_step2, PartyState, Role};
pub use step4::{evaluate_step4, ComponentCheck, Disclosure, Step4Result};
pub use transcript::{Party, Record, Stage, Transcript};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolConfig {
    /// Number of Bell pairs; positive and even.
    pub n: usize,
    pub seed: u64,
    pub backend: BackendKind,
    pub pa_ratio: PaRatio,
}

impl ProtocolConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        ProtocolConfig { n, seed, backend: BackendKind::Tableau, pa_ratio: PaRatio::HALF }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(invalid(format!("n must be even and at least 2, got {}", self.n)));
        }
        Ok(())
    }
}

/// TP's announced Bell-measurement results, one per slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrAnnouncement {
    pub results: Vec<BellType>,
}

/// The qubits of each wire, indexed by original position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wires {
    pub a: Vec<QubitId>,
    pub b: Vec<QubitId>,
}

/// Prepares `n` φ+ pairs on qubits `(2i, 2i+1)`.
pub fn tp_step1(reg: &mut Register, n: usize) -> Result<Wires> {
    if reg.size() < 2 * n {
        return Err(crate::error::Error::Capacity { requested: 2 * n, limit: reg.size() });
    }
    let a: Vec<QubitId> = (0..n).map(|i| QubitId(2 * i)).collect();
    let b: Vec<QubitId> = (0..n).map(|i| QubitId(2 * i + 1)).collect();
    for (&qa, &qb) in a.iter().zip(&b) {
        reg.prepare_bell_phi_plus(qa, qb)?;
    }
    Ok(Wires { a, b })
}

/// Bell-measures `q1[k]` with `q2[k]` for every slot, in ascending order.
pub fn tp_step3_honest(reg: &mut Register, q1: &[QubitId], q2: &[QubitId]) -> Result<MrAnnouncement> {
    if q1.len() != q2.len() {
        return Err(invalid(format!("returned sequences differ in length: {} vs {}", q1.len(), q2.len())));
    }
    let results = q1
        .iter()
        .zip(q2)
        .map(|(&a, &b)| reg.measure_bell(a, b))
        .collect::<Result<_>>()?;
    Ok(MrAnnouncement { results })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Completed,
    Aborted,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Completed => "COMPLETED",
            Status::Aborted => "ABORTED",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbortReason {
    pub stage: Stage,
    pub component: usize,
    pub group: Group,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub raw_key_alice: Vec<Bit>,
    pub raw_key_bob: Vec<Bit>,
    /// Post-amplification keys; empty when aborted.
    pub key_alice: Vec<Bit>,
    pub key_bob: Vec<Bit>,
    pub abort: Option<AbortReason>,
}

/// Everything produced by one run.
#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub outcome: Outcome,
    pub transcript: Transcript,
    pub stats: RunStats,
    pub classification: Classification,
    pub step4: Step4Result,
    /// What TP learned after the orders were revealed.
    pub side_info: SideInfo,
}

/// Executes one full run with the given third-party behavior.
pub fn run_protocol(config: &ProtocolConfig, strategy: &TpStrategy) -> Result<ProtocolRun> {
    let started = Instant::now();
    config.validate()?;
    strategy.validate(config.n)?;
    let n = config.n;
    let mut reg = Register::with_stream(2 * n, config.backend, config.seed, Stream::Engine as u64)?;
    let mut tp_rng = stream(config.seed, Stream::ThirdParty);
    let mut hooks = strategy.hooks();
    let mut transcript = Transcript::new();

    let wires = hooks.prepare(&mut reg, n)?;
    transcript.push(Record::QuantumSend { from: Party::Tp, to: Party::Alice, count: n })?;
    transcript.push(Record::QuantumSend { from: Party::Tp, to: Party::Bob, count: n })?;
    hooks.on_outbound(&mut reg, &wires, &mut tp_rng)?;

    let mut alice = party_step2(&mut stream(config.seed, Stream::Alice), n, Role::Alice)?;
    let mut bob = party_step2(&mut stream(config.seed, Stream::Bob), n, Role::Bob)?;
    alice.measure(&mut reg, &wires.a)?;
    bob.measure(&mut reg, &wires.b)?;
    let q1 = alice.outbound(&wires.a);
    let q2 = bob.outbound(&wires.b);
    transcript.push(Record::QuantumSend { from: Party::Alice, to: Party::Tp, count: q1.len() })?;
    transcript.push(Record::QuantumSend { from: Party::Bob, to: Party::Tp, count: q2.len() })?;

    let mr = hooks.on_return(&mut reg, &q1, &q2, &mut tp_rng)?;
    if mr.results.len() != n / 2 {
        return Err(invalid(format!("TP announced {} results for {} slots", mr.results.len(), n / 2)));
    }
    transcript.push(Record::MrAnnounce(mr))?;

    for party in [&alice, &bob] {
        transcript.push(Record::OrderAnnounce {
            role: party.role,
            order: party.send_order.clone(),
            measured: party.measured_positions.clone(),
        })?;
    }
    let side_info = hooks.on_orders_revealed(&transcript)?;

    let mr = transcript.announcement().expect("announced above").clone();
    let classification = classify_components(
        &alice.measured_positions,
        &bob.measured_positions,
        &alice.send_order,
        &bob.send_order,
        n,
    )?;
    let step4 = evaluate_step4(&classification, &mr, &alice, &bob)?;
    for d in &step4.disclosures {
        transcript.push(Record::Case4Disclose { role: d.role, position: d.position, bit: d.bit })?;
    }

    let outcome = match step4.first_failure() {
        Some(i) => {
            let check = step4.checks[i];
            transcript.push(Record::Abort { stage: Stage::Step4, component: check.component })?;
            Outcome {
                status: Status::Aborted,
                raw_key_alice: step4.raw_key_alice.clone(),
                raw_key_bob: step4.raw_key_bob.clone(),
                key_alice: Vec::new(),
                key_bob: Vec::new(),
                abort: Some(AbortReason { stage: Stage::Step4, component: check.component, group: check.group }),
            }
        }
        None => {
            let params = PaParams::random(
                &mut stream(config.seed, Stream::Amplification),
                step4.raw_key_alice.len(),
                config.pa_ratio,
            );
            transcript.push(Record::PaSeed { ratio: params.ratio, bits: params.seed_bits.clone() })?;
            Outcome {
                status: Status::Completed,
                key_alice: amplify(&step4.raw_key_alice, &params)?,
                key_bob: amplify(&step4.raw_key_bob, &params)?,
                raw_key_alice: step4.raw_key_alice.clone(),
                raw_key_bob: step4.raw_key_bob.clone(),
                abort: None,
            }
        }
    };
    debug_assert!(transcript.ordering_holds());
    let stats = RunStats::from_run(n, strategy, &outcome, &classification, &step4, started.elapsed());
    Ok(ProtocolRun { outcome, transcript, stats, classification, step4, side_info })
}
