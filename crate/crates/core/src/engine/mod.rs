//! Quantum sampling backends.
//!
//! [`Register`] wraps either an exact dense statevector (small registers,
//! used as the ground-truth oracle) or a stabilizer tableau (large
//! registers). Both expose the same operations: Bell-pair preparation, the
//! single-qubit gates X, iY, Z, H, Z-basis measurement and Bell
//! measurement.

mod dense;
mod tableau;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bell::{BellType, Bit};
use crate::error::{invalid, Error, Result};
use dense::StateVector;
use tableau::Tableau;

/// Largest register the dense backend accepts.
pub const DENSE_MAX_QUBITS: usize = 24;

const PROB_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendKind {
    Dense,
    Tableau,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Dense => "dense",
            BackendKind::Tableau => "tableau",
        })
    }
}

impl FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dense" => Ok(BackendKind::Dense),
            "tableau" => Ok(BackendKind::Tableau),
            _ => Err(invalid(format!("unknown backend `{s}`"))),
        }
    }
}

/// Single-qubit gates. `Y` is realized as the real unitary `i·σy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    X,
    Y,
    Z,
    H,
}

impl Gate {
    pub const ALL: [Gate; 4] = [Gate::X, Gate::Y, Gate::Z, Gate::H];
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gate::X => "x",
            Gate::Y => "y",
            Gate::Z => "z",
            Gate::H => "h",
        })
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Gate::X),
            "y" => Ok(Gate::Y),
            "z" => Ok(Gate::Z),
            "h" => Ok(Gate::H),
            _ => Err(invalid(format!("unknown gate `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitId(pub usize);

/// One step of a measurement plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureStep {
    Z(QubitId),
    Bell(QubitId, QubitId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureOutcome {
    Z(Bit),
    Bell(BellType),
}

impl fmt::Display for MeasureOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureOutcome::Z(b) => write!(f, "{b}"),
            MeasureOutcome::Bell(t) => write!(f, "{t}"),
        }
    }
}

/// Exact distribution over outcome tuples of a measurement plan.
pub type Distribution = BTreeMap<Vec<MeasureOutcome>, f64>;

#[derive(Debug, Clone)]
enum State {
    Dense(StateVector),
    Tableau(Tableau),
}

/// A qubit register with its own random stream. Single-threaded.
#[derive(Debug, Clone)]
pub struct Register {
    size: usize,
    state: State,
    rng: ChaCha8Rng,
}

impl Register {
    pub fn new(size: usize, backend: BackendKind, seed: u64) -> Result<Self> {
        Self::with_stream(size, backend, seed, 0)
    }

    /// Register whose random stream is `stream` under key `seed`.
    pub fn with_stream(size: usize, backend: BackendKind, seed: u64, stream: u64) -> Result<Self> {
        if size == 0 {
            return Err(invalid("register size must be at least 1"));
        }
        let state = match backend {
            BackendKind::Dense => {
                if size > DENSE_MAX_QUBITS {
                    return Err(Error::Capacity { requested: size, limit: DENSE_MAX_QUBITS });
                }
                State::Dense(StateVector::new(size))
            }
            BackendKind::Tableau => {
                if size > u32::MAX as usize / 2 {
                    return Err(Error::Capacity { requested: size, limit: u32::MAX as usize / 2 });
                }
                State::Tableau(Tableau::new(size))
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Ok(Register { size, state, rng })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn backend(&self) -> BackendKind {
        match self.state {
            State::Dense(_) => BackendKind::Dense,
            State::Tableau(_) => BackendKind::Tableau,
        }
    }

    /// Squared norm of the amplitude vector; `None` for the tableau backend.
    pub fn norm_sqr(&self) -> Option<f64> {
        match &self.state {
            State::Dense(s) => Some(s.norm_sqr()),
            State::Tableau(_) => None,
        }
    }

    fn check(&self, q: QubitId) -> Result<usize> {
        if q.0 < self.size {
            Ok(q.0)
        } else {
            Err(invalid(format!("qubit {} out of range for register of {}", q.0, self.size)))
        }
    }

    fn check_pair(&self, a: QubitId, b: QubitId) -> Result<(usize, usize)> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        if a == b {
            return Err(invalid(format!("two-qubit operation needs distinct qubits, got {a} twice")));
        }
        Ok((a, b))
    }

    /// The Z outcome of `q` if it is certain, without disturbing the state.
    pub fn peek_z(&self, q: QubitId) -> Result<Option<Bit>> {
        let q = self.check(q)?;
        Ok(match &self.state {
            State::Dense(s) => {
                let p1 = s.prob_one(q);
                if p1 < PROB_EPS {
                    Some(Bit::ZERO)
                } else if p1 > 1.0 - PROB_EPS {
                    Some(Bit::ONE)
                } else {
                    None
                }
            }
            State::Tableau(t) => t.peek_z(q).map(Bit::from),
        })
    }

    /// Prepares `(a, b)` in φ+. Both qubits must currently be `|0⟩`.
    pub fn prepare_bell_phi_plus(&mut self, a: QubitId, b: QubitId) -> Result<()> {
        let (ia, ib) = self.check_pair(a, b)?;
        for q in [a, b] {
            if self.peek_z(q)? != Some(Bit::ZERO) {
                return Err(invalid(format!("qubit {} is not in |0⟩", q.0)));
            }
        }
        self.gate_raw(Gate::H, ia);
        self.cnot_raw(ia, ib);
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: Gate, q: QubitId) -> Result<()> {
        let q = self.check(q)?;
        self.gate_raw(gate, q);
        Ok(())
    }

    pub fn cnot(&mut self, control: QubitId, target: QubitId) -> Result<()> {
        let (c, t) = self.check_pair(control, target)?;
        self.cnot_raw(c, t);
        Ok(())
    }

    fn gate_raw(&mut self, gate: Gate, q: usize) {
        match &mut self.state {
            State::Dense(s) => s.apply_gate(gate, q),
            State::Tableau(t) => t.apply_gate(gate, q),
        }
    }

    fn cnot_raw(&mut self, c: usize, t: usize) {
        match &mut self.state {
            State::Dense(s) => s.cnot(c, t),
            State::Tableau(tab) => tab.cnot(c, t),
        }
    }

    fn measure_raw(&mut self, q: usize) -> bool {
        let rng = &mut self.rng;
        match &mut self.state {
            State::Dense(s) => {
                let p1 = s.prob_one(q);
                let outcome = rng.random::<f64>() < p1;
                s.project(q, outcome);
                outcome
            }
            State::Tableau(t) => t.measure_z(q, || rng.random::<bool>()),
        }
    }

    pub fn measure_z(&mut self, q: QubitId) -> Result<Bit> {
        let q = self.check(q)?;
        Ok(Bit::from(self.measure_raw(q)))
    }

    /// Bell measurement: CNOT(a→b), H(a), read sign from `a` and parity
    /// from `b`, then rotate the pair back into the observed Bell state.
    pub fn measure_bell(&mut self, a: QubitId, b: QubitId) -> Result<BellType> {
        let (ia, ib) = self.check_pair(a, b)?;
        self.cnot_raw(ia, ib);
        self.gate_raw(Gate::H, ia);
        let sign = self.measure_raw(ia);
        let parity = self.measure_raw(ib);
        self.gate_raw(Gate::H, ia);
        self.cnot_raw(ia, ib);
        Ok(BellType::from_bits(parity.into(), sign.into()))
    }

    /// Executes a measurement plan on the live register.
    pub fn run_plan(&mut self, plan: &[MeasureStep]) -> Result<Vec<MeasureOutcome>> {
        plan.iter()
            .map(|step| match *step {
                MeasureStep::Z(q) => self.measure_z(q).map(MeasureOutcome::Z),
                MeasureStep::Bell(a, b) => self.measure_bell(a, b).map(MeasureOutcome::Bell),
            })
            .collect()
    }

    /// Exact outcome distribution of `plan`, computed on a copy of the
    /// amplitudes. Dense backend only.
    pub fn outcome_distribution(&self, plan: &[MeasureStep]) -> Result<Distribution> {
        let State::Dense(state) = &self.state else {
            return Err(Error::Unsupported("outcome_distribution requires the dense backend"));
        };
        for step in plan {
            match *step {
                MeasureStep::Z(q) => {
                    self.check(q)?;
                }
                MeasureStep::Bell(a, b) => {
                    self.check_pair(a, b)?;
                }
            }
        }
        let mut out = Distribution::new();
        let mut prefix = Vec::with_capacity(plan.len());
        branch(state.clone(), plan, 1.0, &mut prefix, &mut out);
        Ok(out)
    }
}

/// A preparation circuit followed by a measurement plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub qubits: usize,
    pub prep: Vec<PrepOp>,
    pub plan: Vec<MeasureStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrepOp {
    BellPair(QubitId, QubitId),
    Gate(Gate, QubitId),
}

impl Circuit {
    /// Fresh register with the preparation applied.
    pub fn prepare(&self, backend: BackendKind, seed: u64, stream: u64) -> Result<Register> {
        let mut reg = Register::with_stream(self.qubits, backend, seed, stream)?;
        for op in &self.prep {
            match *op {
                PrepOp::BellPair(a, b) => reg.prepare_bell_phi_plus(a, b)?,
                PrepOp::Gate(g, q) => reg.apply_gate(g, q)?,
            }
        }
        Ok(reg)
    }

    pub fn exact_distribution(&self) -> Result<Distribution> {
        self.prepare(BackendKind::Dense, 0, 0)?.outcome_distribution(&self.plan)
    }

    /// One sampled outcome tuple.
    pub fn sample(&self, backend: BackendKind, seed: u64, stream: u64) -> Result<Vec<MeasureOutcome>> {
        self.prepare(backend, seed, stream)?.run_plan(&self.plan)
    }
}

fn branch(
    state: StateVector,
    plan: &[MeasureStep],
    weight: f64,
    prefix: &mut Vec<MeasureOutcome>,
    out: &mut Distribution,
) {
    let Some((step, rest)) = plan.split_first() else {
        *out.entry(prefix.clone()).or_insert(0.0) += weight;
        return;
    };
    match *step {
        MeasureStep::Z(q) => {
            for outcome in [false, true] {
                let mut s = state.clone();
                let p = s.project(q.0, outcome);
                if p > PROB_EPS {
                    prefix.push(MeasureOutcome::Z(outcome.into()));
                    branch(s, rest, weight * p, prefix, out);
                    prefix.pop();
                }
            }
        }
        MeasureStep::Bell(a, b) => {
            let mut rotated = state;
            rotated.cnot(a.0, b.0);
            rotated.apply_gate(Gate::H, a.0);
            for sign in [false, true] {
                let mut s1 = rotated.clone();
                let ps = s1.project(a.0, sign);
                if ps <= PROB_EPS {
                    continue;
                }
                for parity in [false, true] {
                    let mut s2 = s1.clone();
                    let pp = s2.project(b.0, parity);
                    if pp <= PROB_EPS {
                        continue;
                    }
                    s2.apply_gate(Gate::H, a.0);
                    s2.cnot(a.0, b.0);
                    prefix.push(MeasureOutcome::Bell(BellType::from_bits(parity.into(), sign.into())));
                    branch(s2, rest, weight * ps * pp, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
}
