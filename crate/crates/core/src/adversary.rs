//! Third-party behaviors.
//!
//! A [`TpStrategy`] is an immutable description; [`TpStrategy::hooks`]
//! creates the per-run state that the protocol driver calls at each point
//! where TP acts. The driver commits the announcement returned by
//! [`StrategyHooks::on_return`] to the transcript before any order is
//! revealed, and [`StrategyHooks::on_orders_revealed`] only sees the
//! transcript by shared reference, so a strategy cannot revise its
//! announcement after learning the orders.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bell::{BellType, Bit};
use crate::engine::{Gate, QubitId, Register};
use crate::error::{invalid, Result};
use crate::protocol::{
    classify_components, tp_step1, tp_step3_honest, Group, MrAnnouncement, Record, Role, Transcript, Wires,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TpStrategy {
    Honest,
    /// Z-measure every returned qubit and announce uniform random Bell types.
    NaiveMeasure,
    /// Z-measure every returned qubit and announce the matching parity with a
    /// random sign.
    ParityAwareMeasure,
    /// Apply `gate` to `m` random wire-A qubits on the way out and undo it on
    /// those that come back.
    Modification { gate: Gate, m: usize },
}

impl TpStrategy {
    pub fn honest() -> Self {
        TpStrategy::Honest
    }

    pub fn naive_measure() -> Self {
        TpStrategy::NaiveMeasure
    }

    pub fn parity_aware_measure() -> Self {
        TpStrategy::ParityAwareMeasure
    }

    pub fn modification(gate: Gate, m: usize) -> Self {
        TpStrategy::Modification { gate, m }
    }

    /// Checks parameters against the pair count of a run.
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            TpStrategy::Modification { m, .. } if m > n => {
                Err(invalid(format!("cannot modify {m} qubits of a {n}-qubit wire")))
            }
            _ => Ok(()),
        }
    }

    pub fn hooks(&self) -> Box<dyn StrategyHooks> {
        match *self {
            TpStrategy::Honest => Box::new(HonestTp),
            TpStrategy::NaiveMeasure => Box::new(MeasuringTp::new(false)),
            TpStrategy::ParityAwareMeasure => Box::new(MeasuringTp::new(true)),
            TpStrategy::Modification { gate, m } => Box::new(ModifyingTp { gate, m, attacked: HashSet::new() }),
        }
    }
}

impl fmt::Display for TpStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TpStrategy::Honest => f.write_str("honest"),
            TpStrategy::NaiveMeasure => f.write_str("naive-measure"),
            TpStrategy::ParityAwareMeasure => f.write_str("parity-measure"),
            TpStrategy::Modification { gate, m } => write!(f, "modify:{gate}:{m}"),
        }
    }
}

/// What TP can say about the key after the orders are public.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SideInfo {
    /// TP's value for each Case-3 key bit, as `(slot, bit)` by ascending slot.
    pub case3_bits: Vec<(usize, Bit)>,
}

/// Points at which TP acts during a run.
pub trait StrategyHooks {
    /// Step 1: prepare the pairs and hand out the wires.
    fn prepare(&mut self, reg: &mut Register, n: usize) -> Result<Wires> {
        tp_step1(reg, n)
    }

    /// Between preparation and the parties' measurements.
    fn on_outbound(&mut self, _reg: &mut Register, _wires: &Wires, _rng: &mut ChaCha8Rng) -> Result<()> {
        Ok(())
    }

    /// Step 3: act on the returned sequences and produce the announcement.
    fn on_return(
        &mut self,
        reg: &mut Register,
        q1: &[QubitId],
        q2: &[QubitId],
        rng: &mut ChaCha8Rng,
    ) -> Result<MrAnnouncement>;

    /// After both orders are public. The announcement is already committed.
    fn on_orders_revealed(&mut self, _transcript: &Transcript) -> Result<SideInfo> {
        Ok(SideInfo::default())
    }
}

struct HonestTp;

impl StrategyHooks for HonestTp {
    fn on_return(
        &mut self,
        reg: &mut Register,
        q1: &[QubitId],
        q2: &[QubitId],
        _rng: &mut ChaCha8Rng,
    ) -> Result<MrAnnouncement> {
        tp_step3_honest(reg, q1, q2)
    }
}

struct MeasuringTp {
    parity_aware: bool,
    /// Z outcomes of `q2[k]`, by slot.
    z2: Vec<Bit>,
}

impl MeasuringTp {
    fn new(parity_aware: bool) -> Self {
        MeasuringTp { parity_aware, z2: Vec::new() }
    }
}

impl StrategyHooks for MeasuringTp {
    fn on_return(
        &mut self,
        reg: &mut Register,
        q1: &[QubitId],
        q2: &[QubitId],
        rng: &mut ChaCha8Rng,
    ) -> Result<MrAnnouncement> {
        if q1.len() != q2.len() {
            return Err(invalid("returned sequences differ in length"));
        }
        let mut results = Vec::with_capacity(q1.len());
        for (&a, &b) in q1.iter().zip(q2) {
            let za = reg.measure_z(a)?;
            let zb = reg.measure_z(b)?;
            self.z2.push(zb);
            let fake = if self.parity_aware {
                BellType::from_bits(za ^ zb, rng.random::<bool>().into())
            } else {
                BellType::from_code2(rng.random_range(0..4u8))?
            };
            results.push(fake);
        }
        Ok(MrAnnouncement { results })
    }

    /// A Case-3 slot pairs the collapsed partner of Bob's measurement
    /// (`q1`) with that of Alice's (`q2`); the latter equals Alice's key bit.
    fn on_orders_revealed(&mut self, transcript: &Transcript) -> Result<SideInfo> {
        let (mut a, mut b) = (None, None);
        for r in transcript.records() {
            if let Record::OrderAnnounce { role, order, measured } = r {
                match role {
                    Role::Alice => a = Some((order, measured)),
                    Role::Bob => b = Some((order, measured)),
                }
            }
        }
        let ((order_a, measured_a), (order_b, measured_b)) =
            a.zip(b).ok_or_else(|| invalid("orders not yet revealed"))?;
        let n = 2 * order_a.len();
        let classification = classify_components(measured_a, measured_b, order_a, order_b, n)?;
        let mut case3_bits: Vec<(usize, Bit)> = classification
            .chains()
            .filter(|c| c.group() == Group::Three)
            .map(|c| (c.slots[0], self.z2[c.slots[0]]))
            .collect();
        case3_bits.sort_by_key(|&(slot, _)| slot);
        Ok(SideInfo { case3_bits })
    }
}

struct ModifyingTp {
    gate: Gate,
    m: usize,
    attacked: HashSet<QubitId>,
}

impl StrategyHooks for ModifyingTp {
    fn on_outbound(&mut self, reg: &mut Register, wires: &Wires, rng: &mut ChaCha8Rng) -> Result<()> {
        for p in index::sample(rng, wires.a.len(), self.m) {
            reg.apply_gate(self.gate, wires.a[p])?;
            self.attacked.insert(wires.a[p]);
        }
        Ok(())
    }

    fn on_return(
        &mut self,
        reg: &mut Register,
        q1: &[QubitId],
        q2: &[QubitId],
        _rng: &mut ChaCha8Rng,
    ) -> Result<MrAnnouncement> {
        for q in q1.iter().filter(|q| self.attacked.contains(q)) {
            reg.apply_gate(self.gate, *q)?;
        }
        tp_step3_honest(reg, q1, q2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_validation() {
        assert_eq!(TpStrategy::honest().to_string(), "honest");
        assert_eq!(TpStrategy::naive_measure().to_string(), "naive-measure");
        assert_eq!(TpStrategy::parity_aware_measure().to_string(), "parity-measure");
        assert_eq!(TpStrategy::modification(Gate::X, 4).to_string(), "modify:x:4");
        assert!(TpStrategy::modification(Gate::X, 9).validate(8).is_err());
        assert!(TpStrategy::modification(Gate::X, 8).validate(8).is_ok());
    }
}
