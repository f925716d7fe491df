//! Verification and raw-key extraction once orders are public.

use crate::bell::{infer_remote_bit, xor_rule_holds, BellType, Bit, ChainSpec};
use crate::bell::chain_relation_holds;
use crate::error::{invalid, Result};

use super::components::{Classification, ComponentKind, Group};
use super::party::{PartyState, Role};
use super::MrAnnouncement;

/// Verdict for one component. Case-3 chains carry no check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentCheck {
    pub component: usize,
    pub group: Group,
    /// Number of TP slots in the component.
    pub length: usize,
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Disclosure {
    pub role: Role,
    pub position: usize,
    pub bit: Bit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step4Result {
    pub checks: Vec<ComponentCheck>,
    pub disclosures: Vec<Disclosure>,
    pub raw_key_alice: Vec<Bit>,
    pub raw_key_bob: Vec<Bit>,
}

impl Step4Result {
    /// Index into `checks` of the first failed check.
    pub fn first_failure(&self) -> Option<usize> {
        self.checks.iter().position(|c| c.passed == Some(false))
    }

    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }
}

const PHI: BellType = BellType::PhiPlus;

/// Each party's verdicts, computed from public data plus its own private
/// bits; the other side's endpoint bit comes from the disclosures.
fn verdicts(
    classification: &Classification,
    mr: &MrAnnouncement,
    own: &PartyState,
    disclosures: &[Disclosure],
) -> Result<Vec<ComponentCheck>> {
    let disclosed = |role: Role, position: usize| {
        disclosures
            .iter()
            .find(|d| d.role == role && d.position == position)
            .map(|d| d.bit)
            .ok_or_else(|| invalid(format!("missing disclosure for position {position}")))
    };
    let endpoint_bit = |role: Role, position: usize| {
        if role == own.role { own.z(position) } else { disclosed(role, position) }
    };
    classification
        .components
        .iter()
        .enumerate()
        .map(|(i, comp)| {
            let results: Vec<BellType> = comp.slots.iter().map(|&k| mr.results[k]).collect();
            let group = comp.group();
            let passed = match group {
                Group::One | Group::Two => Some(xor_rule_holds(&vec![PHI; results.len()], &results)?),
                Group::Three => None,
                Group::Four => {
                    let ends = comp.ends.expect("chain has endpoints");
                    Some(chain_relation_holds(&ChainSpec {
                        is1: PHI,
                        is2: PHI,
                        intermediates: vec![PHI; comp.pairs.len()],
                        zmr1: endpoint_bit(Role::Alice, ends.alice_measured)?,
                        zmr2: endpoint_bit(Role::Bob, ends.bob_measured)?,
                        mrs: results,
                    })?)
                }
            };
            Ok(ComponentCheck { component: i, group, length: comp.slots.len(), passed })
        })
        .collect()
}

/// Case-1 bits by ascending position, then Case-3 bits by ascending slot.
fn raw_key(classification: &Classification, mr: &MrAnnouncement, own: &PartyState) -> Result<Vec<Bit>> {
    let mut key: Vec<Bit> = classification.case1.iter().map(|&p| own.z(p)).collect::<Result<_>>()?;
    let mut case3: Vec<(usize, Bit)> = Vec::new();
    for comp in classification.chains().filter(|c| c.group() == Group::Three) {
        let ends = comp.ends.expect("chain has endpoints");
        let slot = comp.slots[0];
        let bit = match own.role {
            Role::Alice => own.z(ends.alice_measured)?,
            Role::Bob => infer_remote_bit(own.z(ends.bob_measured)?, PHI, PHI, &[], &[mr.results[slot]])?,
        };
        case3.push((slot, bit));
    }
    case3.sort_by_key(|&(slot, _)| slot);
    key.extend(case3.into_iter().map(|(_, b)| b));
    Ok(key)
}

/// Evaluates every component check and extracts both raw keys.
///
/// Case-4 chains trigger disclosure of both endpoint bits, each by the
/// party that measured it. Both parties' verdicts are computed separately
/// and must agree.
pub fn evaluate_step4(
    classification: &Classification,
    mr: &MrAnnouncement,
    alice: &PartyState,
    bob: &PartyState,
) -> Result<Step4Result> {
    let slots = alice.n / 2;
    if mr.results.len() != slots {
        return Err(invalid(format!("announcement has {} results, expected {slots}", mr.results.len())));
    }
    let mut disclosures = Vec::new();
    for comp in classification.chains().filter(|c| c.group() == Group::Four) {
        let ends = comp.ends.expect("chain has endpoints");
        disclosures.push(Disclosure { role: Role::Alice, position: ends.alice_measured, bit: alice.z(ends.alice_measured)? });
        disclosures.push(Disclosure { role: Role::Bob, position: ends.bob_measured, bit: bob.z(ends.bob_measured)? });
    }
    let checks = verdicts(classification, mr, alice, &disclosures)?;
    let bob_checks = verdicts(classification, mr, bob, &disclosures)?;
    assert_eq!(checks, bob_checks, "parties disagree on public verdicts");
    debug_assert!(checks.iter().all(|c| (c.group == Group::Three) == c.passed.is_none()));
    debug_assert!(classification
        .components
        .iter()
        .all(|c| (c.kind == ComponentKind::Chain) == c.ends.is_some()));
    Ok(Step4Result {
        checks,
        disclosures,
        raw_key_alice: raw_key(classification, mr, alice)?,
        raw_key_bob: raw_key(classification, mr, bob)?,
    })
}
