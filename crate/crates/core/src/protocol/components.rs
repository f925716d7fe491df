//! Decomposition of the TP pairing graph into cycles and chains.
//!
//! Nodes are the qubits that reach TP: wire-A qubits at positions Alice did
//! not measure and wire-B qubits at positions Bob did not measure. Each TP
//! slot joins one node of each wire. A position measured by neither party
//! is a surviving Bell pair and joins its two wire nodes. Every node has
//! exactly one slot edge and at most one pair edge, so the components are
//! cycles or paths; a path ends at collapsed qubits, i.e. at positions
//! measured by exactly one party.

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    Cycle,
    Chain,
}

/// Entanglement group of a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    /// Original pair measured on its own (Case 2).
    One,
    /// Cycle through several pairs (Case 2).
    Two,
    /// Two collapsed qubits measured together (Case 3).
    Three,
    /// Collapsed qubits joined through intermediate pairs (Case 4).
    Four,
}

impl Group {
    pub fn case(self) -> u8 {
        match self {
            Group::One | Group::Two => 2,
            Group::Three => 3,
            Group::Four => 4,
        }
    }
}

/// Chain endpoints by measuring party.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainEnds {
    /// Measured by Alice; its collapsed partner lives on Bob's wire.
    pub alice_measured: usize,
    /// Measured by Bob; its collapsed partner lives on Alice's wire.
    pub bob_measured: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    /// TP slots in traversal order. Chains run from the collapsed wire-A
    /// qubit to the collapsed wire-B qubit.
    pub slots: Vec<usize>,
    /// Surviving Bell pairs in traversal order (intermediates for chains).
    pub pairs: Vec<usize>,
    pub ends: Option<ChainEnds>,
}

impl Component {
    pub fn group(&self) -> Group {
        match (self.kind, self.slots.len()) {
            (ComponentKind::Cycle, 1) => Group::One,
            (ComponentKind::Cycle, _) => Group::Two,
            (ComponentKind::Chain, 1) => Group::Three,
            (ComponentKind::Chain, _) => Group::Four,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    /// Positions measured by both parties, ascending.
    pub case1: Vec<usize>,
    /// Components ordered by their smallest slot.
    pub components: Vec<Component>,
}

impl Classification {
    pub fn chains(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.kind == ComponentKind::Chain)
    }

    pub fn cycles(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.kind == ComponentKind::Cycle)
    }
}

fn membership(measured: &[usize], n: usize, who: &str) -> Result<Vec<bool>> {
    if measured.len() != n / 2 {
        return Err(invalid(format!("{who} measured {} positions, expected {}", measured.len(), n / 2)));
    }
    let mut set = vec![false; n];
    for &p in measured {
        if p >= n || set[p] {
            return Err(invalid(format!("{who} measured set is not a subset of 0..{n}")));
        }
        set[p] = true;
    }
    Ok(set)
}

/// Inverse of a send order; `None` for measured positions.
fn slot_index(order: &[usize], measured: &[bool], who: &str) -> Result<Vec<Option<usize>>> {
    let n = measured.len();
    if order.len() != n / 2 {
        return Err(invalid(format!("{who} order has {} slots, expected {}", order.len(), n / 2)));
    }
    let mut slot_of = vec![None; n];
    for (k, &p) in order.iter().enumerate() {
        if p >= n || measured[p] || slot_of[p].is_some() {
            return Err(invalid(format!("{who} order is not a permutation of its retained positions")));
        }
        slot_of[p] = Some(k);
    }
    Ok(slot_of)
}

/// Builds the pairing graph from both parties' public data and splits it
/// into Case-1 positions and cycle/chain components.
pub fn classify_components(
    measured_a: &[usize],
    measured_b: &[usize],
    order_a: &[usize],
    order_b: &[usize],
    n: usize,
) -> Result<Classification> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(invalid(format!("n must be a positive even number, got {n}")));
    }
    let in_a = membership(measured_a, n, "Alice")?;
    let in_b = membership(measured_b, n, "Bob")?;
    let slot_a = slot_index(order_a, &in_a, "Alice")?;
    slot_index(order_b, &in_b, "Bob")?;
    let slots = n / 2;
    let mut seen = vec![false; slots];
    let mut components = Vec::new();

    // Chains start at collapsed wire-A qubits: positions Bob measured and
    // Alice kept.
    for start in (0..n).filter(|&p| in_b[p] && !in_a[p]) {
        let mut slot = slot_a[start].expect("retained by Alice");
        let mut chain_slots = Vec::new();
        let mut pairs = Vec::new();
        let alice_measured = loop {
            seen[slot] = true;
            chain_slots.push(slot);
            let pos_b = order_b[slot];
            if in_a[pos_b] {
                break pos_b;
            }
            pairs.push(pos_b);
            slot = slot_a[pos_b].expect("surviving pair is retained by Alice");
        };
        components.push(Component {
            kind: ComponentKind::Chain,
            slots: chain_slots,
            pairs,
            ends: Some(ChainEnds { alice_measured, bob_measured: start }),
        });
    }

    for first in 0..slots {
        if seen[first] {
            continue;
        }
        let mut slot = first;
        let mut cycle_slots = Vec::new();
        let mut pairs = Vec::new();
        loop {
            seen[slot] = true;
            cycle_slots.push(slot);
            let pos_b = order_b[slot];
            debug_assert!(!in_a[pos_b], "unvisited slots only lie on cycles");
            pairs.push(pos_b);
            slot = slot_a[pos_b].expect("surviving pair is retained by Alice");
            if slot == first {
                break;
            }
        }
        components.push(Component { kind: ComponentKind::Cycle, slots: cycle_slots, pairs, ends: None });
    }

    components.sort_by_key(|c| c.slots.iter().copied().min());
    let case1 = (0..n).filter(|&p| in_a[p] && in_b[p]).collect();
    Ok(Classification { case1, components })
}
