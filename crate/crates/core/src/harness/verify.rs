//! Cross-checks the tableau backend against the dense oracle on scripted
//! circuits, and checks every outcome against the Bell swapping relations.

use std::collections::BTreeMap;

use crate::bell::{chain_relation_holds, xor_rule_holds, BellType, ChainSpec};
use crate::engine::{BackendKind, Circuit, Gate, MeasureOutcome, MeasureStep, PrepOp, QubitId, DENSE_MAX_QUBITS};
use crate::error::{invalid, Result};

use super::stats::{chi_square, ChiSquareReport};

pub const SIGNIFICANCE: f64 = 0.001;

/// Relation every outcome of a circuit must satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    None,
    /// Closed cycle with these initial states; outcomes are the Bell results.
    Cycle(Vec<BellType>),
    /// Open chain: initial states in order along the chain; outcomes are
    /// `[Z(first), Z(last), Bell...]`.
    Chain(Vec<BellType>),
}

impl Relation {
    pub fn holds(&self, outcome: &[MeasureOutcome]) -> bool {
        let bells = || -> Vec<BellType> {
            outcome
                .iter()
                .filter_map(|o| match o {
                    MeasureOutcome::Bell(b) => Some(*b),
                    MeasureOutcome::Z(_) => None,
                })
                .collect()
        };
        match self {
            Relation::None => true,
            Relation::Cycle(initials) => xor_rule_holds(initials, &bells()).unwrap_or(false),
            Relation::Chain(initials) => {
                let (MeasureOutcome::Z(z1), MeasureOutcome::Z(z2)) = (outcome[0], outcome[1]) else {
                    return false;
                };
                let k = initials.len();
                chain_relation_holds(&ChainSpec {
                    is1: initials[0],
                    is2: initials[k - 1],
                    intermediates: initials[1..k - 1].to_vec(),
                    zmr1: z1,
                    zmr2: z2,
                    mrs: bells(),
                })
                .unwrap_or(false)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptedCircuit {
    pub name: String,
    pub circuit: Circuit,
    pub relation: Relation,
}

fn q(i: usize) -> QubitId {
    QubitId(i)
}

/// Gate on the first qubit of φ+ that yields `target`.
fn preparing_gate(target: BellType) -> Option<Gate> {
    match target {
        BellType::PhiPlus => None,
        BellType::PhiMinus => Some(Gate::Z),
        BellType::PsiPlus => Some(Gate::X),
        BellType::PsiMinus => Some(Gate::Y),
    }
}

/// Pairs `(2i, 2i+1)` prepared in the given Bell states.
pub fn bell_pairs(initials: &[BellType]) -> Vec<PrepOp> {
    let mut prep = Vec::new();
    for (i, &b) in initials.iter().enumerate() {
        prep.push(PrepOp::BellPair(q(2 * i), q(2 * i + 1)));
        if let Some(g) = preparing_gate(b) {
            prep.push(PrepOp::Gate(g, q(2 * i)));
        }
    }
    prep
}

/// Bell-measures the second qubit of each pair with the first of the next,
/// closing the loop.
pub fn cycle_circuit(initials: &[BellType]) -> Circuit {
    let k = initials.len();
    let plan = (0..k)
        .map(|i| MeasureStep::Bell(q(2 * i + 1), q(2 * ((i + 1) % k))))
        .collect();
    Circuit { qubits: 2 * k, prep: bell_pairs(initials), plan }
}

/// Z-measures the outer qubits of the first and last pairs, then swaps
/// along the chain.
pub fn chain_circuit(initials: &[BellType]) -> Circuit {
    let k = initials.len();
    let mut plan = vec![MeasureStep::Z(q(0)), MeasureStep::Z(q(2 * k - 1))];
    plan.extend((0..k - 1).map(|i| MeasureStep::Bell(q(2 * i + 1), q(2 * i + 2))));
    Circuit { qubits: 2 * k, prep: bell_pairs(initials), plan }
}

fn mixed(k: usize) -> Vec<BellType> {
    (0..k).map(|i| BellType::ALL[(i * 3 + 1) % 4]).collect()
}

/// The scripted equivalence circuits with at most `max_qubits` qubits.
pub fn scripted_circuits(max_qubits: usize) -> Vec<ScriptedCircuit> {
    use BellType::PhiPlus;
    let mut out = vec![
        ScriptedCircuit {
            name: "empty".into(),
            circuit: Circuit { qubits: 1, prep: vec![], plan: vec![] },
            relation: Relation::None,
        },
        ScriptedCircuit {
            name: "phi-plus/bell".into(),
            circuit: cycle_circuit_single(),
            relation: Relation::Cycle(vec![PhiPlus]),
        },
        ScriptedCircuit {
            name: "phi-plus/z-z".into(),
            circuit: Circuit {
                qubits: 2,
                prep: bell_pairs(&[PhiPlus]),
                plan: vec![MeasureStep::Z(q(0)), MeasureStep::Z(q(1))],
            },
            relation: Relation::None,
        },
        ScriptedCircuit {
            name: "product-01/bell".into(),
            circuit: Circuit {
                qubits: 2,
                prep: vec![PrepOp::Gate(Gate::X, q(1))],
                plan: vec![MeasureStep::Bell(q(0), q(1))],
            },
            relation: Relation::None,
        },
    ];
    for gate in Gate::ALL {
        for (half, label) in [(0, "a"), (1, "b")] {
            let mut prep = bell_pairs(&[PhiPlus]);
            prep.push(PrepOp::Gate(gate, q(half)));
            out.push(ScriptedCircuit {
                name: format!("gate-{gate}-{label}/bell"),
                circuit: Circuit { qubits: 2, prep: prep.clone(), plan: vec![MeasureStep::Bell(q(0), q(1))] },
                relation: Relation::None,
            });
            out.push(ScriptedCircuit {
                name: format!("gate-{gate}-{label}/z-z"),
                circuit: Circuit { qubits: 2, prep, plan: vec![MeasureStep::Z(q(0)), MeasureStep::Z(q(1))] },
                relation: Relation::None,
            });
        }
    }
    for k in 2..=6 {
        for (label, initials) in [("phi", vec![PhiPlus; k]), ("mixed", mixed(k))] {
            out.push(ScriptedCircuit {
                name: format!("cycle-{k}-{label}"),
                circuit: cycle_circuit(&initials),
                relation: Relation::Cycle(initials),
            });
        }
    }
    for k in 2..=5 {
        for (label, initials) in [("phi", vec![PhiPlus; k]), ("mixed", mixed(k))] {
            out.push(ScriptedCircuit {
                name: format!("chain-{}-{label}", k - 2),
                circuit: chain_circuit(&initials),
                relation: Relation::Chain(initials),
            });
        }
    }
    // crossed swap with a modified half, as in the modification attack
    let mut prep = bell_pairs(&[PhiPlus, PhiPlus]);
    prep.push(PrepOp::Gate(Gate::H, q(0)));
    out.push(ScriptedCircuit {
        name: "crossed-h/bell-bell".into(),
        circuit: Circuit {
            qubits: 4,
            prep,
            plan: vec![MeasureStep::Bell(q(0), q(3)), MeasureStep::Bell(q(2), q(1))],
        },
        relation: Relation::None,
    });
    out.retain(|c| c.circuit.qubits <= max_qubits);
    out
}

fn cycle_circuit_single() -> Circuit {
    Circuit {
        qubits: 2,
        prep: bell_pairs(&[BellType::PhiPlus]),
        plan: vec![MeasureStep::Bell(q(0), q(1))],
    }
}

#[derive(Debug, Clone)]
pub struct CircuitReport {
    pub name: String,
    pub qubits: usize,
    pub support: usize,
    pub chi: ChiSquareReport,
    /// Outcomes (dense support or tableau samples) violating the relation.
    pub relation_violations: u64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub circuits: Vec<CircuitReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.circuits.iter().all(|c| c.passed)
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:<22} {:>6} {:>7} {:>10} {:>4} {:>9} {:>10}  result", "circuit", "qubits", "support", "chi2", "dof", "p", "violations")?;
        for c in &self.circuits {
            writeln!(
                f,
                "{:<22} {:>6} {:>7} {:>10.3} {:>4} {:>9.4} {:>10}  {}",
                c.name,
                c.qubits,
                c.support,
                c.chi.statistic,
                c.chi.dof,
                c.chi.p_value,
                c.relation_violations,
                if c.passed { "PASS" } else { "FAIL" }
            )?;
        }
        write!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Runs one scripted circuit: exact dense distribution versus `samples`
/// tableau samples.
pub fn verify_circuit(sc: &ScriptedCircuit, samples: u64, seed: u64) -> Result<CircuitReport> {
    let exact = sc.circuit.exact_distribution()?;
    let mut violations = exact.keys().filter(|o| !sc.relation.holds(o)).count() as u64;
    let mut counts: BTreeMap<Vec<MeasureOutcome>, u64> = BTreeMap::new();
    for s in 0..samples {
        let outcome = sc.circuit.sample(BackendKind::Tableau, seed, s)?;
        if !sc.relation.holds(&outcome) {
            violations += 1;
        }
        *counts.entry(outcome).or_insert(0) += 1;
    }
    let chi = chi_square(&exact, &counts);
    let passed = chi.passes(SIGNIFICANCE) && violations == 0;
    Ok(CircuitReport {
        name: sc.name.clone(),
        qubits: sc.circuit.qubits,
        support: exact.len(),
        chi,
        relation_violations: violations,
        passed,
    })
}

pub fn verify_backends(max_qubits: usize, samples: u64, seed: u64) -> Result<VerifyReport> {
    if max_qubits > DENSE_MAX_QUBITS {
        return Err(invalid(format!("max_qubits {max_qubits} exceeds the dense limit {DENSE_MAX_QUBITS}")));
    }
    if samples == 0 {
        return Err(invalid("need at least one sample per circuit"));
    }
    let circuits = scripted_circuits(max_qubits)
        .iter()
        .enumerate()
        .map(|(i, sc)| verify_circuit(sc, samples, seed.wrapping_add(i as u64)))
        .collect::<Result<_>>()?;
    Ok(VerifyReport { circuits })
}
