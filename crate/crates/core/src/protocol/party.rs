//! Classical participants: random subset selection, Z measurement and
//! reordering of the retained qubits.

use std::collections::BTreeMap;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::bell::Bit;
use crate::engine::{QubitId, Register};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Alice,
    Bob,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartyState {
    pub role: Role,
    pub n: usize,
    /// Positions measured in Z, ascending.
    pub measured_positions: Vec<usize>,
    pub z_results: BTreeMap<usize, Bit>,
    /// `send_order[k]` is the original position of the qubit sent in slot `k`.
    pub send_order: Vec<usize>,
}

/// Chooses a uniform `n/2` subset to measure and a uniform permutation of
/// the remaining positions.
pub fn party_step2<R: Rng + ?Sized>(rng: &mut R, n: usize, role: Role) -> Result<PartyState> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(invalid(format!("n must be a positive even number, got {n}")));
    }
    let mut measured_positions = index::sample(rng, n, n / 2).into_vec();
    measured_positions.sort_unstable();
    let mut is_measured = vec![false; n];
    for &p in &measured_positions {
        is_measured[p] = true;
    }
    let mut send_order: Vec<usize> = (0..n).filter(|&p| !is_measured[p]).collect();
    send_order.shuffle(rng);
    Ok(PartyState { role, n, measured_positions, z_results: BTreeMap::new(), send_order })
}

impl PartyState {
    /// Z-measures the chosen positions on this party's wire.
    pub fn measure(&mut self, reg: &mut Register, wire: &[QubitId]) -> Result<()> {
        for &p in &self.measured_positions {
            let z = reg.measure_z(wire[p])?;
            self.z_results.insert(p, z);
        }
        Ok(())
    }

    /// The reordered sequence of retained qubits sent back to TP.
    pub fn outbound(&self, wire: &[QubitId]) -> Vec<QubitId> {
        self.send_order.iter().map(|&p| wire[p]).collect()
    }

    pub fn z(&self, position: usize) -> Result<Bit> {
        self.z_results
            .get(&position)
            .copied()
            .ok_or_else(|| invalid(format!("{:?} did not measure position {position}", self.role)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::stats::binomial_sigma;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn smallest_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = party_step2(&mut rng, 2, Role::Alice).unwrap();
        assert_eq!(s.measured_positions.len(), 1);
        assert_eq!(s.send_order.len(), 1);
        assert_ne!(s.measured_positions[0], s.send_order[0]);
    }

    #[test]
    fn odd_or_zero_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(party_step2(&mut rng, 3, Role::Bob).is_err());
        assert!(party_step2(&mut rng, 0, Role::Bob).is_err());
    }

    #[test]
    fn partition_and_bijection() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2, 4, 10, 64] {
            let s = party_step2(&mut rng, n, Role::Alice).unwrap();
            let mut all: Vec<usize> = s.measured_positions.iter().chain(&s.send_order).copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn positions_measured_uniformly() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let draws = 10_000u64;
        let mut counts = [0u64; 8];
        for _ in 0..draws {
            for p in party_step2(&mut rng, 8, Role::Alice).unwrap().measured_positions {
                counts[p] += 1;
            }
        }
        for c in counts {
            let rate = c as f64 / draws as f64;
            assert!((rate - 0.5).abs() < 3.0 * binomial_sigma(0.5, draws), "{rate}");
        }
    }

    #[test]
    fn overlap_is_hypergeometric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (n, trials) = (256usize, 2000usize);
        let overlaps: Vec<f64> = (0..trials)
            .map(|_| {
                let a = party_step2(&mut rng, n, Role::Alice).unwrap();
                let b = party_step2(&mut rng, n, Role::Bob).unwrap();
                a.measured_positions.iter().filter(|p| b.measured_positions.binary_search(p).is_ok()).count() as f64
            })
            .collect();
        let mean = overlaps.iter().sum::<f64>() / trials as f64;
        // hypergeometric: N = n, K = n/2 successes, n/2 draws
        let nf = n as f64;
        let var = (nf / 2.0) * 0.25 * (nf / 2.0) / (nf - 1.0);
        let se = (var / trials as f64).sqrt();
        assert!((mean - 64.0).abs() < 3.0 * se, "{mean} ± {se}");
    }
}
