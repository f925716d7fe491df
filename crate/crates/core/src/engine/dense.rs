//! Dense statevector backend. Exact, exponential in register size.

use num_complex::Complex64;

use super::Gate;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone)]
pub(crate) struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub(crate) fn new(size: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << size];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { amps }
    }

    pub(crate) fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn apply_matrix(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let mask = 1usize << q;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | mask];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub(crate) fn apply_gate(&mut self, gate: Gate, q: usize) {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let m = match gate {
            Gate::X => [[zero, one], [one, zero]],
            // i·σy
            Gate::Y => [[zero, one], [-one, zero]],
            Gate::Z => [[one, zero], [zero, -one]],
            Gate::H => [[h, h], [h, -h]],
        };
        self.apply_matrix(q, m);
    }

    pub(crate) fn cnot(&mut self, control: usize, target: usize) {
        let cm = 1usize << control;
        let tm = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amps.swap(i, i | tm);
            }
        }
    }

    /// Probability that qubit `q` reads 1.
    pub(crate) fn prob_one(&self, q: usize) -> f64 {
        let mask = 1usize << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects qubit `q` onto `outcome` and renormalizes. Returns the
    /// probability of the projected branch.
    pub(crate) fn project(&mut self, q: usize, outcome: bool) -> f64 {
        let mask = 1usize << q;
        let p1 = self.prob_one(q);
        let p = if outcome { p1 } else { 1.0 - p1 };
        let scale = if p > 0.0 { 1.0 / p.sqrt() } else { 0.0 };
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & mask != 0) == outcome {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        p
    }
}
