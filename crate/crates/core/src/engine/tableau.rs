//! Stabilizer tableau backend (Aaronson–Gottesman) with sparse rows.
//!
//! Rows `0..n` are destabilizers, rows `n..2n` stabilizers. Each row stores
//! only its non-identity Pauli factors, and a per-qubit index lists the
//! rows with support on that qubit, so gates and measurements cost time
//! proportional to the local support rather than the register size. The
//! states produced by the key-distribution protocol stay local, which keeps
//! registers of hundreds of thousands of qubits cheap.

use super::Gate;

const PX: u8 = 0b01;
const PZ: u8 = 0b10;

/// A Pauli product with sign `(-1)^phase`, as `(qubit, xz)` pairs sorted by
/// qubit. `xz` bit 0 is the X component, bit 1 the Z component; identity
/// factors are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct PauliRow {
    ops: Vec<(u32, u8)>,
    phase: bool,
}

impl PauliRow {
    fn single(q: usize, xz: u8) -> Self {
        PauliRow { ops: vec![(q as u32, xz)], phase: false }
    }

    fn get(&self, q: u32) -> u8 {
        match self.ops.binary_search_by_key(&q, |&(k, _)| k) {
            Ok(i) => self.ops[i].1,
            Err(_) => 0,
        }
    }

    /// Sets the factor on `q`; returns the previous value.
    fn set(&mut self, q: u32, xz: u8) -> u8 {
        match self.ops.binary_search_by_key(&q, |&(k, _)| k) {
            Ok(i) => {
                let old = self.ops[i].1;
                if xz == 0 {
                    self.ops.remove(i);
                } else {
                    self.ops[i].1 = xz;
                }
                old
            }
            Err(i) => {
                if xz != 0 {
                    self.ops.insert(i, (q, xz));
                }
                0
            }
        }
    }
}

/// Phase exponent contributed when multiplying Pauli `left` into `right`
/// (the `g` function of the CHP rowsum).
fn g(left: u8, right: u8) -> i32 {
    let (x1, z1) = ((left & PX) as i32, ((left & PZ) >> 1) as i32);
    let (x2, z2) = ((right & PX) as i32, ((right & PZ) >> 1) as i32);
    match (x1, z1) {
        (0, 0) => 0,
        (1, 1) => z2 - x2,
        (1, 0) => z2 * (2 * x2 - 1),
        _ => x2 * (1 - 2 * z2),
    }
}

/// `target ← source · target`, returning the merged support change as
/// `(qubit, old, new)` triples.
fn multiply_into(target: &mut PauliRow, source: &PauliRow) -> Vec<(u32, u8, u8)> {
    let mut exponent = 2 * (target.phase as i32) + 2 * (source.phase as i32);
    let mut merged = Vec::with_capacity(target.ops.len() + source.ops.len());
    let mut changes = Vec::new();
    let (a, b) = (&target.ops, &source.ops);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let qa = a.get(i).map_or(u32::MAX, |p| p.0);
        let qb = b.get(j).map_or(u32::MAX, |p| p.0);
        if qa < qb {
            merged.push(a[i]);
            i += 1;
        } else if qb < qa {
            exponent += g(b[j].1, 0);
            merged.push(b[j]);
            changes.push((qb, 0, b[j].1));
            j += 1;
        } else {
            let (old, s) = (a[i].1, b[j].1);
            exponent += g(s, old);
            let new = old ^ s;
            if new != 0 {
                merged.push((qa, new));
            }
            changes.push((qa, old, new));
            i += 1;
            j += 1;
        }
    }
    target.ops = merged;
    target.phase = exponent.rem_euclid(4) == 2;
    changes
}

#[derive(Debug, Clone)]
pub(crate) struct Tableau {
    n: usize,
    rows: Vec<PauliRow>,
    touching: Vec<Vec<u32>>,
}

impl Tableau {
    pub(crate) fn new(n: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * n);
        rows.extend((0..n).map(|q| PauliRow::single(q, PX)));
        rows.extend((0..n).map(|q| PauliRow::single(q, PZ)));
        let touching = (0..n).map(|q| vec![q as u32, (n + q) as u32]).collect();
        Tableau { n, rows, touching }
    }

    fn index_change(&mut self, row: usize, q: u32, old: u8, new: u8) {
        let list = &mut self.touching[q as usize];
        let r = row as u32;
        match (old == 0, new == 0) {
            (true, false) => {
                if let Err(pos) = list.binary_search(&r) {
                    list.insert(pos, r);
                }
            }
            (false, true) => {
                if let Ok(pos) = list.binary_search(&r) {
                    list.remove(pos);
                }
            }
            _ => {}
        }
    }

    fn set(&mut self, row: usize, q: u32, xz: u8) {
        let old = self.rows[row].set(q, xz);
        self.index_change(row, q, old, xz);
    }

    /// `rows[h] ← rows[i] · rows[h]`.
    fn rowsum(&mut self, h: usize, i: usize) {
        let source = self.rows[i].clone();
        let changes = multiply_into(&mut self.rows[h], &source);
        for (q, old, new) in changes {
            self.index_change(h, q, old, new);
        }
    }

    fn replace_row(&mut self, row: usize, value: PauliRow) {
        let old = std::mem::take(&mut self.rows[row]);
        for &(q, _) in &old.ops {
            self.index_change(row, q, 1, 0);
        }
        for &(q, _) in &value.ops {
            self.index_change(row, q, 0, 1);
        }
        self.rows[row] = value;
    }

    pub(crate) fn apply_gate(&mut self, gate: Gate, q: usize) {
        let qq = q as u32;
        for idx in 0..self.touching[q].len() {
            let row = &mut self.rows[self.touching[q][idx] as usize];
            let pos = row
                .ops
                .binary_search_by_key(&qq, |&(k, _)| k)
                .expect("index lists only rows with support");
            let xz = row.ops[pos].1;
            let (x, z) = (xz & PX != 0, xz & PZ != 0);
            match gate {
                Gate::X => row.phase ^= z,
                Gate::Z => row.phase ^= x,
                Gate::Y => row.phase ^= x ^ z,
                Gate::H => {
                    row.phase ^= x & z;
                    row.ops[pos].1 = ((xz & PX) << 1) | ((xz & PZ) >> 1);
                }
            }
        }
    }

    pub(crate) fn cnot(&mut self, control: usize, target: usize) {
        let mut affected: Vec<u32> = self.touching[control]
            .iter()
            .chain(self.touching[target].iter())
            .copied()
            .collect();
        affected.sort_unstable();
        affected.dedup();
        let (c, t) = (control as u32, target as u32);
        for r in affected {
            let r = r as usize;
            let (pc, pt) = (self.rows[r].get(c), self.rows[r].get(t));
            let (xc, zc) = (pc & PX != 0, pc & PZ != 0);
            let (xt, zt) = (pt & PX != 0, pt & PZ != 0);
            if xc && zt && !(xt ^ zc) {
                self.rows[r].phase ^= true;
            }
            let xt = xt ^ xc;
            let zc = zc ^ zt;
            self.set(r, c, (xc as u8) | ((zc as u8) << 1));
            self.set(r, t, (xt as u8) | ((zt as u8) << 1));
        }
    }

    fn has_x(&self, row: u32, q: u32) -> bool {
        self.rows[row as usize].get(q) & PX != 0
    }

    /// The outcome of a Z measurement on `q` if it is deterministic.
    pub(crate) fn peek_z(&self, q: usize) -> Option<bool> {
        let qq = q as u32;
        let n = self.n as u32;
        if self.touching[q].iter().any(|&r| r >= n && self.has_x(r, qq)) {
            return None;
        }
        let mut scratch = PauliRow::default();
        for &r in &self.touching[q] {
            if r < n && self.has_x(r, qq) {
                multiply_into(&mut scratch, &self.rows[(r + n) as usize]);
            }
        }
        Some(scratch.phase)
    }

    /// Measures `q` in the Z basis; `coin` supplies the outcome when it is
    /// not determined by the state.
    pub(crate) fn measure_z(&mut self, q: usize, coin: impl FnOnce() -> bool) -> bool {
        let qq = q as u32;
        let n = self.n as u32;
        let pivot = self.touching[q]
            .iter()
            .copied()
            .find(|&r| r >= n && self.has_x(r, qq));
        let Some(p) = pivot else {
            return self.peek_z(q).expect("no anticommuting stabilizer");
        };
        let others: Vec<u32> = self.touching[q]
            .iter()
            .copied()
            .filter(|&r| r != p && self.has_x(r, qq))
            .collect();
        for r in others {
            self.rowsum(r as usize, p as usize);
        }
        let outcome = coin();
        let stabilizer = self.rows[p as usize].clone();
        self.replace_row((p - n) as usize, stabilizer);
        let mut z = PauliRow::single(q, PZ);
        z.phase = outcome;
        self.replace_row(p as usize, z);
        outcome
    }
}
