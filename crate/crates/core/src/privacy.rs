//! Toeplitz-hash privacy amplification over GF(2).
//!
//! An `out × in` Toeplitz matrix is fixed by `in + out − 1` seed bits:
//! `seed[0..out]` is the first column (top to bottom) and
//! `seed[out..]` the first row without its leading entry, so
//! `T[i][j] = seed[i − j]` for `i ≥ j` and `seed[out + j − i − 1]` otherwise.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::bell::Bit;
use crate::error::{invalid, Error, Result};

/// Compression ratio `num/den` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PaRatio {
    num: u32,
    den: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

impl PaRatio {
    pub const HALF: PaRatio = PaRatio { num: 1, den: 2 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num == 0 || num > den {
            return Err(invalid(format!("ratio {num}/{den} is not in (0, 1]")));
        }
        let g = gcd(num, den);
        Ok(PaRatio { num: num / g, den: den / g })
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    /// `floor(len × ratio)`.
    pub fn output_len(self, input_len: usize) -> usize {
        (input_len as u128 * self.num as u128 / self.den as u128) as usize
    }
}

impl Default for PaRatio {
    fn default() -> Self {
        PaRatio::HALF
    }
}

impl fmt::Display for PaRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for PaRatio {
    type Err = Error;

    /// Accepts `a/b` or a decimal such as `0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || invalid(format!("cannot parse ratio `{s}`"));
        if let Some((a, b)) = s.split_once('/') {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            return PaRatio::new(a, b);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 9 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u32 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u32.pow(frac.len() as u32);
        let frac: u32 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        PaRatio::new(num, den)
    }
}

/// Hash parameters for one amplification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaParams {
    pub ratio: PaRatio,
    pub seed_bits: Vec<Bit>,
}

/// Seed length needed for an input of `input_len` bits.
pub fn seed_len(input_len: usize, ratio: PaRatio) -> usize {
    (input_len + ratio.output_len(input_len)).saturating_sub(1)
}

impl PaParams {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, input_len: usize, ratio: PaRatio) -> Self {
        let seed_bits = (0..seed_len(input_len, ratio))
            .map(|_| Bit::from(rng.random::<bool>()))
            .collect();
        PaParams { ratio, seed_bits }
    }
}

/// Hashes `raw` to `floor(|raw| × ratio)` bits with the Toeplitz matrix
/// defined by `params.seed_bits`.
pub fn amplify(raw: &[Bit], params: &PaParams) -> Result<Vec<Bit>> {
    let out_len = params.ratio.output_len(raw.len());
    let expected = seed_len(raw.len(), params.ratio);
    if params.seed_bits.len() != expected {
        return Err(invalid(format!(
            "Toeplitz seed for {} input bits needs {expected} bits, got {}",
            raw.len(),
            params.seed_bits.len()
        )));
    }
    let seed = &params.seed_bits;
    let entry = |i: usize, j: usize| {
        if i >= j { seed[i - j] } else { seed[out_len + (j - i) - 1] }
    };
    Ok((0..out_len)
        .map(|i| {
            raw.iter()
                .enumerate()
                .filter(|(_, b)| b.as_bool())
                .fold(Bit::ZERO, |acc, (j, _)| acc ^ entry(i, j))
        })
        .collect())
}
