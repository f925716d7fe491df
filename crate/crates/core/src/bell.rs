//! Classical algebra of Bell-state labels.
//!
//! Bell states carry a two-bit code `(parity, sign)` and a one-bit parity
//! label. Entanglement swapping preserves the XOR of two-bit codes around a
//! closed cycle of measurements; along an open chain terminated by two
//! Z-collapsed qubits only the parity bits are constrained.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// One of the four Bell states.
///
/// The discriminant is the two-bit code: high bit is the parity
/// (`ψ` types), low bit the sign (`−` types).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellType {
    PhiPlus = 0b00,
    PhiMinus = 0b01,
    PsiPlus = 0b10,
    PsiMinus = 0b11,
}

/// A single classical bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bit(bool);

impl Bit {
    pub const ZERO: Bit = Bit(false);
    pub const ONE: Bit = Bit(true);

    pub fn new(value: bool) -> Self {
        Bit(value)
    }

    pub fn value(self) -> u8 {
        self.0 as u8
    }

    pub fn as_bool(self) -> bool {
        self.0
    }
}

impl From<bool> for Bit {
    fn from(b: bool) -> Self {
        Bit(b)
    }
}

impl TryFrom<u8> for Bit {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Bit::ZERO),
            1 => Ok(Bit::ONE),
            other => Err(invalid(format!("bit value {other} is not 0 or 1"))),
        }
    }
}

impl std::ops::BitXor for Bit {
    type Output = Bit;

    fn bitxor(self, rhs: Bit) -> Bit {
        Bit(self.0 ^ rhs.0)
    }
}

impl std::ops::BitXorAssign for Bit {
    fn bitxor_assign(&mut self, rhs: Bit) {
        self.0 ^= rhs.0;
    }
}

impl std::ops::Not for Bit {
    type Output = Bit;

    fn not(self) -> Bit {
        Bit(!self.0)
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl BellType {
    pub const ALL: [BellType; 4] = [
        BellType::PhiPlus,
        BellType::PhiMinus,
        BellType::PsiPlus,
        BellType::PsiMinus,
    ];

    /// Two-bit code: `00`, `01`, `10`, `11` for φ+, φ−, ψ+, ψ−.
    pub fn code2(self) -> u8 {
        self as u8
    }

    pub fn from_code2(code: u8) -> Result<Self> {
        match code {
            0b00 => Ok(BellType::PhiPlus),
            0b01 => Ok(BellType::PhiMinus),
            0b10 => Ok(BellType::PsiPlus),
            0b11 => Ok(BellType::PsiMinus),
            other => Err(invalid(format!("{other} is not a two-bit Bell code"))),
        }
    }

    /// Builds a Bell type from its parity and sign bits.
    pub fn from_bits(parity: Bit, sign: Bit) -> Self {
        match (parity.as_bool(), sign.as_bool()) {
            (false, false) => BellType::PhiPlus,
            (false, true) => BellType::PhiMinus,
            (true, false) => BellType::PsiPlus,
            (true, true) => BellType::PsiMinus,
        }
    }

    /// One-bit label: 1 for ψ±, 0 for φ±.
    pub fn parity(self) -> Bit {
        Bit((self.code2() >> 1) & 1 == 1)
    }

    pub fn sign(self) -> Bit {
        Bit(self.code2() & 1 == 1)
    }

    pub fn name(self) -> &'static str {
        match self {
            BellType::PhiPlus => "PHI_PLUS",
            BellType::PhiMinus => "PHI_MINUS",
            BellType::PsiPlus => "PSI_PLUS",
            BellType::PsiMinus => "PSI_MINUS",
        }
    }
}

impl fmt::Display for BellType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BellType::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| invalid(format!("unknown Bell type `{s}`")))
    }
}

/// Two-bit code of a Bell state.
pub fn code2(v: BellType) -> u8 {
    v.code2()
}

/// Table parity label of a Bell state.
pub fn parity(v: BellType) -> Bit {
    v.parity()
}

fn xor_codes(states: &[BellType]) -> u8 {
    states.iter().fold(0, |acc, s| acc ^ s.code2())
}

fn xor_parities(states: &[BellType]) -> Bit {
    states.iter().fold(Bit::ZERO, |acc, s| acc ^ s.parity())
}

/// Closed-cycle swapping rule: the XOR of the initial codes equals the XOR
/// of the measurement codes.
pub fn xor_rule_holds(initials: &[BellType], results: &[BellType]) -> Result<bool> {
    if initials.is_empty() || results.is_empty() {
        return Err(invalid("xor rule needs at least one Bell state"));
    }
    if initials.len() != results.len() {
        return Err(invalid(format!(
            "xor rule length mismatch: {} initial states vs {} results",
            initials.len(),
            results.len()
        )));
    }
    Ok(xor_codes(initials) == xor_codes(results))
}

/// Value of the surviving qubit after the other half of `is` was Z-measured
/// with outcome `measured`.
pub fn collapse_partner(is: BellType, measured: Bit) -> Bit {
    measured ^ is.parity()
}

/// Parity label of any Bell-measurement outcome on the product state
/// `|z1 z2⟩`. The sign bit is uniformly random and not determined.
pub fn bm_parity(z1: Bit, z2: Bit) -> Bit {
    z1 ^ z2
}

/// An open chain: two Z-collapsed endpoints with `intermediates.len()`
/// untouched Bell pairs between them, swapped through `mrs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    pub is1: BellType,
    pub is2: BellType,
    pub intermediates: Vec<BellType>,
    pub zmr1: Bit,
    pub zmr2: Bit,
    pub mrs: Vec<BellType>,
}

impl ChainSpec {
    pub fn validate(&self) -> Result<()> {
        check_chain_lengths(&self.intermediates, &self.mrs)
    }
}

fn check_chain_lengths(intermediates: &[BellType], mrs: &[BellType]) -> Result<()> {
    if mrs.len() != intermediates.len() + 1 {
        return Err(invalid(format!(
            "chain with {} intermediate pairs needs {} results, got {}",
            intermediates.len(),
            intermediates.len() + 1,
            mrs.len()
        )));
    }
    Ok(())
}

/// Generalized chain relation:
/// `zmr2 = zmr1 ⊕ p(is1) ⊕ p(is2) ⊕ ⊕p(intermediates) ⊕ ⊕p(mrs)`.
pub fn chain_relation_holds(spec: &ChainSpec) -> Result<bool> {
    spec.validate()?;
    let expected = infer_remote_bit(
        spec.zmr1,
        spec.is1,
        spec.is2,
        &spec.intermediates,
        &spec.mrs,
    )?;
    Ok(expected == spec.zmr2)
}

/// Computes the other endpoint's Z result from one's own result and the
/// public chain data. Symmetric in the roles of the two endpoints.
pub fn infer_remote_bit(
    own_zmr: Bit,
    is_own: BellType,
    is_remote: BellType,
    intermediates: &[BellType],
    mrs: &[BellType],
) -> Result<Bit> {
    check_chain_lengths(intermediates, mrs)?;
    Ok(own_zmr
        ^ is_own.parity()
        ^ is_remote.parity()
        ^ xor_parities(intermediates)
        ^ xor_parities(mrs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use BellType::*;

    fn bit(v: u8) -> Bit {
        Bit::try_from(v).unwrap()
    }

    #[test]
    fn codes_match_table() {
        assert_eq!(code2(PhiPlus), 0b00);
        assert_eq!(code2(PhiMinus), 0b01);
        assert_eq!(code2(PsiPlus), 0b10);
        assert_eq!(code2(PsiMinus), 0b11);
        assert_eq!(parity(PsiPlus), Bit::ONE);
        assert_eq!(parity(PhiMinus), Bit::ZERO);
        assert_eq!(parity(PsiMinus), Bit::ONE);
    }

    #[test]
    fn xor_rule_examples() {
        assert!(xor_rule_holds(&[PhiPlus], &[PhiPlus]).unwrap());
        assert!(xor_rule_holds(&[PhiPlus, PhiPlus], &[PsiPlus, PsiPlus]).unwrap());
        assert!(!xor_rule_holds(&[PhiPlus, PhiPlus], &[PsiPlus, PhiPlus]).unwrap());
    }

    #[test]
    fn xor_rule_rejects_bad_lengths() {
        assert!(matches!(xor_rule_holds(&[], &[]), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            xor_rule_holds(&[PhiPlus], &[PhiPlus, PhiPlus]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn collapse_and_bm_parity() {
        assert_eq!(collapse_partner(PhiPlus, bit(0)), bit(0));
        assert_eq!(collapse_partner(PsiPlus, bit(0)), bit(1));
        assert_eq!(collapse_partner(PhiMinus, bit(1)), bit(1));
        assert_eq!(bm_parity(bit(0), bit(1)), bit(1));
        assert_eq!(bm_parity(bit(0), bit(0)), bit(0));
        assert_eq!(bm_parity(bit(1), bit(1)), bit(0));
    }

    #[test]
    fn chain_examples() {
        let group3 = ChainSpec {
            is1: PhiPlus,
            is2: PhiPlus,
            intermediates: vec![],
            zmr1: bit(0),
            zmr2: bit(1),
            mrs: vec![PsiPlus],
        };
        assert!(chain_relation_holds(&group3).unwrap());

        let group4 = ChainSpec {
            intermediates: vec![PhiPlus],
            mrs: vec![PhiPlus, PsiPlus],
            ..group3.clone()
        };
        assert!(chain_relation_holds(&group4).unwrap());

        let mixed = ChainSpec {
            is1: PsiPlus,
            is2: PhiPlus,
            intermediates: vec![],
            zmr1: bit(0),
            zmr2: bit(0),
            mrs: vec![PsiPlus],
        };
        assert!(chain_relation_holds(&mixed).unwrap());

        let bad = ChainSpec { mrs: vec![], ..group3 };
        assert!(matches!(chain_relation_holds(&bad), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn infer_examples() {
        assert_eq!(infer_remote_bit(bit(1), PhiPlus, PhiPlus, &[], &[PsiPlus]).unwrap(), bit(0));
        assert_eq!(infer_remote_bit(bit(1), PhiPlus, PhiPlus, &[], &[PhiPlus]).unwrap(), bit(1));
        assert_eq!(
            infer_remote_bit(bit(0), PhiPlus, PhiPlus, &[PhiPlus], &[PsiMinus, PhiMinus]).unwrap(),
            bit(1)
        );
        assert!(infer_remote_bit(bit(0), PhiPlus, PhiPlus, &[PhiPlus], &[PsiMinus]).is_err());
    }

    fn bell() -> impl Strategy<Value = BellType> {
        (0u8..4).prop_map(|c| BellType::from_code2(c).unwrap())
    }

    fn chain() -> impl Strategy<Value = ChainSpec> {
        (0usize..5).prop_flat_map(|j| {
            (
                bell(),
                bell(),
                prop::collection::vec(bell(), j),
                any::<bool>(),
                any::<bool>(),
                prop::collection::vec(bell(), j + 1),
            )
                .prop_map(|(is1, is2, intermediates, z1, z2, mrs)| ChainSpec {
                    is1,
                    is2,
                    intermediates,
                    zmr1: z1.into(),
                    zmr2: z2.into(),
                    mrs,
                })
        })
    }

    proptest! {
        #[test]
        fn code_round_trip(v in bell()) {
            prop_assert_eq!(BellType::from_code2(v.code2()).unwrap(), v);
            prop_assert_eq!(v.parity().value(), v.code2() >> 1);
            prop_assert_eq!(BellType::from_bits(v.parity(), v.sign()), v);
            prop_assert_eq!(v.name().parse::<BellType>().unwrap(), v);
        }

        #[test]
        fn infer_is_involution(spec in chain()) {
            let once = infer_remote_bit(spec.zmr1, spec.is1, spec.is2, &spec.intermediates, &spec.mrs).unwrap();
            let twice = infer_remote_bit(once, spec.is2, spec.is1, &spec.intermediates, &spec.mrs).unwrap();
            prop_assert_eq!(twice, spec.zmr1);
        }

        #[test]
        fn relation_consistent_with_inference(spec in chain()) {
            let inferred = infer_remote_bit(spec.zmr1, spec.is1, spec.is2, &spec.intermediates, &spec.mrs).unwrap();
            prop_assert_eq!(chain_relation_holds(&spec).unwrap(), spec.zmr2 == inferred);
        }
    }
}
