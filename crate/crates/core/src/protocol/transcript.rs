//! Ordered record of every classical message in one run.
//!
//! Text form: one record per line, tab-separated fields, first field the
//! record tag. Positions and slots are 0-based; lists are comma-separated
//! and an empty list is written `-`.
//!
//! ```text
//! QUANTUM_SEND    <from> <to> <count>           from/to ∈ {TP, ALICE, BOB}
//! MR_ANNOUNCE     <bell,bell,...>               one Bell type per TP slot
//! ORDER_ANNOUNCE  <role> <order> <measured>     order[k] = position sent in slot k
//! CASE4_DISCLOSE  <role> <position> <bit>
//! ABORT           <stage> <component>
//! PA_SEED         <num/den> <bits>              bits as a 0/1 string, `-` if empty
//! ```

use std::fmt;
use std::str::FromStr;

use crate::bell::{BellType, Bit};
use crate::error::{invalid, Error, Result};
use crate::privacy::PaRatio;

use super::{MrAnnouncement, Role};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    Tp,
    Alice,
    Bob,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Tp => "TP",
            Party::Alice => "ALICE",
            Party::Bob => "BOB",
        })
    }
}

impl FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "TP" => Ok(Party::Tp),
            "ALICE" => Ok(Party::Alice),
            "BOB" => Ok(Party::Bob),
            _ => Err(invalid(format!("unknown party `{s}`"))),
        }
    }
}

impl From<Role> for Party {
    fn from(r: Role) -> Self {
        match r {
            Role::Alice => Party::Alice,
            Role::Bob => Party::Bob,
        }
    }
}

/// Protocol stage at which a run aborted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Step4,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("STEP4")
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "STEP4" => Ok(Stage::Step4),
            _ => Err(invalid(format!("unknown stage `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Record {
    QuantumSend { from: Party, to: Party, count: usize },
    MrAnnounce(MrAnnouncement),
    OrderAnnounce { role: Role, order: Vec<usize>, measured: Vec<usize> },
    Case4Disclose { role: Role, position: usize, bit: Bit },
    Abort { stage: Stage, component: usize },
    PaSeed { ratio: PaRatio, bits: Vec<Bit> },
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    if items.is_empty() {
        return "-".into();
    }
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn split<T: FromStr>(field: &str) -> std::result::Result<Vec<T>, String> {
    if field == "-" {
        return Ok(Vec::new());
    }
    field
        .split(',')
        .map(|x| x.parse::<T>().map_err(|_| format!("bad list element `{x}`")))
        .collect()
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Record::QuantumSend { from, to, count } => write!(f, "QUANTUM_SEND\t{from}\t{to}\t{count}"),
            Record::MrAnnounce(mr) => write!(f, "MR_ANNOUNCE\t{}", join(&mr.results)),
            Record::OrderAnnounce { role, order, measured } => {
                write!(f, "ORDER_ANNOUNCE\t{}\t{}\t{}", Party::from(*role), join(order), join(measured))
            }
            Record::Case4Disclose { role, position, bit } => {
                write!(f, "CASE4_DISCLOSE\t{}\t{position}\t{bit}", Party::from(*role))
            }
            Record::Abort { stage, component } => write!(f, "ABORT\t{stage}\t{component}"),
            Record::PaSeed { ratio, bits } => {
                let s: String = if bits.is_empty() {
                    "-".into()
                } else {
                    bits.iter().map(|b| if b.as_bool() { '1' } else { '0' }).collect()
                };
                write!(f, "PA_SEED\t{ratio}\t{s}")
            }
        }
    }
}

fn parse_role(s: &str) -> std::result::Result<Role, String> {
    match s {
        "ALICE" => Ok(Role::Alice),
        "BOB" => Ok(Role::Bob),
        _ => Err(format!("bad role `{s}`")),
    }
}

fn parse_record(line: &str) -> std::result::Result<Record, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    let arity = |n: usize| {
        if fields.len() == n {
            Ok(())
        } else {
            Err(format!("{} expects {} fields, got {}", fields[0], n, fields.len()))
        }
    };
    let num = |s: &str| s.parse::<usize>().map_err(|_| format!("bad number `{s}`"));
    match fields[0] {
        "QUANTUM_SEND" => {
            arity(4)?;
            Ok(Record::QuantumSend {
                from: fields[1].parse().map_err(|e: Error| e.to_string())?,
                to: fields[2].parse().map_err(|e: Error| e.to_string())?,
                count: num(fields[3])?,
            })
        }
        "MR_ANNOUNCE" => {
            arity(2)?;
            Ok(Record::MrAnnounce(MrAnnouncement { results: split::<BellType>(fields[1])? }))
        }
        "ORDER_ANNOUNCE" => {
            arity(4)?;
            Ok(Record::OrderAnnounce {
                role: parse_role(fields[1])?,
                order: split(fields[2])?,
                measured: split(fields[3])?,
            })
        }
        "CASE4_DISCLOSE" => {
            arity(4)?;
            let bit: u8 = num(fields[3])?.try_into().map_err(|_| "bad bit".to_string())?;
            Ok(Record::Case4Disclose {
                role: parse_role(fields[1])?,
                position: num(fields[2])?,
                bit: Bit::try_from(bit).map_err(|e| e.to_string())?,
            })
        }
        "ABORT" => {
            arity(3)?;
            Ok(Record::Abort {
                stage: fields[1].parse().map_err(|e: Error| e.to_string())?,
                component: num(fields[2])?,
            })
        }
        "PA_SEED" => {
            arity(3)?;
            let bits = if fields[2] == "-" {
                Vec::new()
            } else {
                fields[2]
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(Bit::ZERO),
                        '1' => Ok(Bit::ONE),
                        _ => Err(format!("bad seed bit `{c}`")),
                    })
                    .collect::<std::result::Result<_, _>>()?
            };
            Ok(Record::PaSeed { ratio: fields[1].parse().map_err(|e: Error| e.to_string())?, bits })
        }
        other => Err(format!("unknown record tag `{other}`")),
    }
}

/// Append-only list of records. Announcement order is enforced on push:
/// there is at most one MR announcement and it precedes every order
/// announcement.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    records: Vec<Record>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn push(&mut self, record: Record) -> Result<()> {
        let has_mr = self.announcement().is_some();
        match &record {
            Record::MrAnnounce(_) if has_mr => {
                return Err(invalid("measurement results were already announced"));
            }
            Record::OrderAnnounce { .. } if !has_mr => {
                return Err(invalid("orders cannot be revealed before the measurement results"));
            }
            _ => {}
        }
        self.records.push(record);
        Ok(())
    }

    /// The committed measurement announcement, if any.
    pub fn announcement(&self) -> Option<&MrAnnouncement> {
        self.records.iter().find_map(|r| match r {
            Record::MrAnnounce(mr) => Some(mr),
            _ => None,
        })
    }

    /// True when every order announcement follows the MR announcement.
    pub fn ordering_holds(&self) -> bool {
        let mut seen_mr = false;
        for r in &self.records {
            match r {
                Record::MrAnnounce(_) => seen_mr = true,
                Record::OrderAnnounce { .. } if !seen_mr => return false,
                _ => {}
            }
        }
        true
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Transcript::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let record = parse_record(line).map_err(|msg| Error::Parse { line: i + 1, msg })?;
            t.push(record).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        }
        Ok(t)
    }
}
