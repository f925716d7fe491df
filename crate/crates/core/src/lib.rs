//! Simulator for mediated randomization-based semi-quantum key distribution.
//!
//! A fully quantum third party (TP) hands out halves of φ+ pairs to two
//! classical users who may only Z-measure, reflect and reorder qubits. TP
//! Bell-measures the returned qubits pairwise; the announced results, the
//! revealed orderings and the users' private Z outcomes let them check
//! TP's honesty and distill a shared raw key.
//!
//! Modules:
//! - [`bell`]: Bell-code algebra and the swapping relations on cycles and chains.
//! - [`engine`]: dense statevector and stabilizer tableau backends.
//! - [`protocol`]: the three-party schedule, component classification and checks.
//! - [`adversary`]: honest and attacking third-party strategies.
//! - [`privacy`]: Toeplitz-hash privacy amplification.
//! - [`harness`]: Monte Carlo campaigns, backend cross-checks and CSV output.

pub mod adversary;
pub mod bell;
pub mod engine;
pub mod error;
pub mod harness;
pub mod privacy;
pub mod protocol;
pub mod rng;

pub use bell::{BellType, Bit, ChainSpec};
pub use engine::{BackendKind, Gate, QubitId, Register};
pub use error::{Error, Result};
