//! Quantum weight enumerators and the quantum MacWilliams identities.
//!
//! The crate computes the `A` and `B` weight distributions of a quantum code
//! (by group enumeration for stabilizer codes and by brute force over the
//! Pauli basis for explicit code spaces), maps between them with exact
//! Krawtchouk coefficients, and decides whether an `(n, k)` code correcting
//! `t` errors can exist by solving the resulting linear program over the
//! rationals. Infeasibility is always backed by a Farkas certificate that can
//! be re-checked with exact arithmetic.
//!
//! Module map:
//!
//! - [`pauli`]: symplectic Pauli strings and the distance sets `E_d`.
//! - [`code`]: stabilizer and dense code representations, builtin codes, file format.
//! - [`enumerator`]: `A_d` / `B_d` computation and Knill-Laflamme checks.
//! - [`transform`]: Krawtchouk table and the MacWilliams transform.
//! - [`lp`]: exact rational simplex with Farkas certificates.
//! - [`existence`]: enumerator constraint systems for hypothetical codes.
//! - [`fidelity`]: depolarizing-channel fidelities, polynomial and simulated.

pub mod code;
pub mod enumerator;
pub mod error;
pub mod existence;
pub mod fidelity;
pub mod lp;
pub mod pauli;
pub mod rational;
pub mod transform;

mod gf2;

pub use code::{builtin, CodeRepr, DenseCode, QuantumCode, StabilizerCode, BUILTIN_NAMES};
pub use enumerator::{
    degeneracy_from_enumerators, enumerate_dense, enumerate_stabilizer, verify_kl, DenseEnumeration,
    EnumeratorKind, KlCondition, KlReport, WeightEnumerator,
};
pub use error::{Error, Result};
pub use existence::{build_system, decide, scan, ExistenceMode, ExistenceQuery, ExistenceVerdict, VerdictStatus};
pub use lp::{solve, variable_range, LpOutcome, LpStatus, RationalLp, Relation};
pub use pauli::{enumerate_distance_set, PauliOperator};
pub use transform::{alpha_bruteforce, inverse_transform, krawtchouk_table, macwilliams_transform, KrawtchoukTable};
