//! `pquest` models a p-ary system as a set of questions with outcomes in the
//! prime field `F_p` and cross-checks that picture against its Hilbert-space
//! realization in dimension `p`.
//!
//! The library has three layers:
//!
//! * a combinatorial layer ([`field`], [`gates`], [`oa`]) with exact
//!   arithmetic in `F_p`, the admissible two-input logical gates (Latin
//!   squares, pairwise orthogonal), and the orthogonal array they combine
//!   into;
//! * an operator layer ([`pauli`]) with dense complex matrices for the
//!   generalized Pauli operators, the full set of `p + 1` mutually unbiased
//!   bases, tensor products, and eigenprojectors;
//! * a question layer ([`structure`], [`interrogate`]) that enumerates the
//!   determining question sets, searches for maximal families of commuting
//!   composite operators, and simulates interrogation sequences on density
//!   matrices while tracking information of each question and of the system.
//!
//! The `pquest` binary exposes every capability as a subcommand with
//! deterministic text or JSON output; see the book under `book/` for a
//! guided tour.

pub mod field;
pub mod gates;
pub mod interrogate;
pub mod oa;
pub mod pauli;
pub mod structure;

pub use field::{is_prime, Felt, FieldError, Prime};
pub use interrogate::{
    InterrogationHistory, InterrogationRecord, OutcomeDistribution, Scenario, SimError,
    SystemState,
};
pub use gates::{GateError, GateFamily, GateTable};
pub use oa::{max_oa_columns, OaError, OrthogonalArray, StrengthCheck};
pub use pauli::{CMatrix, CompositeLabel, PauliError, PauliLabel, EPS};
pub use structure::{Question, QuestionSet, StructureError};
