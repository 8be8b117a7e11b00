//! Doc-test shim for the book under `book/`.
//!
//! mdbook cannot run snippets against external crates, so each chapter is
//! attached here as module documentation and `cargo test --doc` executes
//! every Rust code block. If a chapter's snippet drifts from the `pquest`
//! API, this crate stops compiling.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/fields-and-gates.md")]
pub mod fields_and_gates {}

#[doc = include_str!("../../../book/src/orthogonal-arrays.md")]
pub mod orthogonal_arrays {}

#[doc = include_str!("../../../book/src/pauli-and-mubs.md")]
pub mod pauli_and_mubs {}

#[doc = include_str!("../../../book/src/commuting-families.md")]
pub mod commuting_families {}

#[doc = include_str!("../../../book/src/interrogation.md")]
pub mod interrogation {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/formats.md")]
pub mod formats {}
