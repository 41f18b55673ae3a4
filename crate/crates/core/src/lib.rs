//! Local unitary quantum cellular automata.
//!
//! A step of an automaton applies a read operator `U` on the neighborhood of
//! every cell (the translates commute, so order does not matter) and then a
//! single-cell update operator `V` everywhere.

pub mod builders;
pub mod coloring;
pub mod compiler;
pub mod config;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod model;
pub mod translators;
pub mod validate;

pub use error::{Error, Result};
pub use validate::{validate_definition, ValidationReport};

#[cfg(test)]
mod testutil;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/definitions.md")]
mod book_definitions {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/simulation.md")]
mod book_simulation {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/models.md")]
mod book_models {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/coloring.md")]
mod book_coloring {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/circuits.md")]
mod book_circuits {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/translators.md")]
mod book_translators {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/config.md")]
mod book_config {}
