//! Quasiminimal subshifts: finite words and eventually periodic points,
//! regular languages, substitution systems, countable template subshifts,
//! the generating order, and the oracle-parameterized constructions.
//!
//! Everything operates on integer letters. Glyphs only matter for parsing
//! and printing.

pub mod automata;
pub mod cli;
pub mod constructions;
mod error;
pub mod order;
pub mod ruler;
pub mod substitution;
pub mod template;
pub mod word;

pub use error::{Error, Result};
pub use word::{Alphabet, ClopenSet, EventuallyPeriodicPoint, Letter, SemilinearSet, Word};
