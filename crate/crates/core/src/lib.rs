//! Cyclic multiple zeta values.
//!
//! The word algebra `ℚ⟨x, y⟩` with its shuffle, harmonic and inner products
//! and derivations; cyclic indices and their truncated series; and
//! generators plus verifiers for the linear relations among them.

pub mod cyclic;
pub mod derivations;
pub mod error;
pub mod evaluator;
pub mod index;
pub mod poly;
pub mod products;
pub mod rational;
pub mod relations;
pub mod selftest;
pub mod word;

pub use error::{CmzvError, Result};
pub use index::Index;
pub use poly::{NcPoly, Subspace};
pub use rational::Rational;
pub use word::{Letter, Word};
