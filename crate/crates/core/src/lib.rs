//! Exact computations in the tautological ring of `M_{g,n}`: Pixton's
//! relations, socle evaluations, and the rank certificates built on them.

pub mod error;
pub mod exact;
pub mod matrix;
pub mod pixton;
pub mod rank_lab;
pub mod socle;
pub mod taut;

pub use error::{Error, Result};
