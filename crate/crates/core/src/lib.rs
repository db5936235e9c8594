//! Exact computations with dg quiver algebras: combinatorial silting
//! mutation, dg-ideal cancellation, and mutation of (higher) quivers with
//! potential together with their Ginzburg dg algebras.

pub mod agreement;
pub mod algebra;
pub mod cli;
pub mod compare;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod mutation;
pub mod potential;
pub mod reduction;

pub use error::{Error, Result};
