//! Core towers, discriminant groups and tail equivalence for chains of
//! finite-index subgroups.

pub mod chains;
pub mod cli;
pub mod error;
pub mod groups;
pub mod io;
mod numbers;
pub mod profinite;
pub mod taileq;

pub use error::{Error, Result};
