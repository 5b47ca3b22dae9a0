//! Exact FP_n decisions for coabelian ideals of right-angled Artin Lie algebras.

pub mod character;
pub mod cli;
pub mod decider;
pub mod error;
pub mod exactfield;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod random;
pub mod scomplex;
pub mod selftest;

pub use error::{Error, Result};
