//! Exact q-brackets of shifted symmetric functions on partitions, their
//! p-adic regularizations, and machinery to check their congruences,
//! filtrations, quasimodular decompositions and two-variable expansions.

pub mod arith;
pub mod brackets;
pub mod cli;
pub mod error;
pub mod jacobi;
pub mod modforms;
pub mod partitions;
pub mod report;
pub mod series;
pub mod theorems;
pub mod zetaseries;

pub use error::{Error, Result};
