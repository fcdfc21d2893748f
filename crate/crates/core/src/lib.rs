//! Operator-space entanglement, magic monotones and exact fourth-moment
//! ensemble averages for qubit circuits.

#![allow(clippy::needless_range_loop)]

pub mod averages;
pub mod circuit;
pub mod clifford;
pub mod dense;
pub mod ensembles;
pub mod error;
pub mod exec;
pub mod monotones;
pub mod pauli;
pub mod replica;
pub mod selftest;
pub mod sym4;
pub mod weingarten;

pub use error::{Error, Result};
