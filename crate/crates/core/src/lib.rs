//! Exact and asymptotic enumeration of connected labeled graphs by excess.
//!
//! The excess of a graph is its number of edges minus its number of vertices.
//! This crate counts connected graphs with `n` vertices and excess `k` through
//! several independent routes (generating functions over exact rationals,
//! integer recurrences, brute force) and evaluates the dominant asymptotic
//! term in the regime where `k/n` tends to a positive constant.
//!
//! The crate is `no_std` and only needs `alloc`. IO, parallel sweeps and the
//! command-line surface live in the `excess-atlas` crate.
#![no_std]

extern crate alloc;

pub mod asymptotics;
pub mod error;
pub mod graph_gf;
pub mod modular;
pub mod multigraph;
pub mod oracle;
pub mod patchworks;
pub mod series;

pub use error::{Error, Result};
pub use series::{BivariateTruncated, ExactRational, TruncatedSeries};
