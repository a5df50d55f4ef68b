//! Hypergraph containers, built three ways, with exact verification.
//!
//! This crate is the `no_std` (+ `alloc`) core of the container lab. It holds
//! the hypergraph representation and its set-system primitives, an exact
//! hard-core model engine over arbitrary-precision rationals, the three
//! container builders (cover-based, hard-core based, interpolating), and the
//! auxiliary bounds (Harris, Janson, LYMB, the constructive cover, the
//! balanced-supersaturation checkers) together with certified enclosures for
//! the few transcendental comparisons involved.
//!
//! Everything here is deterministic and free of IO. File formats, instance
//! generators, the verification suites and the command-line front end live in
//! the `container-lab` companion crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod bounds;
pub mod certified;
pub mod containers;
mod error;
pub mod exact;
mod hypergraph;
pub mod lemmas;
pub mod rational;
mod report;
mod vertex_set;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, StripLink};
pub use rational::Rational;
pub use report::{CheckOutcome, VerificationReport};
pub use vertex_set::VertexSet;

/// Size guards for the exponential parts of the exact engine.
///
/// `exact_n` bounds the ground set handed to the partition-function engine,
/// `enumerate_n` bounds explicit enumeration of independent sets and
/// `subset_search_n` bounds the all-subsets searches used by the
/// interpolating builder and its checks. The hard ceiling for every field is
/// 64 (the engine works on single-word masks).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub exact_n: usize,
    pub enumerate_n: usize,
    pub subset_search_n: usize,
}

impl Limits {
    pub const HARD_CEILING: usize = 64;

    /// Sets every guard to `n` (clamped to the hard ceiling).
    pub fn uniform(n: usize) -> Self {
        let n = n.min(Self::HARD_CEILING);
        Self { exact_n: n, enumerate_n: n, subset_search_n: n }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self { exact_n: 24, enumerate_n: 24, subset_search_n: 20 }
    }
}
