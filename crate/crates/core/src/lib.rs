//! Grammar-driven scrambling of Sobol sequences.
//!
//! An Owen scrambling tree over m-bit coordinates holds one flip bit per
//! node: bit `l` of the output is the input bit XORed with the flip bit of
//! the node reached by the first `l` input bits. Storing that tree
//! explicitly costs 2^m - 1 bits per dimension. Here the tree is instead
//! generated by a small context-free grammar: each grammar symbol carries
//! one depth-bit scrambling vector and produces a pair of child symbols,
//! so a handful of words of scrambling data drives the whole tree. The
//! construction stays invertible, which turns index enumeration for a
//! given pixel into solving a small GF(2) system.
//!
//! The crate provides:
//!
//! - [`sobol`]: generator matrices and point evaluation,
//! - [`grammar`]: Thue-Morse, ordered, and random grammar construction
//!   plus structural validation,
//! - [`scramble`]: the scrambler itself, its exact inverse, explicit-tree
//!   expansion, XOR and hash-based baselines, and per-pixel sample
//!   enumeration,
//! - [`gf2`]: the tree-bit / data-bit linear map and its solver,
//! - [`analysis`]: periodograms, radial profiles, zoneplates, packing and
//!   blue-noise scores, net checks, and convergence measurement,
//! - [`optimize`]: greedy scrambling-data search and exhaustive code
//!   scans.

pub mod analysis;
pub mod error;
pub mod gf2;
pub mod grammar;
pub mod optimize;
pub mod pgm;
pub mod scramble;
pub mod seed;
pub mod sobol;
pub mod tree;

pub use error::{Error, Result};
