//! Bond-percolation engine for superpositions `Y = X ∪ ω` of an
//! everywhere-percolating subgraph `X` of the hypercubic lattice and an
//! independent Bernoulli sprinkle `ω`.
//!
//! The crate provides the finite-box machinery around such processes:
//! box/annulus geometry with a dense edge codec ([`lattice`]),
//! subgraph generators and a finite proxy for the everywhere-
//! percolating property ([`subgraph`]), seeded sprinkling and thinning
//! ([`sprinkle`]), union-find cluster labeling and distance-band
//! cluster counts ([`cluster`]), cluster contraction into multigraphs
//! with exact edge connectivity ([`contraction`]), the renormalized
//! coarse edge field ([`renorm`]), exact small-instance probabilities
//! by subset enumeration ([`oracle`]), and a reproducible Monte Carlo
//! experiment harness ([`harness`]).

pub mod cluster;
pub mod contraction;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod oracle;
pub mod renorm;
pub mod rng;
pub mod sprinkle;
pub mod stats;
pub mod subgraph;

pub use error::{Error, Result};
