//! Simulation and exact inference for noisy graph projections of random
//! `d`-uniform hypergraphs.
//!
//! A latent hypergraph `H` on `[n]` keeps each `d`-subset with probability
//! `s`. Its projection `P(H)` joins every pair covered by a hyperedge; the
//! observation `A` keeps each projected edge with probability `p` and adds
//! every other pair with probability `q`. The crate samples this model, runs
//! the edge- and clique-count detection tests and the clique estimator,
//! evaluates the closed-form phase boundaries, and checks all of it against
//! exact enumeration on tiny instances.

pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod model;
pub mod oracle;
pub mod reconstruct;
pub mod rng;
pub mod stats;
pub mod thresholds;

pub use error::{Error, Result};
