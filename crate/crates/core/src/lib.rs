//! Lossless compression and spectral analysis of reversible Markov chains.
//!
//! The crate provides:
//! - [`markov`]: validated chain/graph/theta representations, the maps between
//!   them, stationary distributions, path sampling and process entropy;
//! - [`spectral`]: eigendecompositions of reversible kernels, spectral gaps,
//!   relaxation time, the pseudo-spectral gap and the tuple-chain identities;
//! - [`codec`]: a bit-exact compressed container with an exact
//!   (infinite-precision) and a fast (64-bit range coder) arithmetic backend;
//! - [`bounds`]: closed-form redundancy bounds and sample-complexity search;
//! - [`experiments`]: seeded Monte Carlo studies with CSV output;
//! - [`cli`]: the `mrl` command-line interface built on all of the above.

pub mod bounds;
pub mod cli;
pub mod codec;
pub mod error;
pub mod experiments;
pub mod markov;
pub mod matrix;
pub mod schema;
pub mod spectral;

pub use error::{Error, Result};
