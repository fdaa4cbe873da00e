//! Mixture-model clustering toolkit.
//!
//! The crate covers four pieces that fit together:
//!
//! - [`mixture`]: mixture models, seeded samplers and population moments
//!   (`λ_min`, the separability indices `δ₀..δ₃`).
//! - [`clustering`]: the sum-of-squares distortion, Lloyd's algorithm with
//!   k-means++ seeding, the spectral lower bound `D*(V)` and an exhaustive
//!   optimum for small instances.
//! - [`metrics`]: the misclassification-error distance, the `τ`/`ζ` calculus
//!   and the bound evaluators built on them.
//! - [`dimred`]: PCA, uncentered k-SVD, random projection, randomized SVD
//!   and the distortion ratio `γ`.
//!
//! Data matrices are `F×N` with one sample per column, see [`Matrix`].
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
// `!(x > 0.0)` style checks are meant to reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod clustering;
pub mod dimred;
mod error;
pub mod linalg;
pub mod metrics;
pub mod mixture;
mod rng;

pub use clustering::{Clustering, KMeansConfig, KMeansResult, Seeding};
pub use error::{Error, Result};
pub use linalg::{Matrix, SymmetricEigen};
pub use metrics::{BoundReport, BoundSource, Theorem};
pub use mixture::{ComponentDistribution, LabeledDataset, MixtureModel, PopulationMoments};
pub use rng::{derive_seed, stream_rng};
