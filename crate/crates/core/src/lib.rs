//! Metric depth analytics over user-chosen (pseudo-)distances.
//!
//! The depth of a point with respect to a sample is the fraction of sample
//! pairs whose lens (the intersection of the two balls centred at the pair
//! members with radius equal to their mutual distance) contains the point.
//! Because only distance comparisons enter the computation, the depth is
//! defined in any metric space and is invariant under strictly increasing,
//! zero-preserving transformations of the distance.
//!
//! The crate provides:
//!
//! - [`depth`]: exact, adjusted and subsampled depth engines over a
//!   [`depth::Sample`] bound to any [`depth::Metric`];
//! - [`metrics`]: the distances used in practice — Minkowski on vectors,
//!   L2/supremum/second-derivative/PCA-score distances on discretized curves,
//!   Wasserstein on distribution functions, and validated distance matrices;
//! - [`analysis`]: ranking, outlier flagging, DD-plot data and
//!   depth-vs-depth classification;
//! - [`counterexamples`]: samplers for three centrally symmetric planar
//!   distributions together with grid evaluation of the depth surface,
//!   sections and a centre-maximality check;
//! - [`io`]: CSV ingestion and emission used by the `mudepth` binary.

pub mod analysis;
pub mod counterexamples;
pub mod depth;
mod error;
pub mod io;
pub mod metrics;
pub(crate) mod rng;

pub mod cli;

pub use error::{Error, Result};
