//! Classical samplers over vertex subsets of nonnegative weighted graphs.
//!
//! The central object is a sampler whose output distribution over `k`-vertex
//! subsets is proportional to the *hafnian* of the induced adjacency
//! submatrix — the weighted count of perfect matchings inside the subset.
//! Gaussian boson samplers draw the same subsets with probability
//! proportional to the *squared* hafnian; because the adjacency matrix of a
//! graph is nonnegative, the hafnian-proportional law can be produced
//! classically by drawing edges i.i.d. with probability proportional to
//! their weight and rejecting draws with colliding endpoints.
//!
//! The crate provides:
//!
//! - [`hafnian`]: exact hafnian computation (a permutation-sum oracle and a
//!   matching-expansion recursion usable to dimension 20),
//! - [`graph`]: graph representation, file ingestion, Erdős–Rényi
//!   generation, density/clique utilities and vertex-weight transforms,
//! - [`encoding`]: compilation of a graph into the edge-draw sampler
//!   program plus squeezing-side calibration (Takagi values, mean-photon
//!   scale, loss compensation),
//! - [`samplers`]: the edge-draw rejection sampler, uniform and exact
//!   sector-normalized distributions (hafnian and squared-hafnian laws),
//!   the independent-pairs Poisson sampler, and probability-ratio reports,
//! - [`heuristics`]: experiment harnesses for densest-`k`-subgraph
//!   statistics and maximum-weight-clique search.
//!
//! Everything that consumes randomness takes an explicit seed or generator;
//! see [`rng`]. Enumeration and experiment loops run on rayon when the
//! `parallel` feature (default) is enabled and fall back to sequential
//! iteration without it; results are identical either way because all
//! reductions happen in a fixed index order.

pub mod encoding;
pub mod error;
pub mod graph;
pub mod hafnian;
pub mod heuristics;
pub mod parallel;
pub mod rng;
pub mod samplers;
pub mod util;

pub use error::Error;
pub use graph::{Graph, GraphFormat, Subset, VertexWeights};
pub use hafnian::SymMatrix;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
