//! F-factors in randomly perturbed k-uniform hypergraphs, at desk scale.
//!
//! The crate covers hypergraph primitives, density parameters of patterns, seeded random
//! models, extremal host constructions, exact tiling search, absorbers and a Monte Carlo
//! harness.

pub mod absorbers;
pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod experiments;
pub mod exact;
pub mod factor;
pub mod hypergraph;
pub mod pattern;
pub mod random;

pub use error::{Error, Result};
pub use exact::PowerProduct;
pub use hypergraph::{Hypergraph, VertexSet};
pub use pattern::{DensityRatio, Pattern};
