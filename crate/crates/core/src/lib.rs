//! Multigraph immersions, tree-cut decompositions, and certified
//! packing/covering duality for planar subcubic patterns at desk scale.

pub mod decomposition;
pub mod ep;
pub mod error;
pub mod generators;
pub mod immersion;
pub mod io;
pub mod multigraph;

pub use error::{Error, Result};
pub use multigraph::{EdgeRef, Multigraph, VertexId};
