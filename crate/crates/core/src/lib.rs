//! Biplanar drawings of the 8-dimensional hypercube.
//!
//! The crate builds the two-plane edge partition of `Q_8` made of depleted
//! 5-cubes, checks its combinatorial structure, counts crossings of explicit
//! integer-grid drawings with exact arithmetic, searches for low-crossing
//! layouts, and assembles crossing certificates. All bounds produced here are
//! upper bounds witnessed by concrete geometry.

pub mod certificate;
pub mod construction;
pub mod drawing;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod iso;
pub mod kplanar;
pub mod label;
pub mod layout;
pub mod partition;
pub mod report;

pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use label::VertexLabel;
