//! Exact lattice arithmetic for deciding minimality of symplectic sums.

pub mod error;
pub mod lattice;
pub mod model;
pub mod exceptional;
pub mod knef;
mod search;
pub mod sum;
pub mod geography;
pub mod descriptor;
pub mod stress;

pub use error::{Error, Result};
pub use lattice::{pair, square, HomologyClass, IntersectionLattice};
pub use model::{ManifoldModel, ModelKind, SurfaceInModel};
