//! Finite simplicial sets: standard objects, products, horn fillers, π₀ and homology.

pub mod homology;
pub mod json;
pub mod map;
pub mod product;
pub mod set;
pub mod simplex;

pub use homology::{homology, AbelianGroup};
pub use json::SimplicialSetJson;
pub use map::{all_horn_fillers, find_horn_filler, verify_simplicial_homotopy, SimplicialMap};
pub use set::{Generator, Shape, SimplicialError, SimplicialSet, DEFAULT_DIM_CAP};
pub use simplex::SimplexRef;
