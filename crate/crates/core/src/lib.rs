//! Computational workbench for smooth homotopy theory of diffeological spaces.
//!
//! * [`simplicial`]: finite simplicial sets in Eilenberg–Zilber form.
//! * [`smoothcalc`]: smooth maps as expression DAGs with second-order jets.
//! * [`pairs`]: the domain pairs of smooth homotopy groups and the maps between them.
//! * [`realize`]: the diffeological realization as a cell complex.
//! * [`fibrancy`]: horn fillers, retractions and non-fibrancy obstructions.

pub mod corpus;
pub mod fibrancy;
pub mod pairs;
pub mod realize;
pub mod report;
pub mod sampling;
pub mod simplicial;
pub mod smoothcalc;

pub use fibrancy::{GeneratedDiffeology, HornData, Presentation};
pub use realize::{CellComplex, RealPoint, SeamReport};
pub use report::{VerificationReport, AD_FD_TOL, EXACT_TOL};
pub use simplicial::{SimplexRef, SimplicialMap, SimplicialSet};
pub use smoothcalc::{CutoffFn, Expr, Jet2, PairCase, PairSpec, PairTarget, SmoothMap};
