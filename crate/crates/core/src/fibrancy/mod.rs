//! Horn fillers, the circle section, lifting through `ℝ → S¹`, retractions and
//! obstructions to fibrancy.

pub mod circle;
pub mod diffeology;
pub mod dopen;
pub mod filler;
pub mod halfline;
pub mod horn;
pub mod lift;
pub mod loops;
pub mod rank;

pub use circle::{
    c_map, circle_model, circle_section, circle_simplicial_set, r_map, reduce_theta, verify_circle_retract,
    CircleModel, CircleSection, SectionVariant,
};
pub use diffeology::{coordinate_plane_inclusion, GeneratedDiffeology, Presentation};
pub use dopen::{dopen_retraction, verify_dopen, DOpenError, DOpenRetraction};
pub use filler::{abelian_horn_filler, abelian_horn_filler_with, filler_sign, verify_filler, FillError};
pub use halfline::{candidate_extension, candidate_h, halfline_horn, halfline_obstruction, HalflineReport};
pub use horn::{drop_coord, hyperplane_inclusion, insert_zero, random_polynomial, HornData, HornError, COMPAT_TOL};
pub use lift::{circle_horn, lift_horn_through_bundle, projection_map, LiftError, LIFT_TOL};
pub use loops::{check_psi, loop_map, loop_psi, loop_retract_h, LoopError};
pub use rank::{plane_projection_candidate, rank_obstruction, RankReport};
