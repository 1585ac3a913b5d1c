//! Diffeological realization: cells, normal forms, seams and the product comparison map.

pub mod complex;
pub mod product_map;
pub mod seams;

pub use complex::{realize, Cell, CellComplex, Gluing, RealPoint, RealizeError, Seam, SeamReport, SUM_TOL, ZERO_SNAP};
pub use product_map::{
    natural_product_map, non_injectivity_witness, product_preimage, surjectivity_probe, unit_law_check,
    NonInjectivityWitness,
};
pub use seams::{
    check_gluing, embed_face_point, gluing_consistency, horn_cell_counts, parallel_edges, parallel_seam_artifact,
    ParallelSeamReport,
};
