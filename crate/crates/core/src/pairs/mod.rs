//! Maps between the domain pairs `(A, B)` of smooth homotopy groups, and the
//! composite `h` and prism `β` of the simplicial comparison.

pub mod equidef;
pub mod maps;
pub mod product_h;

pub use equidef::{
    build_equidef, build_equidef_map, positivity_guard, verify_pair_equivalence, verify_sphere_chain, Direction,
    Equidef, EquidefMapSpec, SearchOptions, SphereChain, SUPPORTED_PAIRS,
};
pub use maps::{normalize_u, phi_n, psi, psi_inverse};
pub use product_h::{pair_product_h, prism_beta};
