//! End-to-end paths through the public API, with JSON hand-offs between stages.

use diffeo_core::fibrancy::{circle_section, halfline_obstruction, verify_circle_retract, SectionVariant};
use diffeo_core::pairs::{build_equidef_map, verify_pair_equivalence, Direction};
use diffeo_core::realize::{natural_product_map, realize, surjectivity_probe};
use diffeo_core::smoothcalc::verify_map_of_pairs;
use diffeo_core::{RealPoint, SimplicialSet, SmoothMap};

#[test]
fn simplicial_json_to_seams() {
    let horn = SimplicialSet::horn(4, 2).unwrap();
    let back = SimplicialSet::from_json(&horn.to_json()).unwrap();
    assert_eq!(back.nondegenerate_counts(), horn.nondegenerate_counts());
    let seams = realize(&back).seam_set();
    assert_eq!(seams.maximal.len(), 4);
    assert_eq!(seams.count(2), 6);
}

#[test]
fn product_map_lands_in_factors() {
    let d1 = SimplicialSet::delta(1).unwrap();
    let d2 = SimplicialSet::delta(2).unwrap();
    let prod = realize(&SimplicialSet::product(&d1, &d2).unwrap());
    let top = prod.maximal_cells();
    assert_eq!(top.len(), 3);
    let p = RealPoint::new(top[0].clone(), vec![0.1, 0.2, 0.3, 0.4]);
    let (a, b) = natural_product_map(&prod, &p).unwrap();
    assert!((a.coords.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!((b.coords.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(surjectivity_probe(&prod, 300).pass);
}

#[test]
fn equidef_map_serializes_and_still_verifies() {
    let m = build_equidef_map((6, 2), Direction::Forward, 2, 0.2).unwrap();
    let map = SmoothMap::from_json(&m.map.to_json()).unwrap();
    let rep = verify_map_of_pairs(&map, &m.source, &m.target.clone().into(), 300, 3).unwrap();
    assert!(rep.pass, "{rep}");
    assert!(verify_pair_equivalence((1, 2), 3, 0.2, 200, 1).unwrap().pass);
}

#[test]
fn circle_section_and_obstruction_constants() {
    let p = circle_section(0.5, 0.2).unwrap();
    assert_eq!(p.coords[0], 0.0);
    assert!(verify_circle_retract(0.25, 1000, 1, SectionVariant::Blended).pass);
    let h = halfline_obstruction();
    assert_eq!(h.h2_exact, (-6, 1));
    assert!(h.no_nonnegative_extension);
}
