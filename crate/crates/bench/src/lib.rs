//! Fixtures shared by the benchmarks.

use diffeo_core::fibrancy::random_polynomial;
use diffeo_core::realize::realize;
use diffeo_core::sampling::{rng, uniform_box};
use diffeo_core::{CellComplex, HornData, RealPoint, SimplicialSet};

pub fn delta_product(p: usize, q: usize) -> SimplicialSet {
    SimplicialSet::product(&SimplicialSet::delta(p).expect("Δᵖ"), &SimplicialSet::delta(q).expect("Δ^q"))
        .expect("product")
}

/// Unnormalized points on random cells of `c`, coordinates in `[-2, 3]`.
pub fn raw_points(c: &CellComplex, count: usize, seed: u64) -> Vec<RealPoint> {
    let mut r = rng(seed);
    (0..count)
        .map(|k| {
            let s = c.cells[k % c.cells.len()].simplex.clone();
            let mut u = uniform_box(&mut r, s.degree, -2.0, 3.0);
            u.insert(0, 1.0 - u.iter().sum::<f64>());
            RealPoint::new(s, u)
        })
        .collect()
}

pub fn square_complex() -> CellComplex {
    realize(&delta_product(1, 1))
}

pub fn polynomial_horn(n: usize, seed: u64) -> HornData {
    HornData::restrict_from(&random_polynomial(n, 1, 3, &mut rng(seed)), n)
}
