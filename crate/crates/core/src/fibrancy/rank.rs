//! Tangent-rank obstruction for diffeologies generated by coordinate planes.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::diffeology::GeneratedDiffeology;
use super::horn::{drop_coord, hyperplane_inclusion};
use crate::sampling::{max_abs_diff, substream, uniform_box};
use crate::smoothcalc::SmoothMap;

const RANK_TOL: f64 = 1e-9;
const HYPERPLANE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankReport {
    pub n: usize,
    /// Dimension `m` of the generators the candidate is declared to factor through.
    pub factor_dim: Option<usize>,
    pub jacobian: Vec<Vec<f64>>,
    pub jacobian_rank: usize,
    /// Rank forced by being the identity on the coordinate hyperplanes.
    pub required_rank: usize,
    /// Rank allowed by the factorization.
    pub factor_bound: usize,
    pub hyperplane_residual: f64,
    pub hyperplane_identity_holds: bool,
    pub factorization_consistent: bool,
    /// The two constraints cannot both hold for any map.
    pub contradiction: bool,
}

/// Jacobian of `f` at `0`, its rank, and whether the hyperplane-identity
/// constraint (rank `n`) can coexist with factoring through `plots`.
pub fn rank_obstruction(f: &SmoothMap, plots: Option<&GeneratedDiffeology>, n: usize, seed: u64) -> RankReport {
    assert_eq!(f.arity_in, n);
    let jets = f.eval_jet2(&vec![0.0; n]).expect("candidate evaluates at 0");
    let jacobian: Vec<Vec<f64>> = jets.iter().map(|j| j.gradient.clone()).collect();
    let m = DMatrix::from_fn(jets.len(), n, |r, c| jacobian[r][c]);
    let jacobian_rank = m.rank(RANK_TOL);

    let mut rng = substream(seed, "rank_hyperplanes");
    let mut residual = 0.0f64;
    for i in 0..n {
        let g = f.compose(&hyperplane_inclusion(n, i));
        for _ in 0..64 {
            let mut x = uniform_box(&mut rng, n, -1.0, 1.0);
            x[i] = 0.0;
            residual = residual.max(max_abs_diff(&g.eval(&drop_coord(&x, i)).expect("total"), &x));
        }
    }

    let factor_dim = plots.map(GeneratedDiffeology::max_generator_dim);
    let factor_bound = factor_dim.unwrap_or(n).min(n);
    RankReport {
        n,
        factor_dim,
        jacobian,
        jacobian_rank,
        required_rank: n,
        factor_bound,
        hyperplane_residual: residual,
        hyperplane_identity_holds: residual <= HYPERPLANE_TOL,
        factorization_consistent: jacobian_rank <= factor_bound,
        contradiction: factor_bound < n,
    }
}

/// `ℝⁿ → ℝⁿ`, `x ↦ (x_0, …, x_{m−1}, 0, …)`: the inclusion of a coordinate
/// `m`-plane after the projection onto it.
pub fn plane_projection_candidate(n: usize, m: usize) -> SmoothMap {
    SmoothMap::from_fn(n, |x| {
        (0..n).map(|i| if i < m { x[i].clone() } else { crate::smoothcalc::Expr::constant(0.0) }).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_candidate_contradicts() {
        let plots = GeneratedDiffeology::coordinate_planes(2, 1);
        let r = rank_obstruction(&plane_projection_candidate(2, 1), Some(&plots), 2, 0);
        assert_eq!((r.jacobian_rank, r.required_rank, r.factor_bound), (1, 2, 1));
        assert!(r.contradiction && r.factorization_consistent && !r.hyperplane_identity_holds);
    }

    #[test]
    fn identity_is_unobstructed() {
        let r = rank_obstruction(&SmoothMap::identity(3), None, 3, 0);
        assert_eq!(r.jacobian_rank, 3);
        assert!(r.hyperplane_identity_holds && !r.contradiction);
    }

    #[test]
    fn three_dimensional_planes() {
        let plots = GeneratedDiffeology::coordinate_planes(3, 2);
        let r = rank_obstruction(&plane_projection_candidate(3, 2), Some(&plots), 3, 0);
        assert_eq!(r.jacobian_rank, 2);
        assert!(r.contradiction);
        let r = rank_obstruction(&SmoothMap::identity(3), Some(&plots), 3, 0);
        assert!(r.contradiction && r.hyperplane_identity_holds && !r.factorization_consistent);
    }
}
