//! Diffeologies given by generating families of plots.

use serde::{Deserialize, Serialize};

use crate::simplicial::set::subsets;
use crate::smoothcalc::{Expr, SmoothMap};

/// How a generated family is presented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Presentation {
    /// Plots locally factor through a generator or are constant.
    Generated,
    /// Colimit of the generators' domains.
    Coequalizer,
    /// Subset of the ambient Euclidean space with the induced plots.
    SubDiffeology,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratedDiffeology {
    pub name: String,
    pub carrier_dim: usize,
    pub generators: Vec<SmoothMap>,
    pub presentation: Presentation,
}

impl GeneratedDiffeology {
    pub fn new(
        name: impl Into<String>,
        carrier_dim: usize,
        generators: Vec<SmoothMap>,
        presentation: Presentation,
    ) -> Self {
        Self { name: name.into(), carrier_dim, generators, presentation }
    }

    /// Every generator lands in the carrier.
    pub fn is_valid(&self) -> bool {
        self.generators.iter().all(|g| g.arity_out() == self.carrier_dim)
    }

    /// Largest domain dimension among the generators.
    pub fn max_generator_dim(&self) -> usize {
        self.generators.iter().map(|g| g.arity_in).max().unwrap_or(0)
    }

    /// `ℝⁿ` generated by the inclusions of the coordinate `m`-planes.
    pub fn coordinate_planes(n: usize, m: usize) -> Self {
        let generators = subsets(n, m).into_iter().map(|plane| coordinate_plane_inclusion(n, &plane)).collect();
        Self::new(format!("R^{n} generated by coordinate {m}-planes"), n, generators, Presentation::Generated)
    }

    /// The coordinate hyperplanes of `ℝⁿ`, presented as a colimit or as a subset.
    pub fn horn(n: usize, presentation: Presentation) -> Self {
        let mut d = Self::coordinate_planes(n, n.saturating_sub(1));
        d.name = match presentation {
            Presentation::SubDiffeology => format!("Lambda^{n}_sub"),
            _ => format!("Lambda^{n}"),
        };
        d.presentation = presentation;
        d
    }

    /// `ℝ` with the diffeology generated by `x ↦ ‖x‖²` on `ℝⁿ`.
    pub fn squared_norm_line(n: usize) -> Self {
        let g = SmoothMap::from_fn(n, |x| vec![Expr::sum(x.iter().map(|v| v.square()))]);
        Self::new(format!("X_{n}"), 1, vec![g], Presentation::Generated)
    }
}

/// `ℝ^m → ℝⁿ` placing the inputs at the coordinates listed in `plane`.
pub fn coordinate_plane_inclusion(n: usize, plane: &[usize]) -> SmoothMap {
    SmoothMap::from_fn(plane.len(), |y| {
        (0..n)
            .map(|i| match plane.iter().position(|&p| p == i) {
                Some(k) => y[k].clone(),
                None => Expr::constant(0.0),
            })
            .collect()
    })
}
