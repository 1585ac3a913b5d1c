//! Smooth maps out of the coequalizer horn `Λⁿ`: one piece per coordinate hyperplane.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sampling::{substream, uniform, uniform_box, SampleRng};
use crate::smoothcalc::{Expr, SmoothMap};

/// Pieces must agree on pairwise intersections to this accuracy (relative to magnitude).
pub const COMPAT_TOL: f64 = 1e-12;
const COMPAT_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HornError {
    #[error("expected {expected} pieces, got {got}")]
    PieceCount { expected: usize, got: usize },
    #[error("piece {piece} takes {got} inputs, expected {expected}")]
    PieceArity { piece: usize, expected: usize, got: usize },
    #[error("pieces have different output dimensions")]
    OutputMismatch,
    #[error("pieces {i} and {j} disagree by {residual:e} at {point:?}")]
    Incompatible { i: usize, j: usize, residual: f64, point: Vec<f64> },
    #[error("piece {piece} failed to evaluate at {point:?}")]
    Eval { piece: usize, point: Vec<f64> },
}

/// `pieces[i]` is a map on the hyperplane `x_i = 0`, in the remaining coordinates in order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HornData {
    pub n: usize,
    pub pieces: Vec<SmoothMap>,
}

/// Drops coordinate `i`.
pub fn drop_coord(x: &[f64], i: usize) -> Vec<f64> {
    x.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| *v).collect()
}

/// Inserts a zero at coordinate `i`.
pub fn insert_zero(y: &[f64], i: usize) -> Vec<f64> {
    let mut x = y.to_vec();
    x.insert(i, 0.0);
    x
}

/// The inclusion `ℝ^{n−1} → ℝⁿ` onto `x_i = 0`.
pub fn hyperplane_inclusion(n: usize, i: usize) -> SmoothMap {
    SmoothMap::from_fn(n - 1, |y| {
        let mut out = y.to_vec();
        out.insert(i, Expr::constant(0.0));
        out
    })
}

impl HornData {
    pub fn new(n: usize, pieces: Vec<SmoothMap>) -> Result<Self, HornError> {
        let h = Self { n, pieces };
        h.check_shape()?;
        Ok(h)
    }

    /// The horn obtained by restricting a map on `ℝⁿ` to the hyperplanes.
    pub fn restrict_from(g: &SmoothMap, n: usize) -> Self {
        assert_eq!(g.arity_in, n);
        Self { n, pieces: (0..n).map(|i| g.compose(&hyperplane_inclusion(n, i))).collect() }
    }

    pub fn arity_out(&self) -> usize {
        self.pieces.first().map_or(0, SmoothMap::arity_out)
    }

    fn check_shape(&self) -> Result<(), HornError> {
        if self.pieces.len() != self.n {
            return Err(HornError::PieceCount { expected: self.n, got: self.pieces.len() });
        }
        for (k, p) in self.pieces.iter().enumerate() {
            if p.arity_in + 1 != self.n {
                return Err(HornError::PieceArity { piece: k, expected: self.n - 1, got: p.arity_in });
            }
            if p.arity_out() != self.arity_out() {
                return Err(HornError::OutputMismatch);
            }
        }
        Ok(())
    }

    /// Value of piece `i` at a point `x ∈ ℝⁿ` with `x_i = 0`.
    pub fn eval_on(&self, i: usize, x: &[f64]) -> Result<Vec<f64>, HornError> {
        let y = drop_coord(x, i);
        self.pieces[i].eval(&y).map_err(|_| HornError::Eval { piece: i, point: x.to_vec() })
    }

    /// Value at a point of `Λⁿ`, read from the first hyperplane containing it.
    pub fn eval_point(&self, x: &[f64]) -> Option<Result<Vec<f64>, HornError>> {
        x.iter().position(|v| *v == 0.0).map(|i| self.eval_on(i, x))
    }

    /// Pairwise agreement on `x_i = x_j = 0`, at the origin and at seeded samples.
    pub fn check_compatible(&self, tol: f64, seed: u64) -> Result<f64, HornError> {
        self.check_shape()?;
        let mut rng = substream(seed, "horn_compat");
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                for s in 0..COMPAT_SAMPLES {
                    let mut x = if s == 0 { vec![0.0; self.n] } else { uniform_box(&mut rng, self.n, -2.0, 2.0) };
                    x[i] = 0.0;
                    x[j] = 0.0;
                    let a = self.eval_on(i, &x)?;
                    let b = self.eval_on(j, &x)?;
                    let r = a
                        .iter()
                        .zip(&b)
                        .map(|(p, q)| (p - q).abs() / p.abs().max(q.abs()).max(1.0))
                        .fold(0.0, f64::max);
                    if r > tol || r.is_nan() {
                        return Err(HornError::Incompatible { i, j, residual: r, point: x });
                    }
                    worst = worst.max(r);
                }
            }
        }
        Ok(worst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// A random polynomial map `ℝⁿ → ℝᵐ` of total degree at most `degree`,
/// coefficients uniform in `[−1, 1]`.
pub fn random_polynomial(n: usize, m: usize, degree: usize, rng: &mut SampleRng) -> SmoothMap {
    let mut exponents: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        exponents = exponents
            .into_iter()
            .flat_map(|e| {
                let used: usize = e.iter().sum();
                (0..=degree - used).map(move |a| {
                    let mut e = e.clone();
                    e.push(a);
                    e
                })
            })
            .collect();
    }
    SmoothMap::from_fn(n, |x| {
        (0..m)
            .map(|_| {
                Expr::sum(exponents.iter().map(|e| {
                    let c = Expr::constant(uniform(rng, -1.0, 1.0));
                    let mono = e.iter().enumerate().flat_map(|(i, &a)| std::iter::repeat_n(x[i].clone(), a));
                    c * Expr::product(mono)
                }))
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng;

    #[test]
    fn restriction_is_compatible() {
        let mut r = rng(5);
        for n in 1..=4 {
            let g = random_polynomial(n, 2, 3, &mut r);
            let h = HornData::restrict_from(&g, n);
            assert!(h.check_compatible(COMPAT_TOL, 0).is_ok());
        }
    }

    #[test]
    fn mismatched_pieces_rejected() {
        let a = SmoothMap::from_fn(1, |y| vec![y[0].clone()]);
        let b = SmoothMap::from_fn(1, |y| vec![y[0].clone() + 1.0]);
        let h = HornData::new(2, vec![a, b]).unwrap();
        assert!(matches!(h.check_compatible(COMPAT_TOL, 0), Err(HornError::Incompatible { .. })));
    }

    #[test]
    fn shape_errors() {
        let a = SmoothMap::identity(2);
        assert!(matches!(HornData::new(2, vec![a.clone(), a]), Err(HornError::PieceArity { .. })));
        assert!(matches!(HornData::new(3, vec![]), Err(HornError::PieceCount { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let g = SmoothMap::from_fn(3, |x| vec![x[0].clone() * x[1].clone() - x[2].clone()]);
        let h = HornData::restrict_from(&g, 3);
        let back = HornData::from_json(&h.to_json()).unwrap();
        assert_eq!(back.n, 3);
        assert_eq!(back.eval_on(1, &[2.0, 0.0, 5.0]).unwrap(), vec![-5.0]);
    }

    #[test]
    fn coordinate_helpers() {
        assert_eq!(drop_coord(&[1.0, 2.0, 3.0], 1), vec![1.0, 3.0]);
        assert_eq!(insert_zero(&[1.0, 3.0], 1), vec![1.0, 0.0, 3.0]);
        assert_eq!(hyperplane_inclusion(3, 2).eval(&[4.0, 5.0]).unwrap(), vec![4.0, 5.0, 0.0]);
    }
}
