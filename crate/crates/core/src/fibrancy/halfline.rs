//! The half-line `[0, ∞)` has no filler for a particular `Λ³` horn.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::horn::HornData;
use crate::smoothcalc::{Expr, SmoothMap};

/// Pieces `f_i(x_j, x_k) = (x_j − x_k)²` on the three coordinate planes.
pub fn halfline_horn() -> HornData {
    let piece = SmoothMap::from_fn(2, |y| vec![(y[0].clone() - y[1].clone()).square()]);
    HornData::new(3, vec![piece.clone(), piece.clone(), piece]).expect("three planar pieces")
}

/// `F = Σ_{i<j}(x_i − x_j)² − Σ x_i²`, an extension that is negative along the diagonal.
pub fn candidate_extension() -> SmoothMap {
    SmoothMap::from_fn(3, |x| {
        let pairs = [(0, 1), (0, 2), (1, 2)].map(|(i, j)| (x[i].clone() - x[j].clone()).square());
        vec![Expr::sum(pairs) - Expr::sum(x.iter().map(Expr::square))]
    })
}

/// `h(t) = F(t, t, t)` for the candidate.
pub fn candidate_h(t: f64) -> f64 {
    candidate_extension().eval(&[t, t, t]).expect("polynomial")[0]
}

fn quadratic_piece(a: Rational64, b: Rational64) -> Rational64 {
    (a - b) * (a - b)
}

/// Second derivatives of a quadratic `q` at `0` from exact second differences:
/// `q(2e_i) − 2q(e_i) + q(0)` and `q(e_i + e_j) − q(e_i) − q(e_j) + q(0)`.
fn exact_hessian(q: impl Fn(&[Rational64]) -> Rational64, dim: usize) -> Vec<Vec<Rational64>> {
    let zero = Rational64::from_integer(0);
    let one = Rational64::from_integer(1);
    let e = |idx: &[(usize, Rational64)]| {
        let mut v = vec![zero; dim];
        for &(i, c) in idx {
            v[i] += c;
        }
        v
    };
    let q0 = q(&e(&[]));
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        q(&e(&[(i, one + one)])) - q(&e(&[(i, one)])) * 2 + q0
                    } else {
                        q(&e(&[(i, one), (j, one)])) - q(&e(&[(i, one)])) - q(&e(&[(j, one)])) + q0
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HalflineReport {
    /// `F_i(0)` forced by the faces.
    pub forced_gradient: Vec<f64>,
    /// `F_{ij}(0)` forced by the faces (automatic differentiation).
    pub forced_hessian: Vec<Vec<f64>>,
    /// `h''(0)` in exact arithmetic, as `(numerator, denominator)`.
    pub h2_exact: (i64, i64),
    pub h2_ad: f64,
    /// Largest disagreement between two faces forcing the same entry.
    pub face_consistency: f64,
    pub candidate_face_residual: f64,
    /// `max |F(t,t,t) + 3t²|` over a grid.
    pub candidate_diagonal_residual: f64,
    /// True when `h(0) = h'(0) = 0 > h''(0)`, so no non-negative extension exists.
    pub no_nonnegative_extension: bool,
}

/// Forced jets at the origin and `h''(0) = Σ_{ij} F_{ij}(0)` for `h(t) = F(t,t,t)`.
pub fn halfline_obstruction() -> HalflineReport {
    let horn = halfline_horn();
    let mut grad = [f64::NAN; 3];
    let mut hess = [[f64::NAN; 3]; 3];
    let mut consistency = 0.0f64;
    let mut set = |slot: &mut f64, v: f64| {
        if slot.is_nan() {
            *slot = v;
        } else {
            consistency = consistency.max((*slot - v).abs());
        }
    };
    for (i, piece) in horn.pieces.iter().enumerate() {
        let coords: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let jet = &piece.eval_jet2(&[0.0, 0.0]).expect("polynomial")[0];
        for (a, &p) in coords.iter().enumerate() {
            set(&mut grad[p], jet.gradient[a]);
            for (b, &q) in coords.iter().enumerate() {
                set(&mut hess[p][q], jet.hess(a, b));
            }
        }
    }
    let h2_ad: f64 = hess.iter().flatten().sum();

    let mut exact = [[Rational64::from_integer(0); 3]; 3];
    for i in 0..3 {
        let coords: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let h = exact_hessian(|v| quadratic_piece(v[0], v[1]), 2);
        for (a, &p) in coords.iter().enumerate() {
            for (b, &q) in coords.iter().enumerate() {
                exact[p][q] = h[a][b];
            }
        }
    }
    let h2: Rational64 = exact.iter().flatten().sum();

    let cand = candidate_extension();
    let mut face_res = 0.0f64;
    let mut diag_res = 0.0f64;
    for k in -20..=20 {
        for l in -20..=20 {
            // Dyadic grid: every intermediate value is exact in f64.
            let (s, t) = (k as f64 / 8.0, l as f64 / 4.0);
            for i in 0..3 {
                let mut x = vec![s, t];
                x.insert(i, 0.0);
                let f = cand.eval(&x).expect("polynomial")[0];
                let g = horn.eval_on(i, &x).expect("polynomial")[0];
                face_res = face_res.max((f - g).abs());
            }
        }
        let t = k as f64 / 16.0;
        diag_res = diag_res.max((candidate_h(t) + 3.0 * t * t).abs());
    }

    let h0 = horn.eval_on(0, &[0.0; 3]).expect("polynomial")[0];
    let h1: f64 = grad.iter().sum();
    HalflineReport {
        forced_gradient: grad.to_vec(),
        forced_hessian: hess.iter().map(|r| r.to_vec()).collect(),
        h2_exact: (*h2.numer(), *h2.denom()),
        h2_ad,
        face_consistency: consistency,
        candidate_face_residual: face_res,
        candidate_diagonal_residual: diag_res,
        no_nonnegative_extension: h0 == 0.0 && h1 == 0.0 && h2 < Rational64::from_integer(0),
    }
}
