//! Constructive ε-cut-off functions built from the flat bump `exp(-1/t)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::expr::{Expr, SmoothMap};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CutoffError {
    #[error("cut-off parameter {0} outside (0, 1/2)")]
    EpsilonOutOfRange(f64),
}

/// `g(u) / (g(u) + g(1 - u))`: `0` for `u <= 0`, `1` for `u >= 1`, strictly
/// increasing in between.
pub fn smooth_step(u: Expr) -> Expr {
    let a = u.flat_bump();
    let b = (1.0 - u).flat_bump();
    a.clone() / (a + b)
}

/// `φ_ε(t)`, the symmetric ε-cut-off applied to an expression.
pub fn cutoff_expr(epsilon: f64, t: Expr) -> Expr {
    let a = (t.clone() - epsilon).flat_bump();
    let b = ((1.0 - epsilon) - t).flat_bump();
    a.clone() / (a + b)
}

/// Plain-number evaluation of `φ_ε`, used where a DAG would be overkill.
pub fn cutoff_value(epsilon: f64, t: f64) -> f64 {
    let g = |s: f64| if s > 0.0 { (-1.0 / s).exp() } else { 0.0 };
    let a = g(t - epsilon);
    let b = g(1.0 - epsilon - t);
    a / (a + b)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CutoffFn {
    pub epsilon: f64,
    pub map: SmoothMap,
}

impl CutoffFn {
    pub fn eval(&self, t: f64) -> f64 {
        self.map.eval(&[t]).expect("cut-off is total")[0]
    }
}

/// `φ(t) = g(t-ε) / (g(t-ε) + g(1-ε-t))`.
pub fn make_cutoff(epsilon: f64) -> Result<CutoffFn, CutoffError> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(CutoffError::EpsilonOutOfRange(epsilon));
    }
    let map = SmoothMap::from_fn(1, |x| vec![cutoff_expr(epsilon, x[0].clone())]);
    Ok(CutoffFn { epsilon, map })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_epsilon() {
        for e in [0.0, -0.1, 0.5, 0.7, f64::NAN] {
            assert!(make_cutoff(e).is_err(), "{e}");
        }
    }

    #[test]
    fn endpoint_values() {
        let eps = 0.2;
        let phi = make_cutoff(eps).unwrap();
        assert_eq!(phi.eval(eps / 2.0), 0.0);
        assert_eq!(phi.eval(1.0 - eps / 2.0), 1.0);
        assert!((phi.eval(0.5) - 0.5).abs() < 1e-15);
        assert_eq!(phi.eval(eps), 0.0);
        assert_eq!(phi.eval(1.0), 1.0);
    }

    #[test]
    fn jets_vanish_at_origin() {
        let phi = make_cutoff(0.3).unwrap();
        let j = &phi.map.eval_jet2(&[0.0]).unwrap()[0];
        assert!(j.is_flat_zero());
    }

    #[test]
    fn invariants_on_dense_grid() {
        for eps in [0.05, 0.1, 0.2, 0.3, 0.45] {
            let phi = make_cutoff(eps).unwrap();
            let mut prev = 0.0;
            for k in 0..=10_000 {
                let t = -0.5 + 2.0 * k as f64 / 10_000.0;
                let v = phi.eval(t);
                assert!((0.0..=1.0).contains(&v));
                if t < eps {
                    assert_eq!(v, 0.0);
                }
                if t > 1.0 - eps {
                    assert_eq!(v, 1.0);
                }
                // exp(-1/s) underflows to 0 for s below about 1/745
                if t > eps + 2e-3 && t < 1.0 - eps {
                    assert!(v > 0.0, "eps {eps} t {t}");
                }
                assert!(v >= prev, "monotone at {t}");
                prev = v;
                assert_eq!(v, cutoff_value(eps, t));
            }
        }
    }

    #[test]
    fn smooth_step_clamps() {
        let f = SmoothMap::from_fn(1, |x| vec![smooth_step(x[0].clone())]);
        assert_eq!(f.eval(&[-1.0]).unwrap()[0], 0.0);
        assert_eq!(f.eval(&[1.5]).unwrap()[0], 1.0);
        assert_eq!(f.eval(&[0.5]).unwrap()[0], 0.5);
    }
}
