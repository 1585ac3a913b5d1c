//! `Λⁿ` as a retract of its loop space via `H(y)(t) = ψ(t)y`.

use thiserror::Error;

use crate::report::VerificationReport;
use crate::sampling::{max_abs_diff, substream, uniform, uniform_box};
use crate::smoothcalc::{cutoff_expr, Expr, SmoothMap};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoopError {
    #[error("psi({t}) = {value}, expected {expected}")]
    PsiSpec { t: f64, value: f64, expected: f64 },
}

/// `ψ(t) = φ(2t)·φ(2 − 2t) / φ(1)²`.
pub fn loop_psi(epsilon: f64) -> SmoothMap {
    let peak = crate::smoothcalc::cutoff_value(epsilon, 1.0).powi(2);
    SmoothMap::from_fn(1, |t| {
        vec![cutoff_expr(epsilon, 2.0 * t[0].clone()) * cutoff_expr(epsilon, 2.0 - 2.0 * t[0].clone()) / peak]
    })
}

/// `ψ = 0` off `(0, 1)` on a grid, `ψ(½) = 1`.
pub fn check_psi(psi: &SmoothMap) -> Result<(), LoopError> {
    let at = |t: f64| psi.eval(&[t]).expect("total")[0];
    let half = at(0.5);
    if (half - 1.0).abs() > 1e-12 {
        return Err(LoopError::PsiSpec { t: 0.5, value: half, expected: 1.0 });
    }
    for k in 0..=200 {
        for t in [-(k as f64) / 50.0, 1.0 + k as f64 / 50.0] {
            let v = at(t);
            if v != 0.0 {
                return Err(LoopError::PsiSpec { t, value: v, expected: 0.0 });
            }
        }
    }
    Ok(())
}

/// `(y, t) ↦ ψ(t)y` on `ℝⁿ × ℝ`.
pub fn loop_map(n: usize, psi: &SmoothMap) -> SmoothMap {
    let p = psi.outputs[0].substitute(&[Expr::var(n)]);
    SmoothMap::from_fn(n + 1, |v| v[..n].iter().map(|y| p.clone() * y.clone()).collect())
}

/// `H(y)(½) = y`, `H(y)(0) = H(y)(1) = 0`, and `H(y)(t)` stays on the hyperplane of `y`.
pub fn loop_retract_h(n: usize, psi: &SmoothMap, samples: usize, seed: u64) -> Result<VerificationReport, LoopError> {
    check_psi(psi)?;
    let h = loop_map(n, psi);
    let mut rep = VerificationReport::new(format!("fibrancy.loop_retract.n{n}"), 1e-12);
    let mut rng = substream(seed, "loop_retract");
    for k in 0..samples {
        let i = k % n;
        let mut y = uniform_box(&mut rng, n, -3.0, 3.0);
        y[i] = 0.0;
        let at = |t: f64| {
            let mut v = y.clone();
            v.push(t);
            h.eval(&v).expect("total")
        };
        let mid = max_abs_diff(&at(0.5), &y);
        let ends = max_abs_diff(&at(0.0), &vec![0.0; n]).max(max_abs_diff(&at(1.0), &vec![0.0; n]));
        let stays = at(uniform(&mut rng, -1.0, 2.0))[i].abs();
        rep.observe(mid.max(ends).max(stays), &y);
    }
    Ok(rep.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_meets_spec() {
        let psi = loop_psi(0.2);
        assert!(check_psi(&psi).is_ok());
        assert_eq!(psi.eval(&[0.5]).unwrap()[0], 1.0);
    }

    #[test]
    fn retract_holds() {
        let psi = loop_psi(0.25);
        for n in 2..=4 {
            let rep = loop_retract_h(n, &psi, 1000, 0).unwrap();
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn bad_psi_rejected() {
        let psi = SmoothMap::from_fn(1, |t| vec![t[0].clone()]);
        assert!(loop_retract_h(2, &psi, 10, 0).is_err());
    }
}
