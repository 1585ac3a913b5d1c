//! Filling circle-valued horns by lifting through `π: ℝ → S¹`, `π(t) = e^{2πit}`.

use std::f64::consts::TAU;

use thiserror::Error;

use super::filler::{abelian_horn_filler, FillError};
use super::horn::{HornData, HornError};
use crate::smoothcalc::{Expr, Node, SmoothMap};

/// Lifts must agree on intersections to this accuracy.
pub const LIFT_TOL: f64 = 1e-9;
const UNWRAP_STEPS: usize = 400;
const UNWRAP_RADIUS: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiftError {
    #[error("lifting is implemented for n in {{2, 3}}, got {0}")]
    Dimension(usize),
    #[error("piece {0} is not of the form (cos 2πg, sin 2πg)")]
    NotCircleValued(usize),
    #[error("piece {piece} misses the basepoint lift by {gap:e}")]
    OriginMismatch { piece: usize, gap: f64 },
    #[error("lift of piece {piece} drifts from the unwrapped phase by {residual:e}")]
    Unwrap { piece: usize, residual: f64 },
    #[error("lifts of pieces {i} and {j} disagree by {residual:e} at {point:?}")]
    Mismatch { i: usize, j: usize, residual: f64, point: Vec<f64> },
    #[error(transparent)]
    Fill(#[from] FillError),
}

/// `π ∘ g` for a real phase `g`.
pub fn circle_of(g: &Expr) -> Vec<Expr> {
    let arg = TAU * g.clone();
    vec![arg.cos(), arg.sin()]
}

pub fn projection_map() -> SmoothMap {
    SmoothMap::from_fn(1, |t| circle_of(&t[0]))
}

/// Circle-valued horn with pieces `π ∘ g_i`.
pub fn circle_horn(n: usize, phases: &[SmoothMap]) -> HornData {
    HornData { n, pieces: phases.iter().map(|g| SmoothMap::new(g.arity_in, circle_of(&g.outputs[0]))).collect() }
}

/// Reads `g` back from a piece `(cos a, sin a)` with `a = 2πg`.
fn candidate_lift(piece: &SmoothMap) -> Option<SmoothMap> {
    let [c, s] = piece.outputs.as_slice() else { return None };
    let (Node::Cos { arg: a }, Node::Sin { arg: b }) = (c.node(), s.node()) else { return None };
    if a != b {
        return None;
    }
    let g = match a.node() {
        Node::Mul { lhs, rhs } if matches!(lhs.node(), Node::Const { value } if *value == TAU) => rhs.clone(),
        _ => a.clone() / TAU,
    };
    Some(SmoothMap::new(piece.arity_in, vec![g]))
}

/// Unwraps the phase of `piece` along each coordinate axis from the origin and
/// compares it with the candidate lift.
fn unwrap_check(piece: &SmoothMap, lift: &SmoothMap) -> f64 {
    let d = piece.arity_in;
    let phase = |y: &[f64]| {
        let v = piece.eval(y).expect("total");
        v[1].atan2(v[0]) / TAU
    };
    let base_lift = lift.eval(&vec![0.0; d]).expect("total")[0];
    let mut worst = 0.0f64;
    for axis in 0..d {
        for dir in [1.0, -1.0] {
            let mut y = vec![0.0; d];
            let mut prev = phase(&y);
            let mut acc = base_lift;
            for step in 1..=UNWRAP_STEPS {
                y[axis] = dir * UNWRAP_RADIUS * step as f64 / UNWRAP_STEPS as f64;
                let cur = phase(&y);
                let mut delta = cur - prev;
                delta -= delta.round();
                acc += delta;
                prev = cur;
                worst = worst.max((acc - lift.eval(&y).expect("total")[0]).abs());
            }
        }
    }
    worst
}

/// Lifts each piece to `ℝ` with a common value at the origin, fills the lifted
/// horn in `ℝ`, and composes with `π`.
pub fn lift_horn_through_bundle(b: &HornData) -> Result<SmoothMap, LiftError> {
    let n = b.n;
    if !(2..=3).contains(&n) {
        return Err(LiftError::Dimension(n));
    }
    let mut lifts = Vec::with_capacity(n);
    for (i, piece) in b.pieces.iter().enumerate() {
        let lift = candidate_lift(piece).ok_or(LiftError::NotCircleValued(i))?;
        let residual = unwrap_check(piece, &lift);
        if residual > LIFT_TOL {
            return Err(LiftError::Unwrap { piece: i, residual });
        }
        lifts.push(lift);
    }
    let origin = vec![0.0; n - 1];
    let a0 = lifts[0].eval(&origin).expect("total")[0];
    let mut shifted = Vec::with_capacity(n);
    for (i, lift) in lifts.into_iter().enumerate() {
        let gap = a0 - lift.eval(&origin).expect("total")[0];
        let k = gap.round();
        if (gap - k).abs() > LIFT_TOL {
            return Err(LiftError::OriginMismatch { piece: i, gap: gap - k });
        }
        shifted.push(SmoothMap::new(lift.arity_in, vec![lift.outputs[0].clone() + k]));
    }
    let lifted = HornData { n, pieces: shifted };
    match lifted.check_compatible(LIFT_TOL, 0) {
        Err(HornError::Incompatible { i, j, residual, point }) => {
            return Err(LiftError::Mismatch { i, j, residual, point })
        }
        Err(e) => return Err(LiftError::Fill(FillError::Horn(e))),
        Ok(_) => {}
    }
    let beta = abelian_horn_filler(&lifted)?;
    Ok(projection_map().compose(&beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibrancy::filler::verify_filler;

    fn affine(d: usize, c: f64, slope: &[f64]) -> SmoothMap {
        SmoothMap::from_fn(d, |y| vec![Expr::sum(y.iter().zip(slope).map(|(v, s)| *s * v.clone())) + c])
    }

    #[test]
    fn affine_phases_on_two_axes() {
        let b = circle_horn(2, &[affine(1, 0.3, &[1.7]), affine(1, 1.3, &[-0.4])]);
        let gamma = lift_horn_through_bundle(&b).unwrap();
        let rep = verify_filler(&b, &gamma, 1000, 0);
        assert!(rep.pass && rep.samples_used >= 1000, "{rep}");
    }

    #[test]
    fn constant_horn_gives_constant() {
        let b = circle_horn(
            3,
            &[affine(2, 0.25, &[0.0, 0.0]), affine(2, 2.25, &[0.0, 0.0]), affine(2, -0.75, &[0.0, 0.0])],
        );
        let gamma = lift_horn_through_bundle(&b).unwrap();
        let v = gamma.eval(&[0.4, -1.2, 2.0]).unwrap();
        assert!(v[0].abs() < 1e-12 && (v[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn winding_mismatch_rejected() {
        // On the line x_0 = x_1 = 0 the first piece winds once per unit, the second twice.
        let b =
            circle_horn(3, &[affine(2, 0.0, &[0.5, 1.0]), affine(2, 0.0, &[0.5, 2.0]), affine(2, 0.0, &[1.0, 1.0])]);
        assert!(matches!(lift_horn_through_bundle(&b), Err(LiftError::Mismatch { .. })));
        let b = circle_horn(2, &[affine(1, 0.0, &[1.0]), affine(1, 0.5, &[1.0])]);
        assert!(matches!(lift_horn_through_bundle(&b), Err(LiftError::OriginMismatch { .. })));
    }

    #[test]
    fn rejects_non_circle_pieces() {
        let b = HornData { n: 2, pieces: vec![SmoothMap::constant(1, &[1.0, 0.0]); 2] };
        assert!(matches!(lift_horn_through_bundle(&b), Err(LiftError::NotCircleValued(0))));
        assert!(matches!(lift_horn_through_bundle(&HornData { n: 4, pieces: vec![] }), Err(LiftError::Dimension(4))));
    }
}
