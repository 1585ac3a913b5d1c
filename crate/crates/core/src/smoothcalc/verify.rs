//! Sampling harnesses: AD against finite differences, maps of pairs, homotopies.

use rayon::prelude::*;

use std::collections::HashSet;

use super::eval::EvalError;
use super::expr::{Expr, Node, SmoothMap};
use super::jet::Jet2;
use super::pairspec::{PairError, PairSpec};
use crate::report::{VerificationReport, AD_FD_TOL, EXACT_TOL};
use crate::sampling::{max_abs_diff, norm, substream, uniform_box};

/// Number of equispaced time values at which homotopies are probed.
pub const HOMOTOPY_TIME_STEPS: usize = 33;

/// Where a map of pairs is supposed to send the subset of its source.
#[derive(Debug, Clone, PartialEq)]
pub enum PairTarget {
    Pair(PairSpec),
    Basepoint(Vec<f64>),
}

impl PairTarget {
    pub fn ambient_dim(&self) -> usize {
        match self {
            PairTarget::Pair(p) => p.ambient_dim(),
            PairTarget::Basepoint(b) => b.len(),
        }
    }

    /// Violation of `y` lying in the target subset.
    pub fn subset_violation(&self, y: &[f64]) -> f64 {
        match self {
            PairTarget::Pair(p) => p.violation(y),
            PairTarget::Basepoint(b) => max_abs_diff(y, b),
        }
    }

    /// Violation of `y` lying in the target space; a bare basepoint target
    /// imposes nothing here.
    pub fn space_violation(&self, y: &[f64]) -> f64 {
        match self {
            PairTarget::Pair(p) => p.space_violation(y),
            PairTarget::Basepoint(_) => 0.0,
        }
    }
}

impl From<PairSpec> for PairTarget {
    fn from(p: PairSpec) -> Self {
        PairTarget::Pair(p)
    }
}

fn allowed_fd_error(magnitude: f64) -> f64 {
    AD_FD_TOL.max(1e-4 * magnitude)
}

/// Compares AD gradients of every output with central differences of step `h`.
pub fn check_gradient_fd(f: &SmoothMap, p: &[f64], h: f64) -> VerificationReport {
    check_gradient_fd_with(f, p, h, &|x| f.eval_jet2(x))
}

/// Supplies jets at a point; lets tests swap in a faulty differentiator.
pub type JetSource<'a> = &'a dyn Fn(&[f64]) -> Result<Vec<Jet2>, EvalError>;

/// As [`check_gradient_fd`], with the jet source injected.
pub fn check_gradient_fd_with(f: &SmoothMap, p: &[f64], h: f64, jets: JetSource<'_>) -> VerificationReport {
    let mut report = VerificationReport::new("gradient_fd", AD_FD_TOL);
    let ad = match jets(p) {
        Ok(j) => j,
        Err(e) => {
            report.fail(format!("jet evaluation failed: {e}"), Some(p));
            return report.finish();
        }
    };
    let mut worst_raw: f64 = 0.0;
    for i in 0..f.arity_in {
        let mut xp = p.to_vec();
        let mut xm = p.to_vec();
        xp[i] += h;
        xm[i] -= h;
        let (fp, fm) = match (f.eval(&xp), f.eval(&xm)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                report.fail(format!("finite-difference evaluation failed: {e}"), Some(p));
                return report.finish();
            }
        };
        for (k, jet) in ad.iter().enumerate() {
            let fd = (fp[k] - fm[k]) / (2.0 * h);
            let err = (jet.gradient[i] - fd).abs();
            worst_raw = worst_raw.max(err);
            let allowed = allowed_fd_error(norm(&jet.gradient));
            report.observe(err / allowed * AD_FD_TOL, p);
        }
    }
    report.record("max_abs_error", worst_raw);
    report.finish()
}

/// Compares AD Hessians with central differences of AD gradients.
pub fn check_hessian_fd(f: &SmoothMap, p: &[f64], h: f64) -> VerificationReport {
    let mut report = VerificationReport::new("hessian_fd", AD_FD_TOL);
    let n = f.arity_in;
    let at = |x: &[f64]| f.eval_jet2(x);
    let base = match at(p) {
        Ok(j) => j,
        Err(e) => {
            report.fail(format!("jet evaluation failed: {e}"), Some(p));
            return report.finish();
        }
    };
    let mut worst_raw: f64 = 0.0;
    for j in 0..n {
        let mut xp = p.to_vec();
        let mut xm = p.to_vec();
        xp[j] += h;
        xm[j] -= h;
        let (gp, gm) = match (at(&xp), at(&xm)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                report.fail(format!("finite-difference evaluation failed: {e}"), Some(p));
                return report.finish();
            }
        };
        for (k, jet) in base.iter().enumerate() {
            let mag = jet.hessian.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for i in 0..n {
                let fd = (gp[k].gradient[i] - gm[k].gradient[i]) / (2.0 * h);
                let err = (jet.hess(i, j) - fd).abs();
                worst_raw = worst_raw.max(err);
                report.observe(err / allowed_fd_error(mag) * AD_FD_TOL, p);
            }
        }
    }
    report.record("max_abs_error", worst_raw);
    report.finish()
}

fn collect_piecewise(e: &Expr, seen: &mut HashSet<*const Node>, out: &mut Vec<(Expr, Expr, Expr)>) {
    if !seen.insert(e.ptr()) {
        return;
    }
    let children: Vec<&Expr> = match e.node() {
        Node::Const { .. } | Node::Var { .. } => vec![],
        Node::Add { lhs, rhs } | Node::Sub { lhs, rhs } | Node::Mul { lhs, rhs } | Node::Div { lhs, rhs } => {
            vec![lhs, rhs]
        }
        Node::Neg { arg }
        | Node::Exp { arg }
        | Node::Sin { arg }
        | Node::Cos { arg }
        | Node::Sqrt { arg }
        | Node::FlatBump { arg } => {
            vec![arg]
        }
        Node::Piecewise { selector, pos, neg } => {
            out.push((selector.clone(), pos.clone(), neg.clone()));
            vec![selector, pos, neg]
        }
        Node::Gate { gate, body } => vec![gate, body],
    };
    for c in children {
        collect_piecewise(c, seen, out);
    }
}

/// For every piecewise node of `f`, projects seeded points of `[lo, hi]ⁿ` onto the
/// selector's zero set and compares both branches' values and gradients.
pub fn check_piecewise_agreement(f: &SmoothMap, samples: usize, lo: f64, hi: f64, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("piecewise_agreement", EXACT_TOL);
    let mut nodes = Vec::new();
    let mut seen = HashSet::new();
    for e in &f.outputs {
        collect_piecewise(e, &mut seen, &mut nodes);
    }
    let n = f.arity_in;
    let mut rng = substream(seed, "piecewise");
    for (selector, pos, neg) in &nodes {
        let sel = SmoothMap::new(n, vec![selector.clone()]);
        let branches = SmoothMap::new(n, vec![pos.clone(), neg.clone()]);
        for _ in 0..samples {
            let mut x = uniform_box(&mut rng, n, lo, hi);
            let Ok(j) = sel.eval_jet2(&x) else {
                report.fail("selector failed to evaluate", Some(&x));
                continue;
            };
            let g2: f64 = j[0].gradient.iter().map(|g| g * g).sum();
            if g2 == 0.0 {
                continue;
            }
            for (xi, gi) in x.iter_mut().zip(&j[0].gradient) {
                *xi -= j[0].value * gi / g2;
            }
            match branches.eval_jet2(&x) {
                Ok(b) => {
                    let dv = (b[0].value - b[1].value).abs();
                    report.observe(dv.max(max_abs_diff(&b[0].gradient, &b[1].gradient)), &x);
                }
                Err(e) => report.fail(format!("branch failed to evaluate: {e}"), Some(&x)),
            }
        }
    }
    report.record("piecewise_nodes", nodes.len() as f64);
    report.finish()
}

fn check_chart(f: &SmoothMap, src: usize, dst: usize) -> Result<(), PairError> {
    if f.arity_in != src || f.arity_out() != dst {
        return Err(PairError::ChartMismatch { map_in: f.arity_in, map_out: f.arity_out(), src, dst });
    }
    Ok(())
}

/// Samples the subset of `src` and checks that `f` sends it into `dst`.
pub fn verify_map_of_pairs(
    f: &SmoothMap,
    src: &PairSpec,
    dst: &PairTarget,
    budget: usize,
    seed: u64,
) -> Result<VerificationReport, PairError> {
    check_chart(f, src.ambient_dim(), dst.ambient_dim())?;
    let mut rng = substream(seed, "map_of_pairs");
    let points = src.sample_subset(&mut rng, budget);
    let mut report = VerificationReport::new(format!("map_of_pairs {src}"), EXACT_TOL);
    let results: Vec<Result<f64, EvalError>> =
        points.par_iter().map(|x| f.eval(x).map(|y| dst.subset_violation(&y).max(dst.space_violation(&y)))).collect();
    for (x, r) in points.iter().zip(results) {
        match r {
            Ok(v) => report.observe(v, x),
            Err(e) => report.fail(format!("evaluation failed: {e}"), Some(x)),
        }
    }
    Ok(report.finish())
}

/// Endpoint and pair-preservation checks for a homotopy `H` on `A x R`.
///
/// `H(., 0)` must equal `f` and `H(., 1)` must equal `g` on samples of `A`; at each
/// of [`HOMOTOPY_TIME_STEPS`] times, `H(., t)` must send `A` into the target space
/// and `B` into the target subset.
pub fn verify_homotopy(
    h: &SmoothMap,
    f: &SmoothMap,
    g: &SmoothMap,
    src: &PairSpec,
    dst: &PairTarget,
    budget: usize,
    seed: u64,
) -> Result<VerificationReport, PairError> {
    let (n_src, n_dst) = (src.ambient_dim(), dst.ambient_dim());
    check_chart(h, n_src + 1, n_dst)?;
    check_chart(f, n_src, n_dst)?;
    check_chart(g, n_src, n_dst)?;
    let mut rng = substream(seed, "homotopy");
    let mut space_pts = src.sample_space(&mut rng, budget);
    let boundary = src.sample_subset(&mut rng, budget);
    space_pts.extend(boundary.iter().cloned());

    let mut endpoints = VerificationReport::new("endpoints", EXACT_TOL);
    let ends: Vec<Result<f64, EvalError>> = space_pts
        .par_iter()
        .map(|x| -> Result<f64, EvalError> {
            let mut x0 = x.clone();
            x0.push(0.0);
            let mut x1 = x.clone();
            x1.push(1.0);
            let r0 = max_abs_diff(&h.eval(&x0)?, &f.eval(x)?);
            let r1 = max_abs_diff(&h.eval(&x1)?, &g.eval(x)?);
            Ok(r0.max(r1))
        })
        .collect();
    for (x, r) in space_pts.iter().zip(ends) {
        match r {
            Ok(v) => endpoints.observe(v, x),
            Err(e) => endpoints.fail(format!("evaluation failed: {e}"), Some(x)),
        }
    }
    let endpoints = endpoints.finish();

    let mut preserve = VerificationReport::new("pair_preservation", EXACT_TOL);
    let n_space = space_pts.len() - boundary.len();
    let jobs: Vec<(usize, usize)> =
        (0..HOMOTOPY_TIME_STEPS).flat_map(|k| (0..space_pts.len()).map(move |i| (k, i))).collect();
    let res: Vec<(Vec<f64>, Result<f64, EvalError>)> = jobs
        .par_iter()
        .map(|&(k, i)| {
            let t = k as f64 / (HOMOTOPY_TIME_STEPS - 1) as f64;
            let mut xt = space_pts[i].clone();
            xt.push(t);
            let r = h.eval(&xt).map(|y| {
                let v = dst.space_violation(&y);
                if i >= n_space {
                    v.max(dst.subset_violation(&y))
                } else {
                    v
                }
            });
            (xt, r)
        })
        .collect();
    for (xt, r) in res {
        match r {
            Ok(v) => preserve.observe(v, &xt),
            Err(e) => preserve.fail(format!("evaluation failed: {e}"), Some(&xt)),
        }
    }
    let preserve = preserve.finish();

    let mut report = VerificationReport::new(format!("homotopy {src}"), EXACT_TOL);
    report.record("endpoint_residual", endpoints.max_residual);
    report.record("pair_residual", preserve.max_residual);
    report.record("time_steps", HOMOTOPY_TIME_STEPS as f64);
    report.absorb(&endpoints);
    report.absorb(&preserve);
    report.samples_used = space_pts.len();
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{rng, uniform_box};
    use crate::smoothcalc::cutoff::cutoff_expr;
    use crate::smoothcalc::expr::Expr;
    use crate::smoothcalc::pairspec::PairCase;

    fn quartic() -> SmoothMap {
        SmoothMap::from_fn(2, |x| {
            let (a, b) = (x[0].clone(), x[1].clone());
            vec![a.square().square() * 0.5 - a.clone() * b.square() * b.clone() + 3.0 * a.clone() * b + 1.0]
        })
    }

    #[test]
    fn polynomial_gradients_match() {
        let f = quartic();
        let mut r = rng(5);
        for _ in 0..100 {
            let p = uniform_box(&mut r, 2, -2.0, 2.0);
            assert!(check_gradient_fd(&f, &p, 1e-4).pass);
            assert!(check_hessian_fd(&f, &p, 1e-4).pass);
        }
    }

    #[test]
    fn flat_bump_near_zero() {
        let f = SmoothMap::from_fn(1, |x| vec![x[0].flat_bump()]);
        for t in [-0.01, 0.0, 0.01, 0.05, 0.2, 1.0] {
            assert!(check_gradient_fd(&f, &[t], 1e-4).pass, "{t}");
        }
    }

    #[test]
    fn corrupted_jets_fail() {
        let f = quartic();
        let bad = |x: &[f64]| {
            f.eval_jet2(x).map(|mut js| {
                js[0].gradient[1] *= 1.01;
                js
            })
        };
        let rep = check_gradient_fd_with(&f, &[0.7, -0.3], 1e-4, &bad);
        assert!(!rep.pass);
        assert_eq!(rep.witness, Some(vec![0.7, -0.3]));
    }

    #[test]
    fn coordinatewise_cutoff_lands_in_boundary() {
        let eps = 0.2;
        let src = PairSpec::new(PairCase::RealThick, 2, Some(eps)).unwrap();
        let dst = PairSpec::new(PairCase::RealBoundary, 2, None).unwrap();
        let phi = SmoothMap::from_fn(2, |x| x.iter().map(|v| cutoff_expr(eps, v.clone())).collect());
        assert!(verify_map_of_pairs(&phi, &src, &dst.into(), 400, 1).unwrap().pass);
    }

    #[test]
    fn identity_into_basepoint_fails() {
        let src = PairSpec::new(PairCase::RealBoundary, 2, None).unwrap();
        let id = SmoothMap::identity(2);
        assert!(verify_map_of_pairs(&id, &src, &src.clone().into(), 200, 1).unwrap().pass);
        let rep = verify_map_of_pairs(&id, &src, &PairTarget::Basepoint(vec![0.0, 0.0]), 200, 1).unwrap();
        assert!(!rep.pass);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn chart_mismatch_is_error() {
        let src = PairSpec::new(PairCase::RealBoundary, 2, None).unwrap();
        let id = SmoothMap::identity(3);
        assert!(verify_map_of_pairs(&id, &src, &src.clone().into(), 10, 1).is_err());
    }

    #[test]
    fn homotopy_endpoints() {
        let eps = 0.2;
        let pair = PairSpec::new(PairCase::RealThick, 2, Some(eps)).unwrap();
        let phi = SmoothMap::from_fn(2, |x| x.iter().map(|v| cutoff_expr(eps, v.clone())).collect());
        let id = SmoothMap::identity(2);
        let h = phi.affine_homotopy(&id);
        let dst: PairTarget = pair.clone().into();
        assert!(verify_homotopy(&h, &phi, &id, &pair, &dst, 200, 3).unwrap().pass);

        let stuck = phi.with_dummy_time();
        assert!(!verify_homotopy(&stuck, &phi, &id, &pair, &dst, 200, 3).unwrap().pass);

        let trivial = phi.affine_homotopy(&phi);
        assert!(verify_homotopy(&trivial, &phi, &phi, &pair, &dst, 200, 3).unwrap().pass);
    }

    #[test]
    fn identity_is_map_of_pairs_for_all_cases() {
        use PairCase::*;
        for case in [RealBoundary, RealThick, Cube, CubeThick, Affine, AffineThick, Disk, DiskThick, SpherePole] {
            for n in 1..=3 {
                let p = PairSpec::new(case, n, Some(0.2)).unwrap();
                let id = SmoothMap::identity(p.ambient_dim());
                let rep = verify_map_of_pairs(&id, &p, &p.clone().into(), 300, 9).unwrap();
                assert!(rep.pass, "{p}: {rep}");
            }
        }
        let _ = Expr::constant(0.0);
    }
}
