//! The prism `β` and the two-branch composite `h` computing products in the
//! simplicial homotopy group.

use crate::smoothcalc::{verify_map_of_pairs, Expr, PairCase, PairError, PairSpec, PairTarget, SmoothMap};

/// `β(x_0, ..., x_n, t) = (x_0, ..., x_{n-1}, t x_n, (1-t) x_n)`, `𝔸ⁿ x R -> 𝔸ⁿ⁺¹`.
pub fn prism_beta(n: usize) -> SmoothMap {
    SmoothMap::from_fn(n + 2, |x| {
        let t = x[n + 1].clone();
        let mut out = x[..n].to_vec();
        out.push(t.clone() * x[n].clone());
        out.push((1.0 - t) * x[n].clone());
        out
    })
}

/// `h` on `𝔸ⁿ⁺¹`: `f(x_0..x_{n-2}, x_n + 2x_{n-1}, x_{n+1} - x_{n-1})` where
/// `x_{n+1} >= x_{n-1}`, else `g(x_0..x_{n-2}, x_{n-1} - x_{n+1}, x_n + 2x_{n+1})`.
///
/// `f` and `g` must equal `basepoint` on `∂_ε 𝔸ⁿ`; this is checked by sampling.
pub fn pair_product_h(
    f: &SmoothMap,
    g: &SmoothMap,
    n: usize,
    epsilon: f64,
    basepoint: &[f64],
    budget: usize,
    seed: u64,
) -> Result<SmoothMap, PairError> {
    if n == 0 {
        return Err(PairError::BadDimension(0));
    }
    let thick = PairSpec::new(PairCase::AffineThick, n, Some(epsilon))?;
    let target = PairTarget::Basepoint(basepoint.to_vec());
    for (name, m) in [("f", f), ("g", g)] {
        let rep = verify_map_of_pairs(m, &thick, &target, budget, seed)?;
        if !rep.pass {
            return Err(PairError::Construction(format!(
                "{name} is not constant near the boundary (residual {:.3e})",
                rep.max_residual
            )));
        }
    }
    let x: Vec<Expr> = (0..n + 2).map(Expr::var).collect();
    let mut a1 = x[..n - 1].to_vec();
    a1.push(x[n].clone() + 2.0 * x[n - 1].clone());
    a1.push(x[n + 1].clone() - x[n - 1].clone());
    let mut a2 = x[..n - 1].to_vec();
    a2.push(x[n - 1].clone() - x[n + 1].clone());
    a2.push(x[n].clone() + 2.0 * x[n + 1].clone());
    let branch1 = f.compose(&SmoothMap::new(n + 2, a1));
    let branch2 = g.compose(&SmoothMap::new(n + 2, a2));
    let mut normal = vec![0.0; n + 2];
    normal[n + 1] = 1.0;
    normal[n - 1] = -1.0;
    let outputs = branch1
        .outputs
        .iter()
        .zip(&branch2.outputs)
        .map(|(p, q)| Expr::piecewise(&normal, 0.0, p.clone(), q.clone()))
        .collect();
    Ok(SmoothMap::new(n + 2, outputs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{max_abs_diff, rng, uniform};
    use crate::smoothcalc::cutoff_expr;

    const EPS: f64 = 0.2;

    /// `b + v Π φ(x_i)`: equal to `b` wherever some `x_i <= ε`.
    fn bump(n: usize, b: &[f64], v: &[f64]) -> SmoothMap {
        SmoothMap::from_fn(n + 1, |x| {
            let p = Expr::product(x.iter().map(|xi| cutoff_expr(EPS, xi.clone())));
            b.iter().zip(v).map(|(bi, vi)| *bi + *vi * p.clone()).collect()
        })
    }

    /// Random point of the compact simplex of dimension `n`.
    fn simplex_point(r: &mut crate::sampling::SampleRng, n: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..=n).map(|_| -uniform(r, 1e-12, 1.0).ln()).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|v| v / s).collect()
    }

    #[test]
    fn beta_ends_and_sum() {
        let b = prism_beta(2);
        assert_eq!(b.eval(&[0.2, 0.3, 0.5, 0.0]).unwrap(), vec![0.2, 0.3, 0.0, 0.5]);
        assert_eq!(b.eval(&[0.2, 0.3, 0.5, 1.0]).unwrap(), vec![0.2, 0.3, 0.5, 0.0]);
        let mut r = rng(3);
        for _ in 0..100 {
            let x0 = uniform(&mut r, -2.0, 2.0);
            let t = uniform(&mut r, -1.0, 2.0);
            let y = prism_beta(1).eval(&[x0, 1.0 - x0, t]).unwrap();
            assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn faces_and_seam() {
        let bp = [0.0, 1.0];
        for n in 1..=3 {
            let f = bump(n, &bp, &[1.0, -2.0]);
            let g = bump(n, &bp, &[0.5, 3.0]);
            let h = pair_product_h(&f, &g, n, EPS, &bp, 300, 1).unwrap();
            let mut r = rng(n as u64);
            for _ in 0..1000 {
                let y = simplex_point(&mut r, n);
                // d_{n-1} h = f and d_{n+1} h = g
                let mut x = y.clone();
                x.insert(n - 1, 0.0);
                assert!(max_abs_diff(&h.eval(&x).unwrap(), &f.eval(&y).unwrap()) < 1e-12);
                let mut x = y.clone();
                x.push(0.0);
                assert!(max_abs_diff(&h.eval(&x).unwrap(), &g.eval(&y).unwrap()) < 1e-12);
                // d_i h = basepoint for i < n - 1
                for i in 0..n.saturating_sub(1) {
                    let mut x = y.clone();
                    x.insert(i, 0.0);
                    assert!(max_abs_diff(&h.eval(&x).unwrap(), &bp) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn branches_agree_on_seam_with_jets() {
        let bp = [0.0];
        let n = 2;
        let f = bump(n, &bp, &[1.0]);
        let g = bump(n, &bp, &[-1.0]);
        let h = pair_product_h(&f, &g, n, EPS, &bp, 300, 1).unwrap();
        let mut r = rng(8);
        for _ in 0..1000 {
            // x_{n+1} = x_{n-1}
            let s = uniform(&mut r, -1.0, 1.0);
            let x0 = uniform(&mut r, -1.0, 2.0);
            let x = [x0, s, 1.0 - x0 - 2.0 * s, s];
            let j = &h.eval_jet2(&x).unwrap()[0];
            assert!(j.is_flat_zero(), "{x:?}");
        }
    }

    #[test]
    fn middle_face_with_trivial_g() {
        let bp = [2.0];
        let n = 1;
        let f = bump(n, &bp, &[1.0]);
        let g = SmoothMap::constant(n + 1, &bp);
        let h = pair_product_h(&f, &g, n, EPS, &bp, 300, 1).unwrap();
        let mut r = rng(4);
        for _ in 0..500 {
            let y = simplex_point(&mut r, n);
            let x = [y[0], 0.0, y[1]];
            let expect = if y[1] >= y[0] { f.eval(&[2.0 * y[0], y[1] - y[0]]).unwrap() } else { bp.to_vec() };
            assert!(max_abs_diff(&h.eval(&x).unwrap(), &expect) < 1e-12);
        }
    }

    #[test]
    fn shift_equivariance() {
        let n = 1;
        let bp = [0.0];
        let v = [5.0];
        let (f, g) = (bump(n, &bp, &[1.0]), bump(n, &bp, &[-2.0]));
        let (fs, gs) = (bump(n, &v, &[1.0]), bump(n, &v, &[-2.0]));
        let h = pair_product_h(&f, &g, n, EPS, &bp, 200, 1).unwrap();
        let hs = pair_product_h(&fs, &gs, n, EPS, &v, 200, 1).unwrap();
        let mut r = rng(6);
        for _ in 0..300 {
            let y = simplex_point(&mut r, n + 1);
            assert!((hs.eval(&y).unwrap()[0] - h.eval(&y).unwrap()[0] - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn non_stationary_input_rejected() {
        let f = SmoothMap::identity(2);
        let g = SmoothMap::identity(2);
        assert!(pair_product_h(&f, &g, 1, EPS, &[0.0, 0.0], 100, 1).is_err());
    }
}
