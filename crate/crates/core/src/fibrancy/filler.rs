//! Inclusion–exclusion extension of a horn into a vector space.

use thiserror::Error;

use super::horn::{drop_coord, insert_zero, HornData, HornError, COMPAT_TOL};
use crate::report::{VerificationReport, EXACT_TOL};
use crate::sampling::{max_abs_diff, substream, uniform_box};
use crate::simplicial::set::subsets;
use crate::smoothcalc::{Expr, SmoothMap};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FillError {
    #[error("incompatible horn data: {0}")]
    Horn(#[from] HornError),
    #[error("horns need n >= 1")]
    Degenerate,
}

/// Coefficient of the terms with `k` kept coordinates.
pub fn filler_sign(n: usize, k: usize) -> f64 {
    if (n - k) & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// `F̃ = Σ_{k<n} Σ_{|I|=k} (−1)^{n−k+1} F∘P_I`, where `P_I` zeroes the coordinates outside `I`.
pub fn abelian_horn_filler(f: &HornData) -> Result<SmoothMap, FillError> {
    abelian_horn_filler_with(f, filler_sign)
}

/// As [`abelian_horn_filler`] with the sign rule supplied by the caller.
pub fn abelian_horn_filler_with(f: &HornData, sign: impl Fn(usize, usize) -> f64) -> Result<SmoothMap, FillError> {
    let n = f.n;
    if n == 0 {
        return Err(FillError::Degenerate);
    }
    f.check_compatible(COMPAT_TOL, 0)?;
    let m = f.arity_out();
    let mut terms: Vec<Vec<Expr>> = vec![Vec::new(); m];
    // Largest strata first, so that n = 2 evaluates as F(x,0) + F(0,y) − F(0,0).
    for k in (0..n).rev() {
        for kept in subsets(n, k) {
            // P_I x lies on x_j = 0 for the first j outside I.
            let j = (0..n).find(|i| !kept.contains(i)).expect("k < n");
            let proj = SmoothMap::from_fn(n, |x| {
                (0..n)
                    .filter(|&i| i != j)
                    .map(|i| if kept.contains(&i) { x[i].clone() } else { Expr::constant(0.0) })
                    .collect()
            });
            let composed = f.pieces[j].compose(&proj);
            let s = sign(n, k);
            for (out, e) in terms.iter_mut().zip(composed.outputs) {
                out.push(Expr::constant(s) * e);
            }
        }
    }
    Ok(SmoothMap::new(n, terms.into_iter().map(Expr::sum).collect()))
}

/// Checks `F̃|_{x_i=0} = F_i` on every hyperplane, sampling each stratum where
/// further coordinates vanish.
pub fn verify_filler(f: &HornData, filler: &SmoothMap, budget: usize, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("fibrancy.abelian_filler.n{}", f.n), EXACT_TOL);
    let n = f.n;
    let mut rng = substream(seed, "filler_restriction");
    let strata: Vec<Vec<usize>> = (0..n).flat_map(|k| subsets(n - 1, k)).collect();
    let per = budget.div_ceil(n * strata.len()).max(1);
    for i in 0..n {
        for zeros in &strata {
            for _ in 0..per {
                let mut y = uniform_box(&mut rng, n - 1, -2.0, 2.0);
                for &z in zeros {
                    y[z] = 0.0;
                }
                let x = insert_zero(&y, i);
                match (filler.eval(&x), f.pieces[i].eval(&drop_coord(&x, i))) {
                    (Ok(a), Ok(b)) => rep.observe(max_abs_diff(&a, &b), &x),
                    _ => rep.fail("evaluation failed", Some(&x)),
                }
            }
        }
    }
    rep.record("strata", strata.len() as f64);
    rep.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibrancy::horn::random_polynomial;
    use crate::sampling::rng;

    #[test]
    fn n1_is_constant() {
        let f = HornData::new(1, vec![SmoothMap::constant(0, &[3.5])]).unwrap();
        let ft = abelian_horn_filler(&f).unwrap();
        assert_eq!(ft.eval(&[7.0]).unwrap(), vec![3.5]);
    }

    #[test]
    fn n2_closed_form() {
        let g =
            SmoothMap::from_fn(2, |x| vec![(x[0].clone() + 2.0).exp() * x[1].clone().sin() + x[0].clone().square()]);
        let f = HornData::restrict_from(&g, 2);
        let ft = abelian_horn_filler(&f).unwrap();
        let mut r = rng(1);
        for _ in 0..100 {
            let p = uniform_box(&mut r, 2, -2.0, 2.0);
            let closed =
                g.eval(&[p[0], 0.0]).unwrap()[0] + g.eval(&[0.0, p[1]]).unwrap()[0] - g.eval(&[0.0, 0.0]).unwrap()[0];
            assert_eq!(ft.eval(&p).unwrap()[0], closed);
        }
    }

    #[test]
    fn extends_random_polynomials() {
        let mut r = rng(7);
        for n in 1..=4 {
            let g = random_polynomial(n, 2, 3, &mut r);
            let f = HornData::restrict_from(&g, n);
            let ft = abelian_horn_filler(&f).unwrap();
            let rep = verify_filler(&f, &ft, 1000, 3);
            assert!(rep.pass && rep.samples_used >= 1000, "{rep}");
        }
    }

    #[test]
    fn recovers_multilinear_without_top_monomial() {
        let g = SmoothMap::from_fn(3, |x| {
            vec![1.0 + 2.0 * x[0].clone() - x[1].clone() * x[2].clone() + 0.5 * x[0].clone() * x[1].clone()]
        });
        let ft = abelian_horn_filler(&HornData::restrict_from(&g, 3)).unwrap();
        let mut r = rng(2);
        for _ in 0..100 {
            let p = uniform_box(&mut r, 3, -2.0, 2.0);
            assert!((ft.eval(&p).unwrap()[0] - g.eval(&p).unwrap()[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn wrong_signs_fail() {
        let g = SmoothMap::from_fn(3, |x| vec![x[0].clone() + x[1].clone() * x[2].clone() + 1.0]);
        let f = HornData::restrict_from(&g, 3);
        let bad = abelian_horn_filler_with(&f, |n, k| -filler_sign(n, k)).unwrap();
        assert!(!verify_filler(&f, &bad, 200, 0).pass);
    }

    #[test]
    fn incompatible_rejected() {
        let a = SmoothMap::from_fn(1, |y| vec![y[0].clone()]);
        let b = SmoothMap::constant(1, &[1.0]);
        let f = HornData::new(2, vec![a, b]).unwrap();
        assert!(matches!(abelian_horn_filler(&f), Err(FillError::Horn(_))));
    }
}
