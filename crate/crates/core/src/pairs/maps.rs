//! Building blocks shared by the equivalences between domain pairs.

use crate::smoothcalc::{cutoff_expr, smooth_step, Expr, SmoothMap};

pub(crate) fn half_point(n: usize) -> Vec<f64> {
    vec![0.5; n]
}

pub(crate) fn barycenter(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64 + 1.0); n + 1]
}

/// `c + s (x - c)` coordinatewise.
pub(crate) fn dilate(x: &[Expr], center: &[f64], s: &Expr) -> Vec<Expr> {
    x.iter().zip(center).map(|(xi, &ci)| ci + s.clone() * (xi.clone() - ci)).collect()
}

/// `φⁿ`, the ε-cut-off applied to every coordinate.
pub fn phi_n(n: usize, epsilon: f64) -> SmoothMap {
    SmoothMap::from_fn(n, |x| x.iter().map(|v| cutoff_expr(epsilon, v.clone())).collect())
}

/// `ψ(x_0, ..., x_n) = (x_1, ..., x_n)`.
pub fn psi(n: usize) -> SmoothMap {
    SmoothMap::from_fn(n + 1, |x| x[1..].to_vec())
}

/// `ψ⁻¹(y) = (1 - Σ y_i, y_1, ..., y_n)`.
pub fn psi_inverse(n: usize) -> SmoothMap {
    SmoothMap::from_fn(n, |y| {
        let mut out = vec![1.0 - Expr::sum(y.iter().cloned())];
        out.extend(y.iter().cloned());
        out
    })
}

/// `u(x) = x / Σ x_i`.
pub fn normalize_u(n: usize) -> SmoothMap {
    SmoothMap::from_fn(n + 1, |x| {
        let s = Expr::sum(x.iter().cloned());
        x.iter().map(|v| v.clone() / s.clone()).collect()
    })
}

/// Dilation of `𝔸ⁿ` about its barycenter by a constant factor.
pub fn dilate_affine(n: usize, lambda: f64) -> SmoothMap {
    let c = barycenter(n);
    SmoothMap::from_fn(n + 1, |x| dilate(x, &c, &Expr::constant(lambda)))
}

/// Dilation homotopy `c + ((1-t) λ + t)(x - c)` on `R^d x R`.
pub(crate) fn dilation_homotopy(center: &[f64], lambda: f64) -> SmoothMap {
    let d = center.len();
    SmoothMap::from_fn(d + 1, |x| {
        let t = x[d].clone();
        let s = (1.0 - t.clone()) * lambda + t;
        dilate(&x[..d], center, &s)
    })
}

/// `u(α_t(x))` with `α_t(y) = t y + (1 - t) ρ(y)` on `𝔸ⁿ x R`.
pub fn alpha_homotopy(n: usize, epsilon: f64) -> SmoothMap {
    SmoothMap::from_fn(n + 2, |x| {
        let t = x[n + 1].clone();
        let alphas: Vec<Expr> = x[..=n]
            .iter()
            .map(|v| t.clone() * v.clone() + (1.0 - t.clone()) * cutoff_expr(epsilon, v.clone()))
            .collect();
        let s = Expr::sum(alphas.iter().cloned());
        alphas.iter().map(|a| a.clone() / s.clone()).collect()
    })
}

/// `Σ α_t(x_i)` as a map on `𝔸ⁿ x R`, the denominator of [`alpha_homotopy`].
pub fn alpha_sum(n: usize, epsilon: f64) -> SmoothMap {
    SmoothMap::from_fn(n + 2, |x| {
        let t = x[n + 1].clone();
        vec![Expr::sum(
            x[..=n].iter().map(|v| t.clone() * v.clone() + (1.0 - t.clone()) * cutoff_expr(epsilon, v.clone())),
        )]
    })
}

/// Radial cut-off `r(x) = x [(1 - χ) + χ / |x|]`, with `χ` rising from 0 at
/// `|x| = (1-ε)/2` to 1 at `|x| = 1-ε`.
pub fn radial_retraction(n: usize, epsilon: f64) -> SmoothMap {
    let q1 = (1.0 - epsilon) * (1.0 - epsilon);
    let q0 = q1 / 4.0;
    SmoothMap::from_fn(n, |x| {
        let q = Expr::sum(x.iter().map(Expr::square));
        let chi = smooth_step((q.clone() - q0) / (q1 - q0));
        let scale = (1.0 - chi.clone()) + Expr::gate(chi, 1.0 / q.sqrt());
        x.iter().map(|v| v.clone() * scale.clone()).collect()
    })
}

/// Conformal dilation of `Sⁿ` fixing `N` and the south pole: in stereographic
/// coordinates from the south pole, multiplies by `s`.
pub(crate) fn sphere_dilation(x: &[Expr], s: &Expr) -> Vec<Expr> {
    let n = x.len() - 1;
    let z = x[n].clone();
    let s2 = s.square();
    let den = (1.0 + z.clone()) + s2.clone() * (1.0 - z.clone());
    let mut out: Vec<Expr> = x[..n].iter().map(|v| 2.0 * s.clone() * v.clone() / den.clone()).collect();
    out.push(((1.0 + z.clone()) - s2 * (1.0 - z)) / den);
    out
}

/// Shrink factor of the collapse: 0 on the northern hemisphere, 1 below `z = -1/2`.
pub(crate) fn collapse_factor(z: &Expr) -> Expr {
    smooth_step(-2.0 * z.clone())
}

/// `(Sⁿ, H) -> (Sⁿ, N)`: contracts the northern hemisphere to the pole.
pub fn sphere_collapse(n: usize) -> SmoothMap {
    SmoothMap::from_fn(n + 1, |x| sphere_dilation(x, &collapse_factor(&x[n])))
}

/// Homotopy from [`sphere_collapse`] (t = 0) to the identity (t = 1).
pub fn sphere_collapse_homotopy(n: usize) -> SmoothMap {
    SmoothMap::from_fn(n + 2, |x| {
        let t = x[n + 1].clone();
        let s = (1.0 - t.clone()) * collapse_factor(&x[n]) + t;
        sphere_dilation(&x[..=n], &s)
    })
}

/// Stereographic projection from `N`: `x' / (1 - z)`.
pub fn stereographic(n: usize) -> SmoothMap {
    SmoothMap::from_fn(n + 1, |x| {
        let den = 1.0 - x[n].clone();
        x[..n].iter().map(|v| v.clone() / den.clone()).collect()
    })
}

/// Inverse stereographic projection onto `Sⁿ \ N`.
pub fn stereographic_inverse(n: usize) -> SmoothMap {
    SmoothMap::from_fn(n, |y| {
        let r2 = Expr::sum(y.iter().map(Expr::square));
        let den = r2.clone() + 1.0;
        let mut out: Vec<Expr> = y.iter().map(|v| 2.0 * v.clone() / den.clone()).collect();
        out.push((r2 - 1.0) / den);
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_and_u_examples() {
        assert_eq!(psi(2).eval(&[1.0, 0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(normalize_u(2).eval(&[2.0, 1.0, 1.0]).unwrap(), vec![0.5, 0.25, 0.25]);
        assert_eq!(psi_inverse(2).eval(&[0.25, 0.5]).unwrap(), vec![0.25, 0.25, 0.5]);
    }

    #[test]
    fn stereographic_round_trip() {
        let n = 2;
        let (s, si) = (stereographic(n), stereographic_inverse(n));
        for y in [[0.3, -1.2], [0.0, 0.0], [5.0, 2.0]] {
            let back = s.eval(&si.eval(&y).unwrap()).unwrap();
            assert!((back[0] - y[0]).abs() < 1e-12 && (back[1] - y[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn collapse_sends_hemisphere_to_pole() {
        let c = sphere_collapse(1);
        assert_eq!(c.eval(&[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
        let south = c.eval(&[0.0, -1.0]).unwrap();
        assert!((south[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn radial_retraction_on_shell() {
        let r = radial_retraction(2, 0.2);
        let y = r.eval(&[0.85, 0.0]).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-15);
        assert_eq!(r.eval(&[0.1, 0.1]).unwrap(), vec![0.1, 0.1]);
        assert_eq!(r.eval(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert!(r.eval_jet2(&[0.0, 0.0]).is_ok());
    }
}
