//! Named smooth maps used to audit automatic differentiation against finite differences.

use rayon::prelude::*;
use serde::Serialize;

use crate::fibrancy::random_polynomial;
use crate::fibrancy::{c_map, candidate_extension, circle_model, dopen_retraction, loop_psi, r_map, SectionVariant};
use crate::pairs::maps::{
    alpha_homotopy, radial_retraction, sphere_collapse, sphere_collapse_homotopy, stereographic, stereographic_inverse,
};
use crate::pairs::{normalize_u, pair_product_h, phi_n, prism_beta, psi, psi_inverse};
use crate::report::{VerificationReport, AD_FD_TOL};
use crate::sampling::{rng, substream, uniform_box};
use crate::smoothcalc::{
    check_gradient_fd, check_hessian_fd, check_piecewise_agreement, cutoff_expr, smooth_step, Expr, SmoothMap,
};

/// Central-difference step for gradients (differences of values). Steep
/// cut-off compositions have third derivatives near 1e4, so 1e-4 is too coarse.
pub const FD_STEP: f64 = 1e-5;
/// Step for Hessians (differences of AD gradients).
pub const HESSIAN_FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(skip)]
    pub map: SmoothMap,
    /// Sample box `[lo, hi]` in every coordinate.
    pub lo: f64,
    pub hi: f64,
}

fn entry(name: &str, map: SmoothMap, lo: f64, hi: f64) -> CorpusEntry {
    CorpusEntry { name: name.to_string(), map, lo, hi }
}

/// `b + v Πφ(x_i)` on `𝔸ⁿ`: constant near the thickened boundary.
fn stationary_bump(n: usize, eps: f64, b: &[f64], v: &[f64]) -> SmoothMap {
    SmoothMap::from_fn(n + 1, |x| {
        let p = Expr::product(x.iter().map(|xi| cutoff_expr(eps, xi.clone())));
        b.iter().zip(v).map(|(bi, vi)| *bi + *vi * p.clone()).collect()
    })
}

pub fn expression_corpus() -> Vec<CorpusEntry> {
    let mut r = rng(2024);
    let eps = 0.2;
    let mut out = vec![
        entry("polynomial_deg4", random_polynomial(3, 2, 4, &mut r), -1.5, 1.5),
        entry("squared_difference", SmoothMap::from_fn(2, |x| vec![(x[0].clone() - x[1].clone()).square()]), -2.0, 2.0),
        entry("flat_bump", SmoothMap::from_fn(1, |x| vec![x[0].flat_bump()]), -0.5, 2.0),
        entry(
            "flat_bump_product",
            SmoothMap::from_fn(2, |x| vec![(1.0 - x[0].square()).flat_bump() * (x[1].clone() + 0.5).flat_bump()]),
            -1.2,
            1.2,
        ),
        entry("flat_bump_of_exp", SmoothMap::from_fn(1, |x| vec![(x[0].exp() - 1.0).flat_bump()]), -1.0, 1.5),
        entry("cutoff", SmoothMap::from_fn(1, |x| vec![cutoff_expr(eps, x[0].clone())]), -0.5, 1.5),
        entry(
            "cutoff_affine",
            SmoothMap::from_fn(2, |x| vec![cutoff_expr(eps, 2.0 * x[0].clone() - 0.3 * x[1].clone())]),
            -1.0,
            1.0,
        ),
        entry("smooth_step", SmoothMap::from_fn(1, |x| vec![smooth_step(x[0].clone())]), -0.5, 1.5),
        entry("trig_exp", SmoothMap::from_fn(2, |x| vec![x[0].sin() * x[1].exp() + x[1].cos()]), -2.0, 2.0),
        entry("sqrt_shifted", SmoothMap::from_fn(2, |x| vec![(x[0].square() + x[1].square() + 0.5).sqrt()]), -2.0, 2.0),
        entry("phi_n", phi_n(3, eps), -0.5, 1.5),
        entry("psi", psi(3), -1.0, 2.0),
        entry("psi_inverse", psi_inverse(3), -1.0, 2.0),
        entry("normalize_u", normalize_u(2), 0.2, 2.0),
        // t in [0, 1] keeps the denominator away from zero
        entry("alpha_homotopy", alpha_homotopy(2, eps), 0.3, 1.0),
        entry("radial_retraction", radial_retraction(2, eps), -2.0, 2.0),
        entry("sphere_collapse", sphere_collapse(2), -0.9, 0.9),
        entry("sphere_collapse_homotopy", sphere_collapse_homotopy(2), -0.9, 0.9),
        entry("stereographic", stereographic(2), -0.9, 0.9),
        entry("stereographic_inverse", stereographic_inverse(2), -3.0, 3.0),
        entry("prism_beta", prism_beta(2), -1.0, 2.0),
        entry("r_theta", r_map(eps, SectionVariant::Blended), -0.5, 0.5),
        entry("section_c", c_map(eps, SectionVariant::Blended), -0.5, 0.5),
        entry("loop_psi", loop_psi(0.25), -0.5, 1.5),
        entry("halfline_candidate", candidate_extension(), -2.0, 2.0),
        entry("circle_sigma_a", circle_model().sigma_a, -1.0, 2.0),
        entry(
            "flat_seam_piecewise",
            SmoothMap::from_fn(2, |x| {
                let pos = x[0].square() + (x[0].clone() - x[1].clone()).flat_bump();
                vec![Expr::piecewise(&[1.0, -1.0], 0.0, pos, x[0].square())]
            }),
            -1.0,
            1.0,
        ),
    ];
    if let Ok(d) = dopen_retraction(2, 0.5, eps) {
        out.push(entry("dopen_retraction", d.map, -1.5, 1.5));
    }
    let f = stationary_bump(2, eps, &[0.0, 0.0], &[1.0, -0.5]);
    let g = stationary_bump(2, eps, &[0.0, 0.0], &[0.25, 2.0]);
    if let Ok(h) = pair_product_h(&f, &g, 2, eps, &[0.0, 0.0], 200, 0) {
        out.push(entry("pair_product_h", h, -0.5, 1.5));
    }
    out
}

/// Gradient and Hessian FD audits at `points` seeded points per entry, plus
/// branch agreement on every piecewise seam.
pub fn verify_ad_corpus(points: usize, seed: u64) -> VerificationReport {
    let corpus = expression_corpus();
    let parts: Vec<(String, VerificationReport)> = corpus
        .par_iter()
        .map(|e| {
            let mut rep = VerificationReport::new(e.name.clone(), AD_FD_TOL);
            let mut r = substream(seed, &e.name);
            for _ in 0..points {
                let p = uniform_box(&mut r, e.map.arity_in, e.lo, e.hi);
                rep.absorb(&check_gradient_fd(&e.map, &p, FD_STEP));
                rep.absorb(&check_hessian_fd(&e.map, &p, HESSIAN_FD_STEP));
            }
            rep.absorb(&check_piecewise_agreement(&e.map, points, e.lo, e.hi, seed));
            (e.name.clone(), rep.finish())
        })
        .collect();
    let mut rep = VerificationReport::new("smoothcalc.ad_corpus", AD_FD_TOL);
    for (name, part) in &parts {
        rep.absorb(part);
        rep.record(name.clone(), part.max_residual);
        if !part.pass {
            rep.note(format!("{name} failed"));
        }
    }
    rep.record("entries", parts.len() as f64);
    rep.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_passes() {
        let rep = verify_ad_corpus(40, 0);
        assert!(rep.pass, "{rep}");
        assert!(rep.recorded["entries"] >= 28.0);
    }
}
