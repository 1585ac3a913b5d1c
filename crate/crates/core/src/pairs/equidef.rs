//! Explicit homotopy equivalences between the domain pairs of smooth homotopy groups.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::maps::*;
use crate::report::{VerificationReport, EXACT_TOL};
use crate::sampling::{max_abs_diff, substream};
use crate::smoothcalc::{
    verify_homotopy, verify_map_of_pairs, Expr, PairCase, PairError, PairSpec, PairTarget, SmoothMap,
    HOMOTOPY_TIME_STEPS,
};

/// Case pairs with a direct equivalence; `(9, 2)` goes through the sphere chain.
pub const SUPPORTED_PAIRS: [(u8, u8); 8] = [(1, 2), (3, 2), (4, 2), (6, 2), (5, 6), (8, 2), (7, 8), (9, 2)];

/// Safety margin applied on top of the analytic scaling bounds.
const SCALE_MARGIN: f64 = 1.25;
/// Largest dilation factor tried for `(6) <=> (2)`.
const MAX_DILATION: f64 = 1048576.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// First case to second case.
    Forward,
    /// Second case to first case.
    Backward,
    /// On the first pair, from `backward ∘ forward` (t = 0) to the identity (t = 1).
    HomotopyFirst,
    /// On the second pair, from `forward ∘ backward` to the identity.
    HomotopySecond,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquidefMapSpec {
    pub case_pair: (u8, u8),
    pub direction: Direction,
    pub n: usize,
    pub epsilon: Option<f64>,
    pub source: PairSpec,
    pub target: PairSpec,
    pub map: SmoothMap,
    /// Construction constants (dilation factors and the like).
    pub params: BTreeMap<String, f64>,
}

/// All four maps of one equivalence.
#[derive(Debug, Clone)]
pub struct Equidef {
    pub case_pair: (u8, u8),
    pub n: usize,
    pub epsilon: Option<f64>,
    pub first: PairSpec,
    pub second: PairSpec,
    pub forward: SmoothMap,
    pub backward: SmoothMap,
    pub homotopy_first: SmoothMap,
    pub homotopy_second: SmoothMap,
    pub params: BTreeMap<String, f64>,
}

/// Sampling used when a construction constant is found by search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub budget: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { budget: 2000, seed: 0 }
    }
}

fn spec(k: u8, n: usize, eps: Option<f64>) -> Result<PairSpec, PairError> {
    let case = PairCase::from_number(k).ok_or(PairError::UnsupportedPair(k, 0))?;
    PairSpec::new(case, n, eps)
}

/// Lower bound on the dilation making `ψ ∘ D_λ` a map of pairs.
pub fn affine_dilation_bound(n: usize, epsilon: f64) -> f64 {
    let c = 1.0 / (n as f64 + 1.0);
    ((1.0 - epsilon - c) / ((1.0 - epsilon) / n as f64 - c)).max(1.0)
}

pub fn build_equidef(case_pair: (u8, u8), n: usize, epsilon: f64, opts: SearchOptions) -> Result<Equidef, PairError> {
    let (a, b) = case_pair;
    if !SUPPORTED_PAIRS.contains(&case_pair) || case_pair == (9, 2) {
        return Err(PairError::UnsupportedPair(a, b));
    }
    let eps = Some(epsilon);
    let first = spec(a, n, eps)?;
    let second = spec(b, n, eps)?;
    let mut params = BTreeMap::new();
    let (forward, backward, homotopy_first, homotopy_second) = match case_pair {
        (1, 2) | (3, 2) | (4, 2) => {
            let phi = phi_n(n, epsilon);
            let id = SmoothMap::identity(n);
            (id.clone(), phi.clone(), phi.affine_homotopy(&id), phi.affine_homotopy(&id))
        }
        (6, 2) => {
            let bound = affine_dilation_bound(n, epsilon);
            params.insert("dilation_bound".to_string(), bound);
            let target = PairTarget::Pair(second.clone());
            let mut lambda = 2.0;
            loop {
                let f = psi(n).compose(&dilate_affine(n, lambda));
                if verify_map_of_pairs(&f, &first, &target, opts.budget, opts.seed)?.pass {
                    break;
                }
                lambda *= 2.0;
                if lambda > MAX_DILATION {
                    return Err(PairError::Construction("no dilation factor up to 2^20 works".into()));
                }
            }
            params.insert("dilation".to_string(), lambda);
            let forward = psi(n).compose(&dilate_affine(n, lambda));
            let h_first = dilation_homotopy(&barycenter(n), lambda);
            let h_second = dilation_homotopy(&barycenter(n)[1..], lambda);
            (forward, psi_inverse(n), h_first, h_second)
        }
        (5, 6) => {
            let rho_u = normalize_u(n).compose(&phi_n(n + 1, epsilon));
            let h = alpha_homotopy(n, epsilon);
            (SmoothMap::identity(n + 1), rho_u, h.clone(), h)
        }
        (8, 2) => {
            let half = 0.5 - epsilon;
            let k2 = half * half * (1.0 / ((1.0 - epsilon) * (1.0 - epsilon)) - 1.0) / 2.0;
            let lambda = SCALE_MARGIN
                * [
                    (k2 + n as f64 * half * half).sqrt(),
                    half * (n as f64).sqrt() / (1.0 - epsilon),
                    (k2 / (2.0 * epsilon - epsilon * epsilon)).sqrt(),
                ]
                .into_iter()
                .fold(0.0, f64::max);
            params.insert("scale".to_string(), lambda);
            params.insert("k_squared".to_string(), k2);
            let c = half_point(n);
            let f = SmoothMap::from_fn(n, |x| x.iter().zip(&c).map(|(v, ci)| *ci + lambda * v.clone()).collect());
            let g = SmoothMap::from_fn(n, |y| {
                let d: Vec<Expr> = y.iter().zip(&c).map(|(v, ci)| v.clone() - *ci).collect();
                let den = (k2 + Expr::sum(d.iter().map(Expr::square))).sqrt();
                d.into_iter().map(|v| v / den.clone()).collect()
            });
            let id = SmoothMap::identity(n);
            let h1 = g.compose(&f).affine_homotopy(&id);
            let h2 = f.compose(&g).affine_homotopy(&id);
            (f, g, h1, h2)
        }
        (7, 8) => {
            let r = radial_retraction(n, epsilon);
            let id = SmoothMap::identity(n);
            (id.clone(), r.clone(), r.affine_homotopy(&id), r.affine_homotopy(&id))
        }
        _ => unreachable!(),
    };
    Ok(Equidef {
        case_pair,
        n,
        epsilon: eps,
        first,
        second,
        forward,
        backward,
        homotopy_first,
        homotopy_second,
        params,
    })
}

/// One map of an equivalence, as used in the proof of the bijection.
pub fn build_equidef_map(
    case_pair: (u8, u8),
    direction: Direction,
    n: usize,
    epsilon: f64,
) -> Result<EquidefMapSpec, PairError> {
    let e = build_equidef(case_pair, n, epsilon, SearchOptions::default())?;
    let (source, target, map) = match direction {
        Direction::Forward => (e.first.clone(), e.second.clone(), e.forward),
        Direction::Backward => (e.second.clone(), e.first.clone(), e.backward),
        Direction::HomotopyFirst => (e.first.clone(), e.first.clone(), e.homotopy_first),
        Direction::HomotopySecond => (e.second.clone(), e.second.clone(), e.homotopy_second),
    };
    Ok(EquidefMapSpec { case_pair, direction, n, epsilon: Some(epsilon), source, target, map, params: e.params })
}

/// Minimum of `Σ α_t(x_i)` over samples of `𝔸ⁿ` and its thick boundary at every grid time.
pub fn positivity_guard(n: usize, epsilon: f64, budget: usize, seed: u64) -> Result<VerificationReport, PairError> {
    let pair = PairSpec::new(PairCase::AffineThick, n, Some(epsilon))?;
    let mut rng = substream(seed, "positivity");
    let mut pts = pair.sample_space(&mut rng, budget);
    pts.extend(pair.sample_subset(&mut rng, budget));
    let sum = alpha_sum(n, epsilon);
    let mut report = VerificationReport::new("positivity_guard", 0.0);
    let vals: Vec<(Vec<f64>, f64)> = pts
        .par_iter()
        .flat_map_iter(|x| {
            let sum = &sum;
            (0..HOMOTOPY_TIME_STEPS).map(move |k| {
                let mut xt = x.clone();
                xt.push(k as f64 / (HOMOTOPY_TIME_STEPS - 1) as f64);
                let v = sum.eval(&xt).map(|s| s[0]).unwrap_or(f64::NAN);
                (xt, v)
            })
        })
        .collect();
    let mut delta = f64::INFINITY;
    for (xt, v) in &vals {
        delta = delta.min(*v);
        // residual is positive exactly when the sum fails to be positive
        report.observe(if *v > 0.0 { 0.0 } else { 1.0 - v.min(0.0) }, xt);
    }
    report.record("delta", delta);
    report.samples_used = pts.len();
    Ok(report.finish())
}

fn labelled(mut r: VerificationReport, name: &str) -> VerificationReport {
    r.check = name.to_string();
    r
}

/// Both composites homotopic to the identity through maps of pairs, at `budget` samples.
pub fn verify_pair_equivalence(
    case_pair: (u8, u8),
    n: usize,
    epsilon: f64,
    budget: usize,
    seed: u64,
) -> Result<VerificationReport, PairError> {
    if case_pair == (9, 2) {
        return verify_sphere_chain(n, epsilon, budget, seed);
    }
    let e = build_equidef(case_pair, n, epsilon, SearchOptions { budget, seed })?;
    let first: PairTarget = e.first.clone().into();
    let second: PairTarget = e.second.clone().into();
    let mut report =
        VerificationReport::new(format!("equidef ({},{}) n={n} eps={epsilon}", case_pair.0, case_pair.1), EXACT_TOL);
    let fwd = verify_map_of_pairs(&e.forward, &e.first, &second, budget, seed)?;
    let bwd = verify_map_of_pairs(&e.backward, &e.second, &first, budget, seed)?;
    let id_a = SmoothMap::identity(e.first.ambient_dim());
    let id_b = SmoothMap::identity(e.second.ambient_dim());
    let h1 =
        verify_homotopy(&e.homotopy_first, &e.backward.compose(&e.forward), &id_a, &e.first, &first, budget, seed)?;
    let h2 =
        verify_homotopy(&e.homotopy_second, &e.forward.compose(&e.backward), &id_b, &e.second, &second, budget, seed)?;
    for (r, name) in [(fwd, "forward"), (bwd, "backward"), (h1, "homotopy_first"), (h2, "homotopy_second")] {
        report.absorb(&labelled(r, name));
    }
    if case_pair == (5, 6) {
        report.absorb(&positivity_guard(n, epsilon, budget, seed)?);
    }
    for (k, v) in &e.params {
        report.record(k.clone(), *v);
    }
    Ok(report.finish())
}

/// The maps linking `(Sⁿ, N)` to `(Rⁿ, ∂_ε Rⁿ)`.
#[derive(Debug, Clone)]
pub struct SphereChain {
    pub n: usize,
    pub epsilon: f64,
    /// `(Sⁿ, H) -> (Sⁿ, N)`.
    pub collapse: SmoothMap,
    pub collapse_homotopy: SmoothMap,
    pub stereographic: SmoothMap,
    pub stereographic_inverse: SmoothMap,
    /// `(Rⁿ, |y| >= 1) -> (Rⁿ, ∂_ε Rⁿ)`: `c + λ y`.
    pub scale_forward: SmoothMap,
    /// `(Rⁿ, ∂_ε Rⁿ) -> (Rⁿ, |y| >= 1)`: `μ (y - c)`.
    pub scale_backward: SmoothMap,
    pub scale_homotopy_first: SmoothMap,
    pub scale_homotopy_second: SmoothMap,
    pub lambda: f64,
    pub mu: f64,
}

impl SphereChain {
    pub fn build(n: usize, epsilon: f64) -> Result<Self, PairError> {
        if !(1..=2).contains(&n) {
            return Err(PairError::Construction(format!("the sphere chain is implemented for n in {{1, 2}}, got {n}")));
        }
        PairSpec::new(PairCase::RealThick, n, Some(epsilon))?;
        let half = 0.5 - epsilon;
        let lambda = (half * (n as f64).sqrt()).max(1.0);
        let mu = 1.0 / half;
        let c = half_point(n);
        let scale_forward =
            SmoothMap::from_fn(n, |y| y.iter().zip(&c).map(|(v, ci)| *ci + lambda * v.clone()).collect());
        let scale_backward =
            SmoothMap::from_fn(n, |y| y.iter().zip(&c).map(|(v, ci)| mu * (v.clone() - *ci)).collect());
        Ok(Self {
            n,
            epsilon,
            collapse: sphere_collapse(n),
            collapse_homotopy: sphere_collapse_homotopy(n),
            stereographic: stereographic(n),
            stereographic_inverse: stereographic_inverse(n),
            scale_forward,
            scale_backward,
            scale_homotopy_first: dilation_homotopy(&vec![0.0; n], lambda * mu),
            scale_homotopy_second: dilation_homotopy(&c, lambda * mu),
            lambda,
            mu,
        })
    }
}

fn round_trip(f: &SmoothMap, g: &SmoothMap, pts: &[Vec<f64>], name: &str) -> VerificationReport {
    let mut r = VerificationReport::new(name, EXACT_TOL);
    for x in pts {
        match f.eval(x).and_then(|y| g.eval(&y)) {
            // relative to the point's size: far points of the plane lose digits in the chart
            Ok(back) => r.observe(max_abs_diff(&back, x) / x.iter().fold(1.0f64, |m, v| m.max(v.abs())), x),
            Err(e) => r.fail(format!("evaluation failed: {e}"), Some(x)),
        }
    }
    r.finish()
}

/// `(Sⁿ, N) ≃ (Sⁿ, H)`, `(Sⁿ \ N, H \ N) ≅ (Rⁿ, |y| >= 1) ≃ (Rⁿ, ∂_ε Rⁿ)`, and the
/// inclusion `(Sⁿ \ N, H \ N) ⊂ (Sⁿ, H)`.
pub fn verify_sphere_chain(n: usize, epsilon: f64, budget: usize, seed: u64) -> Result<VerificationReport, PairError> {
    let chain = SphereChain::build(n, epsilon)?;
    let pole = PairSpec::new(PairCase::SpherePole, n, None)?;
    let hemi = PairSpec::new(PairCase::SphereHemisphere, n, None)?;
    let punct = PairSpec::new(PairCase::SpherePunctured, n, None)?;
    let outside = PairSpec::new(PairCase::RealOutsideBall, n, None)?;
    let thick = PairSpec::new(PairCase::RealThick, n, Some(epsilon))?;
    let id_s = SmoothMap::identity(n + 1);
    let id_r = SmoothMap::identity(n);
    let mut report = VerificationReport::new(format!("equidef (9,2) n={n} eps={epsilon}"), EXACT_TOL);

    let parts = vec![
        labelled(verify_map_of_pairs(&id_s, &pole, &hemi.clone().into(), budget, seed)?, "pole_into_hemisphere"),
        labelled(verify_map_of_pairs(&chain.collapse, &hemi, &pole.clone().into(), budget, seed)?, "collapse"),
        labelled(
            verify_homotopy(
                &chain.collapse_homotopy,
                &chain.collapse,
                &id_s,
                &pole,
                &pole.clone().into(),
                budget,
                seed,
            )?,
            "collapse_homotopy_pole",
        ),
        labelled(
            verify_homotopy(
                &chain.collapse_homotopy,
                &chain.collapse,
                &id_s,
                &hemi,
                &hemi.clone().into(),
                budget,
                seed,
            )?,
            "collapse_homotopy_hemisphere",
        ),
        labelled(verify_map_of_pairs(&id_s, &punct, &hemi.clone().into(), budget, seed)?, "punctured_inclusion"),
        labelled(
            verify_map_of_pairs(&chain.stereographic, &punct, &outside.clone().into(), budget, seed)?,
            "stereographic",
        ),
        labelled(
            verify_map_of_pairs(&chain.stereographic_inverse, &outside, &punct.clone().into(), budget, seed)?,
            "stereographic_inverse",
        ),
        {
            let mut rng = substream(seed, "stereo_round_trip");
            let s_pts = punct.sample_space(&mut rng, budget);
            let r_pts = outside.sample_space(&mut rng, budget);
            let mut r =
                round_trip(&chain.stereographic, &chain.stereographic_inverse, &s_pts, "stereographic_round_trip");
            r.absorb(&round_trip(&chain.stereographic_inverse, &chain.stereographic, &r_pts, "plane_round_trip"));
            r.finish()
        },
        labelled(
            verify_map_of_pairs(&chain.scale_forward, &outside, &thick.clone().into(), budget, seed)?,
            "scale_forward",
        ),
        labelled(
            verify_map_of_pairs(&chain.scale_backward, &thick, &outside.clone().into(), budget, seed)?,
            "scale_backward",
        ),
        labelled(
            verify_homotopy(
                &chain.scale_homotopy_first,
                &chain.scale_backward.compose(&chain.scale_forward),
                &id_r,
                &outside,
                &outside.clone().into(),
                budget,
                seed,
            )?,
            "scale_homotopy_first",
        ),
        labelled(
            verify_homotopy(
                &chain.scale_homotopy_second,
                &chain.scale_forward.compose(&chain.scale_backward),
                &id_r,
                &thick,
                &thick.clone().into(),
                budget,
                seed,
            )?,
            "scale_homotopy_second",
        ),
    ];
    for p in &parts {
        report.absorb(p);
    }
    report.record("scale_lambda", chain.lambda);
    report.record("scale_mu", chain.mu);
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(verify_pair_equivalence((1, 2), 2, 0.6, 10, 0), Err(PairError::EpsilonOutOfRange { .. })));
        assert!(matches!(
            build_equidef((2, 5), 2, 0.2, SearchOptions::default()),
            Err(PairError::UnsupportedPair(2, 5))
        ));
        assert!(verify_pair_equivalence((9, 2), 3, 0.2, 10, 0).is_err());
    }

    #[test]
    fn every_pair_small_budget() {
        for &(a, b) in &SUPPORTED_PAIRS {
            for n in 1..=2 {
                let rep = verify_pair_equivalence((a, b), n, 0.2, 120, 4).unwrap();
                assert!(rep.pass, "{rep}");
            }
        }
    }

    #[test]
    fn dilation_respects_bound() {
        for n in 1..=3 {
            let e = build_equidef((6, 2), n, 0.2, SearchOptions::default()).unwrap();
            assert!(e.params["dilation"] >= e.params["dilation_bound"]);
        }
    }

    #[test]
    fn cutoff_composite_lands_in_boundary() {
        let m = build_equidef_map((5, 6), Direction::Backward, 2, 0.2).unwrap();
        let rep = verify_map_of_pairs(&m.map, &m.source, &m.target.clone().into(), 500, 2).unwrap();
        assert!(rep.pass);
        let y = m.map.eval(&[0.1, 0.3, 0.6]).unwrap();
        assert_eq!(y[0], 0.0);
    }

    #[test]
    fn positivity_margin_recorded() {
        let r = positivity_guard(1, 0.2, 200, 1).unwrap();
        assert!(r.pass);
        assert!(r.recorded["delta"] > 0.0);
    }
}
