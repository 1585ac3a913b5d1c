//! The circle as the quotient of two affine triangles, and a smooth section of
//! the comparison map `|X| → S¹`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::realize::{embed_face_point, realize, CellComplex, RealPoint, RealizeError};
use crate::report::{VerificationReport, AD_FD_TOL, EXACT_TOL};
use crate::sampling::{max_abs_diff, substream, uniform};
use crate::simplicial::{SimplexRef, SimplicialSet};
use crate::smoothcalc::{check_gradient_fd, cutoff_expr, CutoffError, Expr, SmoothMap};

/// Two triangles `A = (E,G,F)` and `B = (G,F,H)` with `E, F ↦ x` and `G, H ↦ y`.
/// Edge `a` is `d₂A = d₀B`, edge `b` is `d₀A = d₂B`.
pub fn circle_simplicial_set() -> SimplicialSet {
    let mut s = SimplicialSet::empty(2);
    let x = s.add_generator("x", vec![]).expect("vertex");
    let y = s.add_generator("y", vec![]).expect("vertex");
    let c = s.add_generator("c", vec![x.clone(), x.clone()]).expect("edge");
    let a = s.add_generator("a", vec![y.clone(), x.clone()]).expect("edge");
    let b = s.add_generator("b", vec![x, y.clone()]).expect("edge");
    let d = s.add_generator("d", vec![y.clone(), y]).expect("edge");
    s.add_generator("A", vec![b.clone(), c, a.clone()]).expect("triangle");
    s.add_generator("B", vec![a, d, b]).expect("triangle");
    s
}

/// `(cos πθ, sin πθ)` of an affine phase.
fn unit_circle(theta: Expr) -> Vec<Expr> {
    let arg = PI * theta;
    vec![arg.cos(), arg.sin()]
}

pub struct CircleModel {
    pub complex: CellComplex,
    /// `σ_A(x,y,z) = e^{iπ(z−x)}` as a point of `ℝ²`.
    pub sigma_a: SmoothMap,
    /// `σ_B(x,y,z) = e^{iπ(1+z−x)}`.
    pub sigma_b: SmoothMap,
    pub cell_a: SimplexRef,
    pub cell_b: SimplexRef,
}

pub fn circle_model() -> CircleModel {
    let set = circle_simplicial_set();
    let cell_a = set.lookup("A").expect("A");
    let cell_b = set.lookup("B").expect("B");
    CircleModel {
        complex: realize(&set),
        sigma_a: SmoothMap::from_fn(3, |v| unit_circle(v[2].clone() - v[0].clone())),
        sigma_b: SmoothMap::from_fn(3, |v| unit_circle(1.0 + v[2].clone() - v[0].clone())),
        cell_a,
        cell_b,
    }
}

impl CircleModel {
    fn sigma_on(&self, top: &SimplexRef, coords: &[f64]) -> Vec<f64> {
        let f = if *top == self.cell_a { &self.sigma_a } else { &self.sigma_b };
        f.eval(coords).expect("σ is total")
    }

    /// Every way of writing a cell as a face of `A` or `B`.
    pub fn embeddings(&self, cell: &SimplexRef) -> Vec<(SimplexRef, Vec<usize>)> {
        [&self.cell_a, &self.cell_b]
            .into_iter()
            .flat_map(|top| {
                self.complex.iterated_faces(top).into_iter().filter(|(_, f)| f == cell).map(|(r, _)| (top.clone(), r))
            })
            .collect()
    }

    /// `σ` on the class of `p`, read through the first triangle containing it.
    pub fn sigma(&self, p: &RealPoint) -> Result<Vec<f64>, RealizeError> {
        let nf = self.complex.normal_form(p)?;
        let (top, removed) = self
            .embeddings(&nf.cell)
            .into_iter()
            .next()
            .ok_or_else(|| RealizeError::UnknownCell(nf.cell.to_string()))?;
        Ok(self.sigma_on(&top, &embed_face_point(&nf.coords, &removed)))
    }

    /// `σ_A` and `σ_B` agree on every identified face.
    pub fn check_sigma_well_defined(&self, samples: usize, seed: u64) -> VerificationReport {
        let mut rep = VerificationReport::new("fibrancy.circle_sigma_glues", 1e-12);
        let mut rng = substream(seed, "sigma_glue");
        for cell in self.complex.cells.iter().filter(|c| c.dim < 2) {
            let embeds = self.embeddings(&cell.simplex);
            for _ in 0..samples {
                let mut u: Vec<f64> = (0..cell.dim).map(|_| uniform(&mut rng, -1.5, 1.5)).collect();
                u.insert(0, 1.0 - u.iter().sum::<f64>());
                let values: Vec<Vec<f64>> =
                    embeds.iter().map(|(t, r)| self.sigma_on(t, &embed_face_point(&u, r))).collect();
                for v in &values[1..] {
                    rep.observe(max_abs_diff(v, &values[0]), &u);
                }
            }
        }
        rep.finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionVariant {
    /// `R(θ)` blends `1 − |θ|` into `½` through the cut-off.
    Blended,
    /// `R(θ) = 1 − |θ|` everywhere, kinked at `θ = 0`.
    Unblended,
}

/// `R(θ) = φ(2|θ|)(1−|θ|) + (1−φ(2|θ|))·½` on `[−½, ½]`, written with
/// `φ(2|θ|) = φ(2θ) + φ(−2θ)` so that no absolute value is needed.
pub fn r_expr(epsilon: f64, theta: &Expr, variant: SectionVariant) -> (Expr, Expr) {
    let one_minus = 1.0 - theta.clone();
    let r = match variant {
        SectionVariant::Blended => {
            let up = cutoff_expr(epsilon, 2.0 * theta.clone());
            let down = cutoff_expr(epsilon, -2.0 * theta.clone());
            up.clone() * one_minus.clone() + down.clone() * (1.0 + theta.clone()) + (1.0 - up - down) * 0.5
        }
        SectionVariant::Unblended => Expr::branch(theta.clone(), one_minus.clone(), 1.0 + theta.clone()),
    };
    (r, one_minus)
}

/// `R` as a map `ℝ → ℝ`.
pub fn r_map(epsilon: f64, variant: SectionVariant) -> SmoothMap {
    SmoothMap::from_fn(1, |t| vec![r_expr(epsilon, &t[0], variant).0])
}

/// `c(θ) = ((1−θ−R)/2, R, (1+θ−R)/2)`.
pub fn c_map(epsilon: f64, variant: SectionVariant) -> SmoothMap {
    SmoothMap::from_fn(1, |t| {
        let th = &t[0];
        let (r, one_minus) = r_expr(epsilon, th, variant);
        vec![(one_minus - r.clone()) * 0.5, r.clone(), (1.0 + th.clone() - r) * 0.5]
    })
}

pub struct CircleSection {
    pub epsilon: f64,
    pub variant: SectionVariant,
    /// `θ ↦ c(θ)` in the chart of `A`.
    pub branch_a: SmoothMap,
    /// `θ ↦ c(θ − 1)` in the chart of `B`.
    pub branch_b: SmoothMap,
    model: CircleModel,
}

/// Reduces `θ` to `[−½, 3/2)`.
pub fn reduce_theta(theta: f64) -> f64 {
    theta - 2.0 * ((theta + 0.5) / 2.0).floor()
}

impl CircleSection {
    pub fn new(epsilon: f64, variant: SectionVariant) -> Result<Self, CutoffError> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(CutoffError::EpsilonOutOfRange(epsilon));
        }
        let branch_a = c_map(epsilon, variant);
        let shift = SmoothMap::from_fn(1, |t| vec![t[0].clone() - 1.0]);
        let branch_b = branch_a.compose(&shift);
        Ok(Self { epsilon, variant, branch_a, branch_b, model: circle_model() })
    }

    pub fn model(&self) -> &CircleModel {
        &self.model
    }

    /// `s(e^{iπθ})`: `(c(θ), A)` for `θ ∈ [−½, ½]`, `(c(θ−1), B)` for `θ ∈ (½, 3/2)`.
    pub fn point(&self, theta: f64) -> RealPoint {
        let th = reduce_theta(theta);
        if th <= 0.5 {
            RealPoint::new(self.model.cell_a.clone(), self.branch_a.eval(&[th]).expect("total"))
        } else {
            RealPoint::new(self.model.cell_b.clone(), self.branch_b.eval(&[th]).expect("total"))
        }
    }
}

/// One-shot form of [`CircleSection::point`].
pub fn circle_section(theta: f64, epsilon: f64) -> Result<RealPoint, CutoffError> {
    Ok(CircleSection::new(epsilon, SectionVariant::Blended)?.point(theta))
}

/// `σ∘s = id`, seam consistency, edge riding, first-jet matching across the
/// seams and smoothness of both branches.
pub fn verify_circle_retract(epsilon: f64, budget: usize, seed: u64, variant: SectionVariant) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("fibrancy.circle_retract.eps{epsilon}"), EXACT_TOL);
    let sec = match CircleSection::new(epsilon, variant) {
        Ok(s) => s,
        Err(e) => {
            rep.fail(e.to_string(), None);
            return rep.finish();
        }
    };
    let model = sec.model();
    let mut rng = substream(seed, "circle_theta");
    let edge = (1.0 - epsilon) / 2.0;
    let mut thetas: Vec<f64> = vec![-0.5, -edge, 0.0, edge, 0.5, 1.0 - edge, 1.0, 1.0 + edge, 1.5 - 1e-12];
    while thetas.len() < budget {
        thetas.push(uniform(&mut rng, -0.5, 1.5));
    }

    let mut retract = VerificationReport::new("retract", EXACT_TOL);
    for &th in &thetas {
        let p = sec.point(th);
        match model.sigma(&p) {
            Ok(v) => retract.observe(max_abs_diff(&v, &[(PI * th).cos(), (PI * th).sin()]), &[th]),
            Err(e) => retract.fail(e.to_string(), Some(&[th])),
        }
    }
    let retract = retract.finish();

    let mut riding = VerificationReport::new("edge_riding", 0.0);
    for k in 1..=200 {
        let th = edge + (0.5 - edge) * k as f64 / 200.0;
        riding.observe(sec.point(th).coords[0].abs(), &[th]);
        riding.observe(sec.point(-th).coords[2].abs(), &[-th]);
    }
    let riding = riding.finish();

    let mut seams = VerificationReport::new("seam_classes", 1e-12);
    let mut jets = VerificationReport::new("seam_jets", AD_FD_TOL);
    for th in [0.5, -0.5] {
        let pa = RealPoint::new(model.cell_a.clone(), sec.branch_a.eval(&[th]).expect("total"));
        // The same point of S¹ on the B side: θ = ½ stays, θ = −½ becomes 3/2.
        let th_b = if th > 0.0 { th } else { th + 2.0 };
        let pb = RealPoint::new(model.cell_b.clone(), sec.branch_b.eval(&[th_b]).expect("total"));
        let (na, nb) = (model.complex.normal_form(&pa), model.complex.normal_form(&pb));
        let (Ok(na), Ok(nb)) = (na, nb) else {
            seams.fail("seam point failed to normalize", Some(&[th]));
            continue;
        };
        if na.cell != nb.cell {
            seams.fail(format!("seam at {th} lands in different cells"), Some(&[th]));
            continue;
        }
        seams.observe(max_abs_diff(&na.coords, &nb.coords), &[th]);
        let ja = sec.branch_a.eval_jet2(&[th]).expect("total");
        let jb = sec.branch_b.eval_jet2(&[th_b]).expect("total");
        let zero_a = pa.coords.iter().position(|c| *c == 0.0);
        let zero_b = pb.coords.iter().position(|c| *c == 0.0);
        let (Some(za), Some(zb)) = (zero_a, zero_b) else {
            jets.fail(format!("section does not meet the seam at {th}"), Some(&[th]));
            continue;
        };
        jets.observe(ja[za].gradient[0].abs().max(jb[zb].gradient[0].abs()), &[th]);
        let da: Vec<f64> = (0..3).filter(|&i| i != za).map(|i| ja[i].gradient[0]).collect();
        let db: Vec<f64> = (0..3).filter(|&i| i != zb).map(|i| jb[i].gradient[0]).collect();
        jets.observe(max_abs_diff(&da, &db), &[th]);
    }
    let seams = seams.finish();
    let jets = jets.finish();

    let mut smooth = VerificationReport::new("branch_smoothness", AD_FD_TOL);
    let mut probes = vec![0.0, 0.5 * edge, edge, 0.3, -0.3];
    probes.extend((0..16).map(|_| uniform(&mut rng, -0.49, 0.49)));
    for th in probes {
        smooth.absorb(&check_gradient_fd(&sec.branch_a, &[th], 1e-5));
        smooth.absorb(&check_gradient_fd(&sec.branch_b, &[th + 1.0], 1e-5));
    }
    let smooth = smooth.finish();

    for part in [&retract, &riding, &seams, &jets, &smooth] {
        rep.absorb(part);
        rep.record(format!("{}_residual", part.check), part.max_residual);
        if !part.pass {
            rep.note(format!("{} failed", part.check));
        }
    }
    rep.record("epsilon", epsilon);
    rep.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_is_a_simplicial_set() {
        let s = circle_simplicial_set();
        assert!(s.check_identities().pass);
        assert_eq!(s.nondegenerate_counts(), vec![2, 4, 2]);
        assert_eq!(crate::simplicial::homology(&s, 1).unwrap().rank, 1);
    }

    #[test]
    fn sigma_values_and_gluing() {
        let m = circle_model();
        let v = m.sigma_a.eval(&[1.0, 0.0, 0.0]).unwrap();
        assert!((v[0] + 1.0).abs() < 1e-15 && v[1].abs() < 1e-15);
        for s in [0.1, 0.37, -2.0, 3.5] {
            let a = m.sigma_a.eval(&[1.0 - s, s, 0.0]).unwrap();
            let b = m.sigma_b.eval(&[0.0, 1.0 - s, s]).unwrap();
            assert!(max_abs_diff(&a, &b) < 1e-12);
            let a = m.sigma_a.eval(&[0.0, 1.0 - s, s]).unwrap();
            let b = m.sigma_b.eval(&[1.0 - s, s, 0.0]).unwrap();
            assert!(max_abs_diff(&a, &b) < 1e-12);
        }
        assert!(m.check_sigma_well_defined(200, 0).pass);
    }

    #[test]
    fn r_and_c_values() {
        let r = r_map(0.2, SectionVariant::Blended);
        assert_eq!(r.eval(&[0.0]).unwrap()[0], 0.5);
        assert_eq!(r.eval(&[0.5]).unwrap()[0], 0.5);
        let c = c_map(0.2, SectionVariant::Blended);
        for th in [-0.5, -0.2, 0.0, 0.11, 0.45] {
            let v = c.eval(&[th]).unwrap();
            assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        assert_eq!(c.eval(&[0.45]).unwrap()[0], 0.0);
    }

    #[test]
    fn seam_points_at_half() {
        let sec = CircleSection::new(0.2, SectionVariant::Blended).unwrap();
        assert_eq!(sec.point(0.5).coords, vec![0.0, 0.5, 0.5]);
        assert_eq!(sec.branch_b.eval(&[0.5]).unwrap(), vec![0.5, 0.5, 0.0]);
        assert_eq!(reduce_theta(2.25), 0.25);
        assert_eq!(reduce_theta(-0.75), 1.25);
    }

    #[test]
    fn retract_passes() {
        for eps in [0.1, 0.2, 0.3] {
            let rep = verify_circle_retract(eps, 2000, 1, SectionVariant::Blended);
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn unblended_section_fails_only_smoothness() {
        let rep = verify_circle_retract(0.2, 500, 1, SectionVariant::Unblended);
        assert!(!rep.pass);
        assert!(rep.recorded["seam_jets_residual"] <= AD_FD_TOL);
        assert!(rep.recorded["retract_residual"] <= EXACT_TOL);
        assert!(rep.recorded["branch_smoothness_residual"] > AD_FD_TOL);
    }
}
