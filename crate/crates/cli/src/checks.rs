//! The named checks each suite runs.

use diffeo_core::corpus::verify_ad_corpus;
use diffeo_core::fibrancy::{
    abelian_horn_filler, abelian_horn_filler_with, circle_horn, dopen_retraction, filler_sign, halfline_obstruction,
    lift_horn_through_bundle, loop_psi, loop_retract_h, plane_projection_candidate, random_polynomial,
    rank_obstruction, verify_circle_retract, verify_dopen, verify_filler, FillError, LiftError, SectionVariant,
};
use diffeo_core::pairs::{positivity_guard, verify_pair_equivalence, SUPPORTED_PAIRS};
use diffeo_core::realize::{
    check_gluing, horn_cell_counts, non_injectivity_witness, parallel_seam_artifact, realize, surjectivity_probe,
    unit_law_check,
};
use diffeo_core::sampling::{substream, uniform_box};
use diffeo_core::simplicial::{all_horn_fillers, homology, SimplicialMap};
use diffeo_core::{
    Expr, GeneratedDiffeology, HornData, SimplexRef, SimplicialSet, SmoothMap, VerificationReport, EXACT_TOL,
};

use crate::config::{Fault, SuiteConfig};

/// Cut-off parameter used by the pair-equivalence checks.
pub const EQUIDEF_EPSILON: f64 = 0.2;
pub const CIRCLE_EPSILONS: [f64; 3] = [0.1, 0.2, 0.3];

type Runner = Box<dyn Fn(&SuiteConfig) -> VerificationReport + Send + Sync>;

pub struct Check {
    pub id: String,
    run: Runner,
}

impl Check {
    fn new(id: impl Into<String>, run: impl Fn(&SuiteConfig) -> VerificationReport + Send + Sync + 'static) -> Self {
        Self { id: id.into(), run: Box::new(run) }
    }

    /// Runs the check and stamps its id as the report name.
    pub fn run(&self, cfg: &SuiteConfig) -> VerificationReport {
        let mut rep = (self.run)(cfg);
        rep.check = self.id.clone();
        rep
    }
}

/// A report that passes iff every observed condition holds.
struct Exact(VerificationReport);

impl Exact {
    fn new() -> Self {
        Self(VerificationReport::new("", 0.0))
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>, point: &[f64]) {
        self.0.observe(if ok { 0.0 } else { 1.0 }, point);
        if !ok {
            self.0.note(what);
        }
    }

    fn done(self) -> VerificationReport {
        self.0.finish()
    }
}

fn failed(msg: impl std::fmt::Display) -> VerificationReport {
    let mut r = VerificationReport::new("", 0.0);
    r.fail(msg.to_string(), None);
    r.finish()
}

pub fn checks_for(suite: &str) -> Vec<Check> {
    match suite {
        "simplicial" => simplicial(),
        "equidef" => equidef(),
        "realization" => realization(),
        "fibrancy" => fibrancy(),
        _ => [simplicial(), equidef(), realization(), fibrancy()].into_iter().flatten().collect(),
    }
}

fn simplicial_zoo() -> Vec<(String, SimplicialSet)> {
    let mut out = Vec::new();
    for n in 0..=4 {
        out.push((format!("delta{n}"), SimplicialSet::delta(n).expect("Δⁿ")));
    }
    for n in 1..=4 {
        out.push((format!("boundary{n}"), SimplicialSet::boundary_delta(n).expect("∂Δⁿ")));
        for k in 0..=n {
            out.push((format!("horn{n}_{k}"), SimplicialSet::horn(n, k).expect("Λⁿ_k")));
        }
    }
    let d1 = SimplicialSet::delta(1).expect("Δ¹");
    out.push(("square".into(), SimplicialSet::product(&d1, &d1).expect("Δ¹×Δ¹")));
    out
}

fn horn_inclusion(n: usize, k: usize, target: &SimplicialSet) -> Option<SimplicialMap> {
    let horn = SimplicialSet::horn(n, k).ok()?;
    let images: Vec<(String, SimplexRef)> = horn
        .generators
        .iter()
        .flatten()
        .map(|g| Some((g.name.clone(), target.lookup(&g.name)?)))
        .collect::<Option<_>>()?;
    let named: Vec<(&str, SimplexRef)> = images.iter().map(|(a, b)| (a.as_str(), b.clone())).collect();
    SimplicialMap::from_names(horn, target.clone(), &named).ok()
}

fn simplicial() -> Vec<Check> {
    vec![
        Check::new("simplicial.identities", |_| {
            let mut rep = VerificationReport::new("", 0.0);
            for (name, set) in simplicial_zoo() {
                let mut r = set.check_identities();
                r.check = name;
                rep.absorb(&r);
            }
            rep.finish()
        }),
        Check::new("simplicial.square_counts", |_| {
            let d1 = SimplicialSet::delta(1).expect("Δ¹");
            let sq = SimplicialSet::product(&d1, &d1).expect("Δ¹×Δ¹");
            let counts = sq.nondegenerate_counts();
            let mut e = Exact::new();
            e.expect(counts == [4, 5, 2], format!("counts {counts:?}"), &[]);
            e.expect(sq.euler_characteristic() == 1, "euler characteristic", &[]);
            for (q, c) in counts.iter().enumerate() {
                e.0.record(format!("count_{q}"), *c as f64);
            }
            e.done()
        }),
        Check::new("simplicial.homology", |_| {
            let mut e = Exact::new();
            for n in 0..=4 {
                let d = SimplicialSet::delta(n).expect("Δⁿ");
                for q in 0..=n {
                    let h = homology(&d, q).expect("homology");
                    let ok = if q == 0 { h.rank == 1 && h.torsion.is_empty() } else { h.is_trivial() };
                    e.expect(ok, format!("H_{q}(Δ{n}) = {h:?}"), &[n as f64, q as f64]);
                }
            }
            for n in 2..=3 {
                let b = SimplicialSet::boundary_delta(n).expect("∂Δⁿ");
                let h = homology(&b, n - 1).expect("homology");
                e.expect(h.rank == 1 && h.torsion.is_empty(), format!("H_{}(∂Δ{n}) = {h:?}", n - 1), &[n as f64]);
                for q in 1..n - 1 {
                    let h = homology(&b, q).expect("homology");
                    e.expect(h.is_trivial(), format!("H_{q}(∂Δ{n}) = {h:?}"), &[n as f64, q as f64]);
                }
            }
            e.done()
        }),
        Check::new("simplicial.horn_filler", |_| {
            let mut e = Exact::new();
            let b = SimplicialSet::boundary_delta(2).expect("∂Δ²");
            match horn_inclusion(2, 1, &b).map(|h| all_horn_fillers(&b, &h)) {
                Some(Ok(fillers)) => {
                    e.expect(fillers.is_empty(), "Λ²₁ has a filler in ∂Δ²", &[]);
                    e.0.record("fillers_in_boundary", fillers.len() as f64);
                }
                _ => e.expect(false, "horn map into ∂Δ² not built", &[]),
            }
            let d = SimplicialSet::delta(2).expect("Δ²");
            match horn_inclusion(2, 1, &d).map(|h| all_horn_fillers(&d, &h)) {
                Some(Ok(fillers)) => e.expect(fillers.len() == 1, "Λ²₁ should fill uniquely in Δ²", &[]),
                _ => e.expect(false, "horn map into Δ² not built", &[]),
            }
            e.done()
        }),
    ]
}

fn equidef() -> Vec<Check> {
    let mut out = Vec::new();
    for &(a, b) in &SUPPORTED_PAIRS {
        let top = if (a, b) == (9, 2) { 2 } else { 3 };
        for n in 1..=top {
            out.push(Check::new(format!("equidef.pair{a}_{b}.n{n}"), move |cfg: &SuiteConfig| {
                verify_pair_equivalence((a, b), n, EQUIDEF_EPSILON, cfg.budgets.equidef, cfg.seed)
                    .unwrap_or_else(failed)
            }));
        }
    }
    for n in 1..=3 {
        out.push(Check::new(format!("equidef.positivity_guard.n{n}"), move |cfg: &SuiteConfig| {
            positivity_guard(n, EQUIDEF_EPSILON, cfg.budgets.equidef, cfg.seed).unwrap_or_else(failed)
        }));
    }
    out.push(Check::new("smoothcalc.ad_corpus", |cfg: &SuiteConfig| verify_ad_corpus(cfg.budgets.ad_points, cfg.seed)));
    out
}

fn realization() -> Vec<Check> {
    vec![
        Check::new("realize.horn_counts", |_| {
            let mut e = Exact::new();
            for n in 2..=4 {
                for k in 0..=n {
                    match horn_cell_counts(n, k) {
                        Some((m, m_exp, s, s_exp)) => e.expect(
                            m == m_exp && s == s_exp,
                            format!("Λ{n}_{k}: {m} cells, {s} seams"),
                            &[n as f64, k as f64],
                        ),
                        None => e.expect(false, format!("Λ{n}_{k} not built"), &[n as f64, k as f64]),
                    }
                }
            }
            e.done()
        }),
        Check::new("realize.square_seams", |_| {
            let d1 = SimplicialSet::delta(1).expect("Δ¹");
            let c = realize(&SimplicialSet::product(&d1, &d1).expect("Δ¹×Δ¹"));
            let seams = c.seam_set();
            let mut e = Exact::new();
            e.expect(seams.count(1) == 1, format!("{} seam edges", seams.count(1)), &[]);
            e.0.record("seam_edges", seams.count(1) as f64);
            e.0.record("seam_vertices", seams.count(0) as f64);
            e.done()
        }),
        Check::new("realize.non_injective", |_| {
            let w = non_injectivity_witness();
            let mut e = Exact::new();
            e.expect(w.same_image, "witness images differ", &w.first.coords);
            e.expect(w.distinct_classes, "witness classes coincide", &w.second.coords);
            e.0.note(format!("{} ~ {} under the natural map", w.first_name, w.second_name));
            e.done()
        }),
        Check::new("realize.surjectivity", |cfg: &SuiteConfig| {
            let d1 = SimplicialSet::delta(1).expect("Δ¹");
            let c = realize(&SimplicialSet::product(&d1, &d1).expect("Δ¹×Δ¹"));
            surjectivity_probe(&c, cfg.budgets.grid)
        }),
        Check::new("realize.gluing", |cfg: &SuiteConfig| {
            let d1 = SimplicialSet::delta(1).expect("Δ¹");
            let mut rep = VerificationReport::new("", EXACT_TOL);
            for (name, set) in [
                ("horn3_1", SimplicialSet::horn(3, 1).expect("Λ³₁")),
                ("square", SimplicialSet::product(&d1, &d1).expect("Δ¹×Δ¹")),
            ] {
                let mut r = check_gluing(&set, cfg.seed);
                r.check = name.into();
                rep.absorb(&r);
            }
            rep.finish()
        }),
        Check::new("realize.unit_law", |cfg: &SuiteConfig| {
            unit_law_check(&SimplicialSet::horn(2, 1).expect("Λ²₁"), 1000, cfg.seed)
        }),
        Check::new("realize.parallel_seams", |_| {
            let r = parallel_seam_artifact();
            let mut e = Exact::new();
            e.expect(r.artifact_confirmed(), format!("{r:?}"), &[]);
            e.0.record("seam_cells", r.seam_cells.len() as f64);
            e.done()
        }),
    ]
}

fn filler_instances(n: usize, cfg: &SuiteConfig) -> Vec<HornData> {
    let mut rng = substream(cfg.seed, &format!("filler_instances_n{n}"));
    (0..cfg.budgets.filler_instances)
        .map(|_| HornData::restrict_from(&random_polynomial(n, 2, 3, &mut rng), n))
        .collect()
}

fn fill(f: &HornData, cfg: &SuiteConfig) -> Result<SmoothMap, FillError> {
    match cfg.fault {
        Some(Fault::FillerSigns) => abelian_horn_filler_with(f, |n, k| -filler_sign(n, k)),
        None => abelian_horn_filler(f),
    }
}

fn affine(d: usize, c: f64, slope: &[f64]) -> SmoothMap {
    SmoothMap::from_fn(d, |y| vec![Expr::sum(y.iter().zip(slope).map(|(v, s)| *s * v.clone())) + c])
}

fn fibrancy() -> Vec<Check> {
    let mut out = vec![Check::new("fibrancy.halfline", |_| {
        let h = halfline_obstruction();
        let mut e = Exact::new();
        e.expect(h.h2_exact == (-6, 1), format!("h''(0) = {}/{}", h.h2_exact.0, h.h2_exact.1), &[]);
        e.expect((h.h2_ad + 6.0).abs() <= EXACT_TOL, format!("AD h''(0) = {}", h.h2_ad), &[]);
        for (i, row) in h.forced_hessian.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 2.0 } else { -2.0 };
                e.expect((v - want).abs() <= EXACT_TOL, format!("F_{i}{j}(0) = {v}"), &[i as f64, j as f64]);
            }
        }
        e.expect(h.forced_gradient.iter().all(|g| *g == 0.0), "forced gradient nonzero", &h.forced_gradient);
        e.expect(h.candidate_face_residual == 0.0, "candidate face residual", &[h.candidate_face_residual]);
        e.expect(h.candidate_diagonal_residual == 0.0, "F(t,t,t) != -3t²", &[h.candidate_diagonal_residual]);
        e.expect(h.no_nonnegative_extension, "extension not obstructed", &[]);
        e.0.record("h2_ad", h.h2_ad);
        e.0.record("h2_exact", h.h2_exact.0 as f64 / h.h2_exact.1 as f64);
        e.0.record("face_consistency", h.face_consistency);
        e.done()
    })];
    for n in 1..=4 {
        out.push(Check::new(format!("fibrancy.filler.n{n}"), move |cfg: &SuiteConfig| {
            let mut rep = VerificationReport::new("", EXACT_TOL);
            for (i, f) in filler_instances(n, cfg).iter().enumerate() {
                let r = match fill(f, cfg) {
                    Ok(ft) => verify_filler(f, &ft, cfg.budgets.filler_samples, cfg.seed.wrapping_add(i as u64)),
                    Err(err) => failed(err),
                };
                rep.absorb(&r);
            }
            rep.record("instances", cfg.budgets.filler_instances as f64);
            rep.finish()
        }));
    }
    out.push(Check::new("fibrancy.filler.n2_closed_form", |cfg: &SuiteConfig| {
        let mut e = Exact::new();
        let mut rng = substream(cfg.seed, "closed_form_points");
        for f in filler_instances(2, cfg) {
            let Ok(ft) = fill(&f, cfg) else {
                e.expect(false, "fill failed", &[]);
                continue;
            };
            for _ in 0..20 {
                let p = uniform_box(&mut rng, 2, -2.0, 2.0);
                let at = |i: usize, y: f64| f.pieces[i].eval(&[y]).expect("piece")[0];
                let closed = at(1, p[0]) + at(0, p[1]) - at(0, 0.0);
                let got = ft.eval(&p).expect("filler")[0];
                e.expect(got == closed, format!("closed form differs by {:e}", got - closed), &p);
            }
        }
        e.done()
    }));
    for eps in CIRCLE_EPSILONS {
        out.push(Check::new(format!("fibrancy.circle.eps{eps}"), move |cfg: &SuiteConfig| {
            verify_circle_retract(eps, cfg.budgets.samples, cfg.seed, SectionVariant::Blended)
        }));
    }
    out.push(Check::new("fibrancy.lift", |cfg: &SuiteConfig| {
        let mut rep = VerificationReport::new("", EXACT_TOL);
        let b = circle_horn(2, &[affine(1, 0.3, &[1.7]), affine(1, 1.3, &[-0.4])]);
        match lift_horn_through_bundle(&b) {
            Ok(gamma) => rep.absorb(&verify_filler(&b, &gamma, cfg.budgets.filler_samples, cfg.seed)),
            Err(err) => rep.fail(err.to_string(), None),
        }
        let winding =
            circle_horn(3, &[affine(2, 0.0, &[0.5, 1.0]), affine(2, 0.0, &[0.5, 2.0]), affine(2, 0.0, &[1.0, 1.0])]);
        if !matches!(lift_horn_through_bundle(&winding), Err(LiftError::Mismatch { .. })) {
            rep.fail("winding mismatch accepted", None);
        }
        let offset = circle_horn(2, &[affine(1, 0.0, &[1.0]), affine(1, 0.5, &[1.0])]);
        if !matches!(lift_horn_through_bundle(&offset), Err(LiftError::OriginMismatch { .. })) {
            rep.fail("origin mismatch accepted", None);
        }
        rep.finish()
    }));
    for n in 1..=3 {
        out.push(Check::new(format!("fibrancy.dopen.n{n}"), move |cfg: &SuiteConfig| {
            match dopen_retraction(n, 0.5, 0.2) {
                Ok(r) => verify_dopen(&r, cfg.budgets.samples, cfg.seed),
                Err(err) => failed(err),
            }
        }));
    }
    out.push(Check::new("fibrancy.rank", |cfg: &SuiteConfig| {
        let mut e = Exact::new();
        for (n, m) in [(2, 1), (3, 2)] {
            let plots = GeneratedDiffeology::coordinate_planes(n, m);
            let r = rank_obstruction(&plane_projection_candidate(n, m), Some(&plots), n, cfg.seed);
            e.expect(r.contradiction, format!("no contradiction for n={n}"), &[n as f64]);
            e.expect(r.jacobian_rank == m, format!("rank {} for n={n}", r.jacobian_rank), &[n as f64]);
            e.expect(!r.hyperplane_identity_holds, "projection restricts to the identity", &[n as f64]);
            let id = rank_obstruction(&SmoothMap::identity(n), None, n, cfg.seed);
            e.expect(id.hyperplane_identity_holds && !id.contradiction, "identity obstructed", &[n as f64]);
        }
        e.done()
    }));
    out.push(Check::new("fibrancy.loops", |cfg: &SuiteConfig| {
        let psi = loop_psi(0.25);
        let mut rep = VerificationReport::new("", EXACT_TOL);
        for n in 2..=4 {
            match loop_retract_h(n, &psi, cfg.budgets.filler_samples, cfg.seed) {
                Ok(r) => rep.absorb(&r),
                Err(err) => rep.fail(err.to_string(), None),
            }
        }
        rep.finish()
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_unique_and_prefixed() {
        let all = checks_for("all");
        let mut ids: Vec<&str> = all.iter().map(|c| c.id.as_str()).collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n);
        let parts: usize =
            ["simplicial", "equidef", "realization", "fibrancy"].iter().map(|s| checks_for(s).len()).sum();
        assert_eq!(parts, n);
    }

    #[test]
    fn simplicial_checks_pass() {
        let cfg = SuiteConfig::default();
        for c in checks_for("simplicial") {
            let r = c.run(&cfg);
            assert!(r.pass, "{r}");
        }
    }
}
