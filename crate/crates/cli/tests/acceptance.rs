//! One pass/fail line per acceptance criterion; exits non-zero if any fails.

use std::fs;
use std::path::Path;
use std::time::Instant;

use diffeo_cli::checks::{checks_for, CIRCLE_EPSILONS, EQUIDEF_EPSILON};
use diffeo_cli::{run_suite, SuiteConfig};
use diffeo_core::corpus::verify_ad_corpus;
use diffeo_core::fibrancy::{
    abelian_horn_filler, circle_horn, circle_model, dopen_retraction, halfline_obstruction, lift_horn_through_bundle,
    random_polynomial, verify_circle_retract, verify_dopen, verify_filler, CircleSection, LiftError, SectionVariant,
};
use diffeo_core::pairs::{positivity_guard, verify_pair_equivalence, SUPPORTED_PAIRS};
use diffeo_core::realize::{horn_cell_counts, non_injectivity_witness, realize, surjectivity_probe};
use diffeo_core::sampling::{substream, uniform_box};
use diffeo_core::simplicial::homology;
use diffeo_core::{Expr, HornData, RealPoint, SimplicialSet, SmoothMap, EXACT_TOL};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn halfline() -> Outcome {
    let h = halfline_obstruction();
    ensure(h.h2_exact == (-6, 1), format!("exact h''(0) = {}/{}", h.h2_exact.0, h.h2_exact.1))?;
    ensure((h.h2_ad + 6.0).abs() <= EXACT_TOL, format!("AD h''(0) = {}", h.h2_ad))?;
    for (i, row) in h.forced_hessian.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let want = if i == j { 2.0 } else { -2.0 };
            ensure((v - want).abs() <= EXACT_TOL, format!("F_{i}{j}(0) = {v}"))?;
        }
    }
    ensure(h.candidate_face_residual == 0.0, format!("candidate face residual {}", h.candidate_face_residual))?;
    ensure(h.candidate_diagonal_residual == 0.0, "F(t,t,t) differs from -3t^2")?;
    Ok(format!("h''(0) = -6 exact, AD {:.1e} off", (h.h2_ad + 6.0).abs()))
}

fn filler() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=4 {
        let mut rng = substream(11, &format!("acceptance_filler_{n}"));
        for i in 0..50 {
            let f = HornData::restrict_from(&random_polynomial(n, 2, 3, &mut rng), n);
            let ft = abelian_horn_filler(&f).map_err(|e| e.to_string())?;
            let r = verify_filler(&f, &ft, 1000, i);
            ensure(r.pass && r.samples_used >= 1000, format!("n={n} instance {i}: {r}"))?;
            worst = worst.max(r.max_residual);
            if n == 2 {
                let mut pts = substream(i, "closed_form");
                for _ in 0..50 {
                    let p = uniform_box(&mut pts, 2, -2.0, 2.0);
                    let at = |k: usize, y: f64| f.pieces[k].eval(&[y]).unwrap()[0];
                    let closed = at(1, p[0]) + at(0, p[1]) - at(0, 0.0);
                    ensure(ft.eval(&p).unwrap()[0] == closed, format!("n=2 closed form differs at {p:?}"))?;
                }
            }
        }
    }
    Ok(format!("200 instances, max restriction residual {worst:.1e}, n=2 closed form exact"))
}

fn circle() -> Outcome {
    for eps in CIRCLE_EPSILONS {
        let r = verify_circle_retract(eps, 10_000, 3, SectionVariant::Blended);
        ensure(r.pass && r.samples_used >= 10_000, format!("{r}"))?;
        let s = CircleSection::new(eps, SectionVariant::Blended).map_err(|e| e.to_string())?;
        let model = circle_model();
        for th in [0.5, -0.5] {
            let a = model.complex.normal_form(&s.point(th)).map_err(|e| e.to_string())?;
            let b_param = if th > 0.0 { th } else { th + 2.0 };
            let b = s.branch_b.eval(&[b_param]).unwrap();
            let b = model.complex.normal_form(&RealPoint::new(model.cell_b.clone(), b)).map_err(|e| e.to_string())?;
            ensure(a.approx_eq(&b, 1e-12), format!("seam class at θ={th}: {a:?} vs {b:?}"))?;
        }
        let lo = (1.0 - eps) / 2.0;
        for k in 1..=1000 {
            let th = lo + (0.5 - lo) * k as f64 / 1000.0;
            let x0 = s.branch_a.eval(&[th]).unwrap()[0];
            ensure(x0 == 0.0, format!("first coordinate {x0} at θ={th}, ε={eps}"))?;
        }
    }
    Ok("ε ∈ {0.1,0.2,0.3}: retract, seam classes, edge riding".into())
}

fn equidef() -> Outcome {
    let mut count = 0;
    for &(a, b) in &SUPPORTED_PAIRS {
        let top = if (a, b) == (9, 2) { 2 } else { 3 };
        for n in 1..=top {
            let r = verify_pair_equivalence((a, b), n, EQUIDEF_EPSILON, 500, 5).map_err(|e| e.to_string())?;
            ensure(r.pass, format!("{r}"))?;
            count += 1;
        }
    }
    for n in 1..=3 {
        let g = positivity_guard(n, EQUIDEF_EPSILON, 500, 5).map_err(|e| e.to_string())?;
        ensure(g.pass, format!("{g}"))?;
    }
    Ok(format!("{count} pair/dimension cases, positivity guard holds"))
}

fn simplicial() -> Outcome {
    let cfg = SuiteConfig::default();
    for c in checks_for("simplicial") {
        let r = c.run(&cfg);
        ensure(r.pass, format!("{r}"))?;
    }
    let d1 = SimplicialSet::delta(1).unwrap();
    let sq = SimplicialSet::product(&d1, &d1).unwrap();
    ensure(sq.nondegenerate_counts() == [4, 5, 2], "square counts")?;
    for n in 2..=3 {
        let h = homology(&SimplicialSet::boundary_delta(n).unwrap(), n - 1).unwrap();
        ensure(h.rank == 1 && h.torsion.is_empty(), format!("H_{}(∂Δ{n})", n - 1))?;
    }
    Ok("identities, counts (4,5,2), homology, no Λ²₁ filler in ∂Δ²".into())
}

fn realization() -> Outcome {
    for n in 2..=4 {
        for k in 0..=n {
            let (m, m_exp, s, s_exp) = horn_cell_counts(n, k).ok_or("horn")?;
            ensure(m == m_exp && s == s_exp, format!("Λ{n}_{k}: {m} cells along {s} seams"))?;
        }
    }
    let d1 = SimplicialSet::delta(1).unwrap();
    let c = realize(&SimplicialSet::product(&d1, &d1).unwrap());
    let seams = c.seam_set().count(1);
    ensure(seams == 1, format!("{seams} seam edges in the square"))?;
    let w = non_injectivity_witness();
    ensure(w.same_image && w.distinct_classes, "no non-injectivity witness")?;
    let r = surjectivity_probe(&c, 1000);
    ensure(r.pass && r.samples_used >= 1000, format!("{r}"))?;
    Ok(format!(
        "horn counts n=2..4, one seam, witness {} ~ {}, {} grid points",
        w.first_name, w.second_name, r.samples_used
    ))
}

fn affine(d: usize, c: f64, slope: &[f64]) -> SmoothMap {
    SmoothMap::from_fn(d, |y| vec![Expr::sum(y.iter().zip(slope).map(|(v, s)| *s * v.clone())) + c])
}

fn lift() -> Outcome {
    let b = circle_horn(2, &[affine(1, 0.3, &[1.7]), affine(1, 1.3, &[-0.4])]);
    let gamma = lift_horn_through_bundle(&b).map_err(|e| e.to_string())?;
    let r = verify_filler(&b, &gamma, 1000, 0);
    ensure(r.pass, format!("{r}"))?;
    let bad = circle_horn(3, &[affine(2, 0.0, &[0.5, 1.0]), affine(2, 0.0, &[0.5, 2.0]), affine(2, 0.0, &[1.0, 1.0])]);
    let rejected = matches!(lift_horn_through_bundle(&bad), Err(LiftError::Mismatch { .. }));
    ensure(rejected, "lift-mismatch data accepted")?;
    Ok(format!("Λ² residual {:.1e}, mismatch rejected", r.max_residual))
}

fn dopen() -> Outcome {
    for n in 1..=3 {
        let h = dopen_retraction(n, 0.5, 0.2).map_err(|e| e.to_string())?;
        let r = verify_dopen(&h, 10_000, 9);
        ensure(r.pass && r.samples_used >= 10_000 && r.tolerance <= 1e-12, format!("{r}"))?;
    }
    Ok("n=1..3, 10⁴ samples each".into())
}

fn ad() -> Outcome {
    let r = verify_ad_corpus(40, 13);
    ensure(r.pass, format!("{r}"))?;
    Ok(format!("{} expressions, {} points", r.recorded.get("entries").copied().unwrap_or(0.0), r.samples_used))
}

fn bundle(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    Ok(files)
}

fn determinism() -> Outcome {
    let mut runs = Vec::new();
    for jobs in [1, 2] {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let cfg = SuiteConfig { seed: 42, out: dir.path().to_path_buf(), jobs: Some(jobs), ..SuiteConfig::default() };
        let outcome = run_suite(&cfg).map_err(|e| e.to_string())?;
        ensure(outcome.pass(), format!("suite failed: {:?}", outcome.failing()))?;
        runs.push(bundle(dir.path())?);
    }
    ensure(runs[0] == runs[1], "report bundles differ")?;
    Ok(format!("suite all twice with seed 42: {} identical files", runs[0].len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("half-line obstruction", halfline),
        ("abelian horn filler", filler),
        ("circle retract", circle),
        ("pair equivalences", equidef),
        ("simplicial engine", simplicial),
        ("realization", realization),
        ("lifting through R -> S1", lift),
        ("D-open retraction", dopen),
        ("AD integrity", ad),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} [{tag}] {name}: {detail} ({:.1}s)", i + 1, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
