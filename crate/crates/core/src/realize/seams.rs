//! Consistency of the face gluing and the parallel-seam artifact.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use super::complex::{realize, CellComplex, RealPoint};
use super::product_map::natural_product_map;
use crate::report::VerificationReport;
use crate::sampling::{max_abs_diff, substream, uniform};
use crate::simplicial::{SimplexRef, SimplicialSet};

/// Inserts zeros at `removed` (ascending) so that a point of a face lands in the parent chart.
pub fn embed_face_point(u: &[f64], removed: &[usize]) -> Vec<f64> {
    let mut out = u.to_vec();
    for &i in removed {
        out.insert(i, 0.0);
    }
    out
}

/// For every seam and every way it sits in an incident maximal cell, the
/// parent chart and the seam's own chart give the same class.
pub fn gluing_consistency(c: &CellComplex, samples_per_seam: usize, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new("realize.gluing_consistency", 1e-12);
    let seams = c.seam_set();
    let mut rng = substream(seed, "gluing");
    for seam in &seams.seams {
        let tau = c.source.lookup(&seam.cell).expect("seam cell");
        let embeddings: Vec<(SimplexRef, Vec<usize>)> = seams
            .maximal
            .iter()
            .filter(|m| seam.incident.contains(m))
            .flat_map(|m| {
                let ms = c.source.lookup(m).expect("maximal cell");
                c.iterated_faces(&ms).into_iter().filter(|(_, f)| *f == tau).map(move |(r, _)| (ms.clone(), r))
            })
            .collect();
        for _ in 0..samples_per_seam {
            let mut u: Vec<f64> = (0..tau.degree).map(|_| uniform(&mut rng, -1.5, 1.5)).collect();
            u.insert(0, 1.0 - u.iter().sum::<f64>());
            let own = c.normal_form(&RealPoint::new(tau.clone(), u.clone())).expect("seam point");
            for (m, removed) in &embeddings {
                let p = c.normal_form(&RealPoint::new(m.clone(), embed_face_point(&u, removed))).expect("chart point");
                if p.cell != own.cell {
                    rep.fail(format!("{} lands in {}", seam.cell, c.cell_name(&p.cell)), Some(&u));
                } else {
                    rep.observe(max_abs_diff(&p.coords, &own.coords), &u);
                }
            }
        }
    }
    rep.finish()
}

/// The graph with two vertices joined by two parallel edges.
pub fn parallel_edges() -> SimplicialSet {
    let mut a = SimplicialSet::empty(crate::simplicial::DEFAULT_DIM_CAP);
    let v = a.add_generator("v", vec![]).expect("vertex");
    let w = a.add_generator("w", vec![]).expect("vertex");
    a.add_generator("e", vec![w.clone(), v.clone()]).expect("edge");
    a.add_generator("f", vec![w, v]).expect("edge");
    a
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParallelSeamReport {
    pub seam_cells: Vec<String>,
    /// The images of the two vertical seams in the square chart `ℝ²` never meet.
    pub seams_parallel_disjoint: bool,
    /// Any two edge lines of one affine triangle meet.
    pub triangle_edges_meet: bool,
}

impl ParallelSeamReport {
    /// Two disjoint parallel seams cannot both be edges of a single affine triangle.
    pub fn artifact_confirmed(&self) -> bool {
        self.seams_parallel_disjoint && self.triangle_edges_meet
    }
}

fn lines_meet(p1: [f64; 2], d1: [f64; 2], p2: [f64; 2], d2: [f64; 2]) -> bool {
    let m = Matrix2::new(d1[0], -d2[0], d1[1], -d2[1]);
    if m.rank(1e-12) == 2 {
        return true;
    }
    let off = [p2[0] - p1[0], p2[1] - p1[1]];
    (off[0] * d1[1] - off[1] * d1[0]).abs() < 1e-12
}

/// In `|A × Δ¹|` with `A` two parallel edges, the seams `v × Δ¹` and `w × Δ¹`
/// map to parallel, disjoint lines in the square over one edge.
pub fn parallel_seam_artifact() -> ParallelSeamReport {
    let a = parallel_edges();
    let d1 = SimplicialSet::delta(1).expect("Δ¹");
    let sq = SimplicialSet::product(&a, &d1).expect("A×Δ¹");
    let prod = realize(&sq);
    let iota = d1.lookup("[0,1]").expect("edge");
    let v = a.lookup("v").expect("v");
    let w = a.lookup("w").expect("w");
    let seam_v = sq.product_simplex(&v.degenerate(0), &iota).expect("v×ι");
    let seam_w = sq.product_simplex(&w.degenerate(0), &iota).expect("w×ι");
    let seams = prod.seam_set();
    let names: Vec<String> = [&seam_v, &seam_w]
        .iter()
        .map(|s| sq.name_of(s).to_string())
        .filter(|n| seams.seams.iter().any(|x| &x.cell == n))
        .collect();

    // Square chart of e × Δ¹: first coordinate along e, second along Δ¹.
    let vertex_on_e = |p: &RealPoint| if p.cell == v { 0.0 } else { 1.0 };
    let line = |s: &SimplexRef| {
        let pts: Vec<[f64; 2]> = [0.25, 1.75]
            .iter()
            .map(|&t| {
                let (pa, pb) =
                    natural_product_map(&prod, &RealPoint::new(s.clone(), vec![1.0 - t, t])).expect("product");
                [vertex_on_e(&pa), pb.coords[1]]
            })
            .collect();
        (pts[0], [pts[1][0] - pts[0][0], pts[1][1] - pts[0][1]])
    };
    let (pv, dv) = line(&seam_v);
    let (pw, dw) = line(&seam_w);
    let seams_parallel_disjoint = !lines_meet(pv, dv, pw, dw);

    // Edge lines x_i = 0 of 𝔸² in the coordinates (x_1, x_2).
    let edges = [([0.0, 1.0], [1.0, -1.0]), ([0.0, 0.0], [0.0, 1.0]), ([0.0, 0.0], [1.0, 0.0])];
    let triangle_edges_meet =
        (0..3).all(|i| (i + 1..3).all(|j| lines_meet(edges[i].0, edges[i].1, edges[j].0, edges[j].1)));
    ParallelSeamReport { seam_cells: names, seams_parallel_disjoint, triangle_edges_meet }
}

/// Counts of a horn's maximal and codimension-one seam cells against the
/// coequalizer presentation: `n` cells of dimension `n−1` glued along `C(n,2)` of dimension `n−2`.
pub fn horn_cell_counts(n: usize, k: usize) -> Option<(usize, usize, usize, usize)> {
    let c = realize(&SimplicialSet::horn(n, k).ok()?);
    let seams = c.seam_set();
    Some((seams.maximal.len(), n, seams.count(n - 2), n * (n - 1) / 2))
}

/// Like [`gluing_consistency`], with a fixed per-seam sample count.
pub fn check_gluing(a: &SimplicialSet, seed: u64) -> VerificationReport {
    gluing_consistency(&realize(a), 1000, seed)
}
