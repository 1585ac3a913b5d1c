//! Simplicial maps, exhaustive horn filling and simplicial homotopies.

use rayon::prelude::*;

use super::set::{vertex_name, Shape, SimplicialError, SimplicialSet};
use super::simplex::SimplexRef;
use crate::report::VerificationReport;

/// A map determined by its values on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    pub source: SimplicialSet,
    pub target: SimplicialSet,
    /// Per degree, per source generator: the image simplex (same degree).
    pub assignment: Vec<Vec<SimplexRef>>,
}

impl SimplicialMap {
    /// Validates degrees and naturality `f(d_i x) = d_i f(x)` on generators.
    pub fn new(
        source: SimplicialSet,
        target: SimplicialSet,
        assignment: Vec<Vec<SimplexRef>>,
    ) -> Result<Self, SimplicialError> {
        for q in 0..=source.dim() {
            let row = assignment.get(q).map_or(0, Vec::len);
            if row != source.count(q) {
                return Err(SimplicialError::Malformed(format!(
                    "degree {q}: {row} images for {} generators",
                    source.count(q)
                )));
            }
        }
        for (q, row) in assignment.iter().enumerate() {
            for (g, img) in row.iter().enumerate() {
                let bad_gen = target.generators.get(img.generator_degree()).is_none_or(|gs| img.generator >= gs.len());
                if img.degree != q || !img.is_canonical() || bad_gen {
                    return Err(SimplicialError::Malformed(format!("image of generator {q}:{g} is invalid ({img})")));
                }
            }
        }
        let map = Self { source, target, assignment };
        let rep = map.check_naturality();
        if !rep.pass {
            return Err(SimplicialError::Malformed(format!(
                "map does not commute with faces: {}",
                rep.notes.join("; ")
            )));
        }
        Ok(map)
    }

    /// Builds a map from generator names to target simplices.
    pub fn from_names(
        source: SimplicialSet,
        target: SimplicialSet,
        images: &[(&str, SimplexRef)],
    ) -> Result<Self, SimplicialError> {
        let mut assignment: Vec<Vec<Option<SimplexRef>>> =
            (0..=source.dim()).map(|q| vec![None; source.count(q)]).collect();
        for (name, img) in images {
            let s =
                source.lookup(name).ok_or_else(|| SimplicialError::Malformed(format!("unknown generator `{name}`")))?;
            assignment[s.degree][s.generator] = Some(img.clone());
        }
        let assignment = assignment
            .into_iter()
            .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| SimplicialError::Malformed("some generator has no image".into()))?;
        Self::new(source, target, assignment)
    }

    /// Image of any simplex: `f(s_I x) = s_I f(x)`.
    pub fn apply(&self, s: &SimplexRef) -> SimplexRef {
        self.assignment[s.generator_degree()][s.generator].degenerate_by(&s.word)
    }

    pub fn compose(&self, inner: &SimplicialMap) -> Result<SimplicialMap, SimplicialError> {
        if inner.target != self.source {
            return Err(SimplicialError::SourceMismatch("inner target differs from outer source".into()));
        }
        let assignment = inner.assignment.iter().map(|row| row.iter().map(|s| self.apply(s)).collect()).collect();
        SimplicialMap::new(inner.source.clone(), self.target.clone(), assignment)
    }

    pub fn check_naturality(&self) -> VerificationReport {
        let mut report = VerificationReport::new("naturality", 0.0);
        for (q, row) in self.assignment.iter().enumerate().skip(1) {
            for (g, img) in row.iter().enumerate() {
                let s = SimplexRef::nondegenerate(q, g);
                for i in 0..=q {
                    let lhs = self.apply(&self.source.face(&s, i));
                    let rhs = self.target.face(img, i);
                    report.observe(if lhs == rhs { 0.0 } else { 1.0 }, &[q as f64, g as f64, i as f64]);
                    if lhs != rhs {
                        report.note(format!("generator {q}:{g}, face {i}: {lhs} vs {rhs}"));
                    }
                }
            }
        }
        report.finish()
    }

    /// The constant map at a vertex.
    pub fn constant(
        source: SimplicialSet,
        target: SimplicialSet,
        vertex: &SimplexRef,
    ) -> Result<Self, SimplicialError> {
        let assignment = (0..=source.dim())
            .map(|q| {
                let img = vertex.degenerate_by(&(0..q).rev().collect::<Vec<_>>());
                vec![img; source.count(q)]
            })
            .collect();
        Self::new(source, target, assignment)
    }
}

/// Horn `(n, k)` a map is defined on, recovered from its source.
fn horn_shape(h: &SimplicialMap) -> Result<(usize, usize), SimplicialError> {
    match h.source.shape {
        Shape::Horn(n, k) => Ok((n, k)),
        _ => Err(SimplicialError::Malformed("source of a horn map must be built by `horn`".into())),
    }
}

/// `(n, k, [(i, h(d_i Δⁿ))])`.
type HornFaces = (usize, usize, Vec<(usize, SimplexRef)>);

/// The horn's images of its faces `d_i Δⁿ`, `i != k`.
fn horn_faces(h: &SimplicialMap) -> Result<HornFaces, SimplicialError> {
    let (n, k) = horn_shape(h)?;
    let mut out = Vec::new();
    for i in (0..=n).filter(|&i| i != k) {
        let verts: Vec<usize> = (0..=n).filter(|&v| v != i).collect();
        let face = h
            .source
            .lookup(&vertex_name(&verts))
            .ok_or_else(|| SimplicialError::Malformed(format!("horn source lacks face {i}")))?;
        out.push((i, h.apply(&face)));
    }
    Ok((n, k, out))
}

fn fills(a: &SimplicialSet, s: &SimplexRef, faces: &[(usize, SimplexRef)]) -> bool {
    faces.iter().all(|(i, f)| a.face(s, *i) == *f)
}

/// First `n`-simplex of `a` (in tie-break order) whose faces extend the horn map.
pub fn find_horn_filler(a: &SimplicialSet, h: &SimplicialMap) -> Result<Option<SimplexRef>, SimplicialError> {
    if h.target != *a {
        return Err(SimplicialError::SourceMismatch("horn map does not land in the searched set".into()));
    }
    let (n, _, faces) = horn_faces(h)?;
    let candidates = a.all_simplices(n)?;
    Ok(candidates.par_iter().find_first(|s| fills(a, s, &faces)).cloned())
}

/// Every filler, by brute-force enumeration.
pub fn all_horn_fillers(a: &SimplicialSet, h: &SimplicialMap) -> Result<Vec<SimplexRef>, SimplicialError> {
    let (n, _, faces) = horn_faces(h)?;
    Ok(a.all_simplices(n)?.into_iter().filter(|s| fills(a, s, &faces)).collect())
}

/// Checks that `H: A × Δ¹ -> B` restricts to `f` at vertex 0 and to `g` at vertex 1.
pub fn verify_simplicial_homotopy(
    h: &SimplicialMap,
    f: &SimplicialMap,
    g: &SimplicialMap,
) -> Result<VerificationReport, SimplicialError> {
    let (left, right) =
        h.source.factors().ok_or_else(|| SimplicialError::SourceMismatch("homotopy source is not a product".into()))?;
    if !matches!(right.shape, Shape::Delta(1)) {
        return Err(SimplicialError::SourceMismatch("second factor must be Δ¹".into()));
    }
    if *left != f.source || *left != g.source {
        return Err(SimplicialError::SourceMismatch("first factor differs from the source of f or g".into()));
    }
    if h.target != f.target || h.target != g.target {
        return Err(SimplicialError::SourceMismatch("targets differ".into()));
    }
    let ends = [right.lookup("[0]").expect("Δ¹ vertex"), right.lookup("[1]").expect("Δ¹ vertex")];
    let mut report = VerificationReport::new("simplicial_homotopy", 0.0);
    for (q, row) in left.generators.iter().enumerate() {
        for gi in 0..row.len() {
            let x = SimplexRef::nondegenerate(q, gi);
            for (end, m) in ends.iter().zip([f, g]) {
                let v = end.degenerate_by(&(0..q).rev().collect::<Vec<_>>());
                let cell = h.source.product_simplex(&x, &v).expect("product contains the end cells");
                let ok = h.apply(&cell) == m.apply(&x);
                report.observe(if ok { 0.0 } else { 1.0 }, &[q as f64, gi as f64, end.generator as f64]);
            }
        }
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn horn_into_own_simplex(n: usize, k: usize, target: SimplicialSet) -> SimplicialMap {
        let horn = SimplicialSet::horn(n, k).unwrap();
        let images: Vec<(String, SimplexRef)> =
            horn.generators.iter().flatten().map(|g| (g.name.clone(), target.lookup(&g.name).unwrap())).collect();
        let named: Vec<(&str, SimplexRef)> = images.iter().map(|(a, b)| (a.as_str(), b.clone())).collect();
        SimplicialMap::from_names(horn, target, &named).unwrap()
    }

    #[test]
    fn filler_in_simplex() {
        let d2 = SimplicialSet::delta(2).unwrap();
        let h = horn_into_own_simplex(2, 1, d2.clone());
        assert_eq!(find_horn_filler(&d2, &h).unwrap(), Some(d2.lookup("[0,1,2]").unwrap()));
    }

    #[test]
    fn no_filler_in_boundary() {
        let b = SimplicialSet::boundary_delta(2).unwrap();
        let h = horn_into_own_simplex(2, 1, b.clone());
        assert_eq!(find_horn_filler(&b, &h).unwrap(), None);
        assert!(all_horn_fillers(&b, &h).unwrap().is_empty());
    }

    #[test]
    fn constant_horn_has_degenerate_filler() {
        let pt = SimplicialSet::delta(0).unwrap();
        let horn = SimplicialSet::horn(3, 2).unwrap();
        let h = SimplicialMap::constant(horn, pt.clone(), &SimplexRef::nondegenerate(0, 0)).unwrap();
        let filler = find_horn_filler(&pt, &h).unwrap().unwrap();
        assert!(filler.is_degenerate());
        assert_eq!(filler.degree, 3);
    }

    #[test]
    fn malformed_maps_rejected() {
        let d1 = SimplicialSet::delta(1).unwrap();
        let v0 = d1.lookup("[0]").unwrap();
        // send the edge to a degenerate vertex but keep the endpoints distinct
        let bad = SimplicialMap::from_names(
            d1.clone(),
            d1.clone(),
            &[("[0]", v0.clone()), ("[1]", d1.lookup("[1]").unwrap()), ("[0,1]", v0.degenerate(0))],
        );
        assert!(bad.is_err());
        let not_horn = SimplicialMap::constant(d1.clone(), d1.clone(), &v0).unwrap();
        assert!(find_horn_filler(&d1, &not_horn).is_err());
    }

    #[test]
    fn homotopies_between_vertex_inclusions() {
        let pt = SimplicialSet::delta(0).unwrap();
        let d1 = SimplicialSet::delta(1).unwrap();
        let cyl = SimplicialSet::product(&pt, &d1).unwrap();
        let (_, pr) = cyl.projections().unwrap();
        let i0 = SimplicialMap::from_names(pt.clone(), d1.clone(), &[("[0]", d1.lookup("[0]").unwrap())]).unwrap();
        let i1 = SimplicialMap::from_names(pt.clone(), d1.clone(), &[("[0]", d1.lookup("[1]").unwrap())]).unwrap();
        assert!(verify_simplicial_homotopy(&pr, &i0, &i1).unwrap().pass);
        assert!(!verify_simplicial_homotopy(&pr, &i0, &i0).unwrap().pass);

        // collapse Δ¹ -> Δ⁰ after the homotopy: a degenerate homotopy id ~ id
        let c = SimplicialMap::constant(d1.clone(), pt.clone(), &SimplexRef::nondegenerate(0, 0)).unwrap();
        let hc = c.compose(&pr).unwrap();
        let id =
            SimplicialMap::from_names(pt.clone(), pt.clone(), &[("[0]", SimplexRef::nondegenerate(0, 0))]).unwrap();
        assert_eq!(hc.apply(&SimplexRef::nondegenerate(1, 0)), SimplexRef::nondegenerate(0, 0).degenerate(0));
        assert!(verify_simplicial_homotopy(&hc, &id, &id).unwrap().pass);

        // constant homotopy
        let (pl, _) = cyl.projections().unwrap();
        assert!(verify_simplicial_homotopy(&pl, &id, &id).unwrap().pass);
    }
}
