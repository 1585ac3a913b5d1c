//! `|A|_D` as a complex of non-compact affine cells glued along faces.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::simplicial::{SimplexRef, SimplicialSet};

/// Coordinates this close to zero are treated as zero.
pub const ZERO_SNAP: f64 = 1e-12;
/// Allowed deviation of the coordinate sum from 1, relative to the largest coordinate.
pub const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizeError {
    #[error("coordinates sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("{got} coordinates for a {degree}-simplex")]
    WrongArity { degree: usize, got: usize },
    #[error("unknown cell {0}")]
    UnknownCell(String),
    #[error("the complex is not the realization of a product")]
    NotAProduct,
}

/// A point `(σ, x)` with `x ∈ 𝔸^q`; coordinates may be negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPoint {
    pub cell: SimplexRef,
    pub coords: Vec<f64>,
}

impl RealPoint {
    pub fn new(cell: SimplexRef, coords: Vec<f64>) -> Self {
        Self { cell, coords }
    }

    pub fn is_canonical(&self) -> bool {
        !self.cell.is_degenerate() && self.coords.iter().all(|&c| c != 0.0)
    }

    /// Same cell and coordinates within `tol`.
    pub fn approx_eq(&self, other: &RealPoint, tol: f64) -> bool {
        self.cell == other.cell
            && self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| (a - b).abs() <= tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub name: String,
    pub dim: usize,
    pub simplex: SimplexRef,
}

/// Face `face` of `cell` is identified with `target` by deleting coordinate `face`
/// and then summing coordinates through `target`'s degeneracy word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gluing {
    pub cell: String,
    pub face: usize,
    pub target: String,
    pub word: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CellComplex {
    pub source: SimplicialSet,
    pub cells: Vec<Cell>,
    pub gluing: Vec<Gluing>,
    pub(crate) factors: Option<Box<(CellComplex, CellComplex)>>,
}

#[derive(Serialize)]
struct ComplexJson<'a> {
    dim: usize,
    cells: &'a [Cell],
    gluing: &'a [Gluing],
}

/// One cell per nondegenerate simplex, glued along the face table.
pub fn realize(a: &SimplicialSet) -> CellComplex {
    let mut cells = Vec::new();
    let mut gluing = Vec::new();
    for (q, gens) in a.generators.iter().enumerate() {
        for (g, gen) in gens.iter().enumerate() {
            cells.push(Cell { name: gen.name.clone(), dim: q, simplex: SimplexRef::nondegenerate(q, g) });
            for (i, f) in gen.faces.iter().enumerate() {
                gluing.push(Gluing {
                    cell: gen.name.clone(),
                    face: i,
                    target: a.name_of(f).to_string(),
                    word: f.word.clone(),
                });
            }
        }
    }
    let factors = a.factors().map(|(l, r)| Box::new((realize(l), realize(r))));
    CellComplex { source: a.clone(), cells, gluing, factors }
}

/// `(s_j σ, u) ~ (σ, u_0, ..., u_j + u_{j+1}, ..., u_q)`.
pub(crate) fn merge(u: &[f64], j: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(u.len() - 1);
    out.extend_from_slice(&u[..j]);
    out.push(u[j] + u[j + 1]);
    out.extend_from_slice(&u[j + 2..]);
    out
}

/// Pushes coordinates through a whole degeneracy word, outermost first.
pub(crate) fn merge_word(u: &[f64], word: &[usize]) -> Vec<f64> {
    word.iter().fold(u.to_vec(), |acc, &j| merge(&acc, j))
}

impl CellComplex {
    pub fn dim(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells.iter().filter(|c| c.dim == dim).count()
    }

    pub fn cell_name(&self, s: &SimplexRef) -> &str {
        self.source.name_of(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ComplexJson { dim: self.dim(), cells: &self.cells, gluing: &self.gluing })
            .expect("serializable")
    }

    /// Canonical representative of the class of `p`.
    pub fn normal_form(&self, p: &RealPoint) -> Result<RealPoint, RealizeError> {
        let s = &p.cell;
        if p.coords.len() != s.degree + 1 {
            return Err(RealizeError::WrongArity { degree: s.degree, got: p.coords.len() });
        }
        if self.source.generators.get(s.generator_degree()).is_none_or(|g| s.generator >= g.len()) {
            return Err(RealizeError::UnknownCell(s.to_string()));
        }
        let sum: f64 = p.coords.iter().sum();
        let scale = p.coords.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        if (sum - 1.0).abs() > SUM_TOL * scale {
            return Err(RealizeError::NotNormalized { sum });
        }
        let mut cell = s.clone();
        let mut u = p.coords.clone();
        loop {
            if cell.is_degenerate() {
                u = merge_word(&u, &cell.word);
                cell = cell.root();
            }
            for v in u.iter_mut() {
                if v.abs() < ZERO_SNAP {
                    *v = 0.0;
                }
            }
            if cell.degree > 0 {
                if let Some(i) = u.iter().position(|&v| v == 0.0) {
                    u.remove(i);
                    cell = self.source.face(&cell, i);
                    continue;
                }
                let last = u.len() - 1;
                u[last] = 1.0 - u[..last].iter().sum::<f64>();
                if u[last].abs() < ZERO_SNAP {
                    u[last] = 0.0;
                    continue;
                }
            } else {
                u = vec![1.0];
            }
            return Ok(RealPoint { cell, coords: u });
        }
    }

    /// Generators that are not iterated faces of any other generator.
    pub fn maximal_cells(&self) -> Vec<SimplexRef> {
        let mut faces: BTreeSet<(usize, usize)> = BTreeSet::new();
        for c in &self.cells {
            for (_, f) in self.iterated_faces(&c.simplex) {
                let root = f.root();
                if root != c.simplex {
                    faces.insert((root.degree, root.generator));
                }
            }
        }
        self.cells.iter().map(|c| c.simplex.clone()).filter(|s| !faces.contains(&(s.degree, s.generator))).collect()
    }

    /// Every face of `s` obtained by deleting a vertex set, with the deleted
    /// positions (ascending). The face may be degenerate.
    pub fn iterated_faces(&self, s: &SimplexRef) -> Vec<(Vec<usize>, SimplexRef)> {
        let q = s.degree;
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << (q + 1)) {
            let removed: Vec<usize> = (0..=q).filter(|i| mask & (1 << i) != 0).collect();
            if removed.len() > q {
                continue;
            }
            let f = removed.iter().rev().fold(s.clone(), |acc, &i| self.source.face(&acc, i));
            out.push((removed, f));
        }
        out
    }

    /// Cells below the top dimension that are faces of at least two maximal cells.
    pub fn seam_set(&self) -> SeamReport {
        let maximal = self.maximal_cells();
        let mut incident: BTreeMap<(usize, usize), BTreeSet<String>> = BTreeMap::new();
        for m in &maximal {
            for (removed, f) in self.iterated_faces(m) {
                let root = f.root();
                if !removed.is_empty() {
                    incident.entry((root.degree, root.generator)).or_default().insert(self.cell_name(m).to_string());
                }
            }
        }
        let top = self.dim();
        let mut seams: Vec<Seam> = incident
            .into_iter()
            .filter(|((d, _), inc)| *d < top && inc.len() >= 2)
            .map(|((d, g), inc)| Seam {
                cell: self.source.name_of(&SimplexRef::nondegenerate(d, g)).to_string(),
                dim: d,
                incident: inc.into_iter().collect(),
            })
            .collect();
        seams.sort_by(|a, b| (a.dim, &a.cell).cmp(&(b.dim, &b.cell)));
        let mut by_dim = BTreeMap::new();
        for s in &seams {
            *by_dim.entry(s.dim).or_insert(0) += 1;
        }
        SeamReport { maximal: maximal.iter().map(|m| self.cell_name(m).to_string()).collect(), seams, by_dim }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seam {
    pub cell: String,
    pub dim: usize,
    /// Maximal cells having this cell as a face.
    pub incident: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeamReport {
    pub maximal: Vec<String>,
    pub seams: Vec<Seam>,
    pub by_dim: BTreeMap<usize, usize>,
}

impl SeamReport {
    pub fn count(&self, dim: usize) -> usize {
        self.by_dim.get(&dim).copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horn_cells_and_seams() {
        let c = realize(&SimplicialSet::horn(3, 0).unwrap());
        assert_eq!(c.count(2), 3);
        let seams = c.seam_set();
        assert_eq!(seams.maximal.len(), 3);
        assert_eq!(seams.count(1), 3);
    }

    #[test]
    fn simplex_has_no_seams() {
        let c = realize(&SimplicialSet::delta(2).unwrap());
        assert!(c.seam_set().seams.is_empty());
        let b = realize(&SimplicialSet::boundary_delta(1).unwrap());
        assert_eq!(b.count(0), 2);
        assert!(b.gluing.is_empty());
    }

    #[test]
    fn square_has_one_seam_edge() {
        let d1 = SimplicialSet::delta(1).unwrap();
        let c = realize(&SimplicialSet::product(&d1, &d1).unwrap());
        assert_eq!(c.count(2), 2);
        assert_eq!(c.seam_set().count(1), 1);
    }

    #[test]
    fn normal_forms() {
        let d2 = SimplicialSet::delta(2).unwrap();
        let c = realize(&d2);
        let top = d2.lookup("[0,1,2]").unwrap();
        let p = RealPoint::new(top.clone(), vec![0.5, 0.75, -0.25]);
        assert_eq!(c.normal_form(&p).unwrap(), p);
        let on_face = RealPoint::new(top.clone(), vec![0.3, 0.0, 0.7]);
        let nf = c.normal_form(&on_face).unwrap();
        assert_eq!(nf.cell, d2.lookup("[0,2]").unwrap());
        assert_eq!(nf.coords, vec![0.3, 0.7]);
        let edge = d2.lookup("[0,1]").unwrap();
        let degen = RealPoint::new(edge.degenerate(0), vec![0.25, 0.25, 0.5]);
        let nf = c.normal_form(&degen).unwrap();
        assert_eq!((nf.cell, nf.coords), (edge, vec![0.5, 0.5]));
        assert!(matches!(
            c.normal_form(&RealPoint::new(top, vec![0.5, 0.5, 0.5])),
            Err(RealizeError::NotNormalized { .. })
        ));
    }

    #[test]
    fn json_lists_cells() {
        let c = realize(&SimplicialSet::horn(2, 1).unwrap());
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(v["cells"].as_array().unwrap().len(), 5);
        assert_eq!(v["gluing"].as_array().unwrap().len(), 4);
    }
}
