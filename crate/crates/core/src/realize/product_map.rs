//! The natural map `|A × B| → |A| × |B|` and probes of its injectivity and surjectivity.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::complex::{merge_word, realize, CellComplex, RealPoint, RealizeError};
use crate::report::{VerificationReport, EXACT_TOL};
use crate::sampling::{substream, uniform};
use crate::simplicial::{SimplexRef, SimplicialSet};

impl CellComplex {
    /// Realizations of the two factors when the source is a product.
    pub fn factor_complexes(&self) -> Option<(&CellComplex, &CellComplex)> {
        self.factors.as_deref().map(|(l, r)| (l, r))
    }
}

/// Projects a point of `|A × B|` to its two factor classes.
pub fn natural_product_map(prod: &CellComplex, p: &RealPoint) -> Result<(RealPoint, RealPoint), RealizeError> {
    let (left, right) = prod.factor_complexes().ok_or(RealizeError::NotAProduct)?;
    let (a, b) = prod.source.product_pair(&p.cell).ok_or(RealizeError::NotAProduct)?;
    let pa = left.normal_form(&RealPoint::new(a, p.coords.clone()))?;
    let pb = right.normal_form(&RealPoint::new(b, p.coords.clone()))?;
    Ok((pa, pb))
}

/// Matrix of the coordinate map `u ↦ merge_word(u, word)` on `𝔸^q`.
fn merge_matrix(q: usize, word: &[usize]) -> DMatrix<f64> {
    let rows = q + 1 - word.len();
    let mut m = DMatrix::zeros(rows, q + 1);
    for k in 0..=q {
        let mut e = vec![0.0; q + 1];
        e[k] = 1.0;
        for (r, v) in merge_word(&e, word).into_iter().enumerate() {
            m[(r, k)] = v;
        }
    }
    m
}

/// Tries to write `(ta, tb)` as the image of a point in the product cell `s`.
/// `ta`, `tb` are coordinates in the charts of the nondegenerate roots of the factors of `s`.
pub fn product_preimage(prod: &CellComplex, s: &SimplexRef, ta: &[f64], tb: &[f64]) -> Option<RealPoint> {
    let (a, b) = prod.source.product_pair(s)?;
    let q = s.degree;
    let ma = merge_matrix(q, &a.word);
    let mb = merge_matrix(q, &b.word);
    if ma.nrows() != ta.len() || mb.nrows() != tb.len() {
        return None;
    }
    let m = DMatrix::from_fn(ma.nrows() + mb.nrows(), q + 1, |r, c| {
        if r < ma.nrows() {
            ma[(r, c)]
        } else {
            mb[(r - ma.nrows(), c)]
        }
    });
    let rhs = DVector::from_iterator(ta.len() + tb.len(), ta.iter().chain(tb).copied());
    let u = m.clone().svd(true, true).solve(&rhs, 1e-12).ok()?;
    if (&m * &u - &rhs).amax() > EXACT_TOL {
        return None;
    }
    Some(RealPoint::new(s.clone(), u.iter().copied().collect()))
}

/// Two distinct classes with the same image, found in `Δ¹ × Δ¹`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonInjectivityWitness {
    pub first: RealPoint,
    pub second: RealPoint,
    pub first_name: String,
    pub second_name: String,
    pub image: (RealPoint, RealPoint),
    pub same_image: bool,
    pub distinct_classes: bool,
}

pub fn non_injectivity_witness() -> NonInjectivityWitness {
    let d1 = SimplicialSet::delta(1).expect("Δ¹");
    let sq = SimplicialSet::product(&d1, &d1).expect("Δ¹×Δ¹");
    let prod = realize(&sq);
    let iota = d1.lookup("[0,1]").expect("edge");
    let s1 = sq.product_simplex(&iota.degenerate(1), &iota.degenerate(0)).expect("σ₁");
    let s2 = sq.product_simplex(&iota.degenerate(0), &iota.degenerate(1)).expect("σ₂");
    let p1 = prod.normal_form(&RealPoint::new(s1.clone(), vec![0.0, 1.0, 0.0])).expect("normalized");
    let p2 = prod.normal_form(&RealPoint::new(s2.clone(), vec![1.0, -1.0, 1.0])).expect("normalized");
    let i1 = natural_product_map(&prod, &p1).expect("product");
    let i2 = natural_product_map(&prod, &p2).expect("product");
    NonInjectivityWitness {
        first_name: sq.name_of(&s1).to_string(),
        second_name: sq.name_of(&s2).to_string(),
        same_image: i1.0.approx_eq(&i2.0, EXACT_TOL) && i1.1.approx_eq(&i2.1, EXACT_TOL),
        distinct_classes: !p1.approx_eq(&p2, EXACT_TOL),
        first: p1,
        second: p2,
        image: i1,
    }
}

fn chart_grid(dim: usize, per_axis: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * per_axis);
        for prefix in &out {
            for k in 0..per_axis {
                let mut p = prefix.clone();
                p.push(lo + (hi - lo) * k as f64 / (per_axis - 1) as f64);
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|free| {
            let mut u = vec![1.0 - free.iter().sum::<f64>()];
            u.extend(free);
            u
        })
        .collect()
}

/// For a grid of about `points` targets in each pair of top factor charts, finds
/// a preimage cell and checks that the natural map sends it back to the target.
pub fn surjectivity_probe(prod: &CellComplex, points: usize) -> VerificationReport {
    let mut rep = VerificationReport::new("realize.natural_map_surjective", EXACT_TOL);
    let Some((left, right)) = prod.factor_complexes() else {
        rep.fail("not a product", None);
        return rep.finish();
    };
    let top: Vec<SimplexRef> = prod.maximal_cells();
    for x in left.maximal_cells() {
        for y in right.maximal_cells() {
            let d = x.degree + y.degree;
            let per_axis = ((points as f64).powf(1.0 / d.max(1) as f64).ceil() as usize).max(2);
            let ga = chart_grid(x.degree, per_axis, -2.0, 3.0);
            let gb = chart_grid(y.degree, per_axis, -2.0, 3.0);
            for ta in &ga {
                for tb in &gb {
                    let target_a = left.normal_form(&RealPoint::new(x.clone(), ta.clone())).expect("grid point");
                    let target_b = right.normal_form(&RealPoint::new(y.clone(), tb.clone())).expect("grid point");
                    let point: Vec<f64> = ta.iter().chain(tb).copied().collect();
                    let hit = top
                        .iter()
                        .filter(|s| prod.source.product_pair(s).is_some_and(|(a, b)| a.root() == x && b.root() == y));
                    let mut best = f64::INFINITY;
                    for s in hit {
                        let Some(pre) = product_preimage(prod, s, ta, tb) else { continue };
                        let Ok((ia, ib)) = natural_product_map(prod, &pre) else { continue };
                        if ia.cell == target_a.cell && ib.cell == target_b.cell {
                            let r = crate::sampling::max_abs_diff(&ia.coords, &target_a.coords)
                                .max(crate::sampling::max_abs_diff(&ib.coords, &target_b.coords));
                            best = best.min(r);
                        }
                    }
                    rep.observe(best, &point);
                }
            }
        }
    }
    rep.finish()
}

/// For `Δ⁰ × B`, the natural map is a bijection onto `|B|`: it has the inverse
/// `p ↦ (pt, p)` on sampled points.
pub fn unit_law_check(b: &SimplicialSet, samples: usize, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new("realize.unit_law", EXACT_TOL);
    let pt = SimplicialSet::delta(0).expect("Δ⁰");
    let Ok(sq) = SimplicialSet::product(&pt, b) else {
        rep.fail("product exceeds dimension cap", None);
        return rep.finish();
    };
    let prod = realize(&sq);
    let vertex = SimplexRef::nondegenerate(0, 0);
    let mut rng = substream(seed, "unit_law");
    let cells: Vec<SimplexRef> = prod.cells.iter().map(|c| c.simplex.clone()).collect();
    for k in 0..samples {
        let s = &cells[k % cells.len()];
        let mut u: Vec<f64> = (0..s.degree).map(|_| uniform(&mut rng, -1.5, 1.5)).collect();
        u.insert(0, 1.0 - u.iter().sum::<f64>());
        let p = prod.normal_form(&RealPoint::new(s.clone(), u.clone())).expect("normalized");
        let (_, image) = natural_product_map(&prod, &p).expect("product");
        let word: Vec<usize> = (0..image.cell.degree).rev().collect();
        let back = sq.product_simplex(&vertex.degenerate_by(&word), &image.cell).expect("pair");
        let back = prod.normal_form(&RealPoint::new(back, image.coords.clone())).expect("normalized");
        if back.cell != p.cell {
            rep.fail(format!("cell {} returned as {}", sq.name_of(&p.cell), sq.name_of(&back.cell)), Some(&u));
        } else {
            rep.observe(crate::sampling::max_abs_diff(&back.coords, &p.coords), &u);
        }
    }
    rep.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_is_genuine() {
        let w = non_injectivity_witness();
        assert!(w.same_image && w.distinct_classes);
        assert_eq!(w.image.0.cell.degree, 0);
        assert_eq!(w.first.cell.degree, 0);
        assert_eq!(w.second.cell.degree, 2);
    }

    #[test]
    fn square_is_covered() {
        let d1 = SimplicialSet::delta(1).unwrap();
        let prod = realize(&SimplicialSet::product(&d1, &d1).unwrap());
        let rep = surjectivity_probe(&prod, 1000);
        assert!(rep.pass, "{rep}");
        assert!(rep.samples_used >= 1000);
    }

    #[test]
    fn unit_law_on_triangle() {
        let rep = unit_law_check(&SimplicialSet::delta(2).unwrap(), 300, 3);
        assert!(rep.pass, "{rep}");
    }

    #[test]
    fn merge_matrix_sums_adjacent() {
        let m = merge_matrix(2, &[1]);
        assert_eq!(m.nrows(), 2);
        assert_eq!(m.row(1).iter().copied().collect::<Vec<_>>(), vec![0.0, 1.0, 1.0]);
    }
}
