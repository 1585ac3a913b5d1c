//! Cartesian products via Eilenberg–Zilber shuffle enumeration.

use std::collections::HashMap;

use super::map::SimplicialMap;
use super::set::{ProductData, Shape, SimplicialError, SimplicialSet};
use super::simplex::{split_common, words, SimplexRef};

type PairKey = (usize, usize, Vec<usize>, usize, usize, Vec<usize>);

fn key(a: &SimplexRef, b: &SimplexRef) -> PairKey {
    (a.generator_degree(), a.generator, a.word.clone(), b.generator_degree(), b.generator, b.word.clone())
}

fn describe(set: &SimplicialSet, s: &SimplexRef) -> String {
    let mut out = String::new();
    for i in &s.word {
        out.push_str(&format!("s{i}"));
    }
    if !s.word.is_empty() {
        out.push(':');
    }
    out.push_str(set.name_of(s));
    out
}

impl SimplicialSet {
    /// `A × B`. Nondegenerate `q`-simplices are pairs `(s_I x, s_J y)` with
    /// `I ∩ J = ∅`.
    pub fn product(a: &SimplicialSet, b: &SimplicialSet) -> Result<SimplicialSet, SimplicialError> {
        let cap = a.dim_cap.max(b.dim_cap);
        let top = a.dim() + b.dim();
        if top > cap {
            return Err(SimplicialError::DimCapExceeded { requested: top, cap });
        }
        let mut out = SimplicialSet::empty(cap);
        let mut pairs: Vec<Vec<(SimplexRef, SimplexRef)>> = Vec::new();
        let mut index: HashMap<PairKey, usize> = HashMap::new();
        for q in 0..=top {
            pairs.push(Vec::new());
            for p in 0..=q.min(a.dim()) {
                for r in (q - p)..=q.min(b.dim()) {
                    for x in 0..a.count(p) {
                        for y in 0..b.count(r) {
                            for wi in words(q, q - p) {
                                for wj in words(q, q - r) {
                                    if wi.iter().any(|i| wj.contains(i)) {
                                        continue;
                                    }
                                    let sa = SimplexRef { degree: q, generator: x, word: wi.clone() };
                                    let sb = SimplexRef { degree: q, generator: y, word: wj };
                                    let faces = if q == 0 {
                                        Vec::new()
                                    } else {
                                        (0..=q)
                                            .map(|i| canonical_pair(&index, &a.face(&sa, i), &b.face(&sb, i)))
                                            .collect::<Result<_, _>>()?
                                    };
                                    let name = format!("({}, {})", describe(a, &sa), describe(b, &sb));
                                    let r = out.add_generator(&name, faces)?;
                                    index.insert(key(&sa, &sb), r.generator);
                                    pairs[q].push((sa, sb));
                                }
                            }
                        }
                    }
                }
            }
        }
        out.shape = Shape::Product;
        out.product = Some(Box::new(ProductData { left: a.clone(), right: b.clone(), pairs }));
        Ok(out)
    }

    /// Factor simplices of a product generator.
    pub fn product_pair(&self, s: &SimplexRef) -> Option<(SimplexRef, SimplexRef)> {
        let data = self.product.as_ref()?;
        let (a, b) = data.pairs.get(s.generator_degree())?.get(s.generator)?.clone();
        Some((a.degenerate_by(&s.word), b.degenerate_by(&s.word)))
    }

    /// The product generator (possibly degenerated) equal to the pair `(a, b)`.
    pub fn product_simplex(&self, a: &SimplexRef, b: &SimplexRef) -> Option<SimplexRef> {
        let data = self.product.as_ref()?;
        if a.degree != b.degree {
            return None;
        }
        let (common, wi, wj) = split_common(&a.word, &b.word);
        let q0 = a.degree - common.len();
        let target_a = SimplexRef { degree: q0, generator: a.generator, word: wi };
        let target_b = SimplexRef { degree: q0, generator: b.generator, word: wj };
        let g = data.pairs.get(q0)?.iter().position(|(x, y)| *x == target_a && *y == target_b)?;
        Some(SimplexRef { degree: a.degree, generator: g, word: common })
    }

    pub fn factors(&self) -> Option<(&SimplicialSet, &SimplicialSet)> {
        self.product.as_ref().map(|d| (&d.left, &d.right))
    }

    /// The two projections of a product.
    pub fn projections(&self) -> Option<(SimplicialMap, SimplicialMap)> {
        let data = self.product.as_ref()?;
        let left = data.pairs.iter().map(|row| row.iter().map(|(a, _)| a.clone()).collect()).collect();
        let right = data.pairs.iter().map(|row| row.iter().map(|(_, b)| b.clone()).collect()).collect();
        Some((
            SimplicialMap::new(self.clone(), data.left.clone(), left).ok()?,
            SimplicialMap::new(self.clone(), data.right.clone(), right).ok()?,
        ))
    }
}

fn canonical_pair(
    index: &HashMap<PairKey, usize>,
    a: &SimplexRef,
    b: &SimplexRef,
) -> Result<SimplexRef, SimplicialError> {
    let (common, wi, wj) = split_common(&a.word, &b.word);
    let q0 = a.degree - common.len();
    let ra = SimplexRef { degree: q0, generator: a.generator, word: wi };
    let rb = SimplexRef { degree: q0, generator: b.generator, word: wj };
    let g = index
        .get(&key(&ra, &rb))
        .ok_or_else(|| SimplicialError::Malformed(format!("missing product face ({ra}, {rb})")))?;
    Ok(SimplexRef { degree: a.degree, generator: *g, word: common })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_has_expected_cells() {
        let d1 = SimplicialSet::delta(1).unwrap();
        let sq = SimplicialSet::product(&d1, &d1).unwrap();
        assert_eq!(sq.nondegenerate_counts(), vec![4, 5, 2]);
        assert!(sq.check_identities().pass);
    }

    #[test]
    fn prism_top_cells() {
        let p = SimplicialSet::product(&SimplicialSet::delta(1).unwrap(), &SimplicialSet::delta(2).unwrap()).unwrap();
        assert_eq!(p.count(3), 3);
        assert!(p.check_identities().pass);
        assert_eq!(p.euler_characteristic(), 1);
    }

    #[test]
    fn unit_law() {
        let pt = SimplicialSet::delta(0).unwrap();
        let h = SimplicialSet::horn(3, 1).unwrap();
        let p = SimplicialSet::product(&pt, &h).unwrap();
        assert_eq!(p.nondegenerate_counts(), h.nondegenerate_counts());
        assert!(p.check_identities().pass);
    }

    #[test]
    fn pair_round_trip() {
        let d1 = SimplicialSet::delta(1).unwrap();
        let sq = SimplicialSet::product(&d1, &d1).unwrap();
        for q in 0..=3 {
            for s in sq.all_simplices(q).unwrap() {
                let (a, b) = sq.product_pair(&s).unwrap();
                assert_eq!(sq.product_simplex(&a, &b).unwrap(), s);
            }
        }
    }

    #[test]
    fn dim_cap_overflow() {
        let d = SimplicialSet::delta_capped(2, 3).unwrap();
        assert!(matches!(SimplicialSet::product(&d, &d), Err(SimplicialError::DimCapExceeded { .. })));
    }
}
