//! Homology of the normalized chain complex via integer Smith normal form.

use serde::{Deserialize, Serialize};

use super::set::{SimplicialError, SimplicialSet};
use super::simplex::SimplexRef;

/// `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Boundary matrix `∂_q : C_q -> C_{q-1}` on nondegenerate generators
/// (rows: degree `q-1`, columns: degree `q`). Degenerate faces vanish.
#[allow(clippy::needless_range_loop)]
pub fn boundary_matrix(a: &SimplicialSet, q: usize) -> Vec<Vec<i64>> {
    let rows = if q == 0 { 0 } else { a.count(q - 1) };
    let cols = a.count(q);
    let mut m = vec![vec![0i64; cols]; rows];
    if q == 0 {
        return m;
    }
    for c in 0..cols {
        let s = SimplexRef::nondegenerate(q, c);
        for i in 0..=q {
            let f = a.face(&s, i);
            if !f.is_degenerate() {
                m[f.generator][c] += if i % 2 == 0 { 1 } else { -1 };
            }
        }
    }
    m
}

/// Nonzero diagonal entries (positive) of the Smith normal form.
#[allow(clippy::needless_range_loop)]
pub fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Result<Vec<i64>, SimplicialError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero pivot in the remaining block
        let pivot = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| m[r][c] != 0)
            .min_by_key(|&(r, c)| m[r][c].unsigned_abs());
        let Some((pr, pc)) = pivot else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let p = m[t][t];
            let mut dirty = false;
            for r in t + 1..rows {
                let q = m[r][t] / p;
                if q != 0 {
                    for c in t..cols {
                        let v = m[t][c].checked_mul(q).ok_or(SimplicialError::Overflow)?;
                        m[r][c] = m[r][c].checked_sub(v).ok_or(SimplicialError::Overflow)?;
                    }
                }
                dirty |= m[r][t] != 0;
            }
            for c in t + 1..cols {
                let q = m[t][c] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        let v = row[t].checked_mul(q).ok_or(SimplicialError::Overflow)?;
                        row[c] = row[c].checked_sub(v).ok_or(SimplicialError::Overflow)?;
                    }
                }
                dirty |= m[t][c] != 0;
            }
            if !dirty {
                // divisibility of the rest of the block
                let bad =
                    (t + 1..rows).flat_map(|r| (t + 1..cols).map(move |c| (r, c))).find(|&(r, c)| m[r][c] % p != 0);
                match bad {
                    None => break,
                    Some((r, _)) => {
                        for c in t..cols {
                            m[t][c] = m[t][c].checked_add(m[r][c]).ok_or(SimplicialError::Overflow)?;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t into the pivot
            let (mut br, mut bc) = (t, t);
            for r in t..rows {
                if m[r][t] != 0 && m[r][t].unsigned_abs() < m[br][bc].unsigned_abs() {
                    (br, bc) = (r, t);
                }
            }
            for c in t..cols {
                if m[t][c] != 0 && m[t][c].unsigned_abs() < m[br][bc].unsigned_abs() {
                    (br, bc) = (t, c);
                }
            }
            m.swap(t, br);
            for row in m.iter_mut() {
                row.swap(t, bc);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    Ok(diag)
}

/// `H_q(A)` of the normalized chain complex.
pub fn homology(a: &SimplicialSet, q: usize) -> Result<AbelianGroup, SimplicialError> {
    if q > a.dim_cap {
        return Err(SimplicialError::DimCapExceeded { requested: q, cap: a.dim_cap });
    }
    let rank_out = smith_diagonal(boundary_matrix(a, q))?.len();
    let incoming = smith_diagonal(boundary_matrix(a, q + 1))?;
    let rank = a.count(q) - rank_out - incoming.len();
    let torsion = incoming.into_iter().filter(|&d| d > 1).map(|d| d as u64).collect();
    Ok(AbelianGroup { rank, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_known_matrices() {
        assert_eq!(smith_diagonal(vec![vec![2, 4], vec![6, 8]]).unwrap(), vec![2, 4]);
        assert_eq!(smith_diagonal(vec![vec![0, 0], vec![0, 0]]).unwrap(), Vec::<i64>::new());
        assert_eq!(smith_diagonal(vec![vec![2, 0], vec![0, 3]]).unwrap(), vec![1, 6]);
    }

    #[test]
    fn snf_overflow_detected() {
        let big = i64::MAX / 2;
        let m = vec![vec![2, big], vec![big, 3]];
        assert!(matches!(smith_diagonal(m), Err(SimplicialError::Overflow)));
    }

    #[test]
    fn spheres_and_simplices() {
        for n in 1..=4 {
            let d = SimplicialSet::delta(n).unwrap();
            assert_eq!(homology(&d, 0).unwrap(), AbelianGroup { rank: 1, torsion: vec![] });
            for q in 1..=n {
                assert!(homology(&d, q).unwrap().is_trivial());
            }
        }
        for n in 2..=4 {
            let b = SimplicialSet::boundary_delta(n).unwrap();
            assert_eq!(homology(&b, n - 1).unwrap(), AbelianGroup { rank: 1, torsion: vec![] });
        }
    }

    #[test]
    fn torus_like_product() {
        let s1 = SimplicialSet::boundary_delta(2).unwrap();
        let t = SimplicialSet::product(&s1, &s1).unwrap();
        assert_eq!(homology(&t, 1).unwrap().rank, 2);
        assert_eq!(homology(&t, 2).unwrap().rank, 1);
    }
}
