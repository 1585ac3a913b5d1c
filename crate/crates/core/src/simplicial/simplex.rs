//! Simplices in Eilenberg–Zilber form and the degeneracy word algebra.
//!
//! A degeneracy word `[i_1, ..., i_k]` with `i_1 > ... > i_k` stands for
//! `s_{i_1} ∘ ... ∘ s_{i_k}`. Read as a set, it lists the positions `i` at which
//! the underlying surjection `[q] -> [q-k]` identifies `i` and `i + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A `degree`-simplex `s_word(generator)`, where `generator` indexes the
/// nondegenerate simplices of degree `degree - word.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplexRef {
    pub degree: usize,
    pub generator: usize,
    pub word: Vec<usize>,
}

impl SimplexRef {
    pub fn nondegenerate(degree: usize, generator: usize) -> Self {
        Self { degree, generator, word: Vec::new() }
    }

    pub fn generator_degree(&self) -> usize {
        self.degree - self.word.len()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.word.is_empty()
    }

    /// The underlying nondegenerate simplex.
    pub fn root(&self) -> SimplexRef {
        SimplexRef::nondegenerate(self.generator_degree(), self.generator)
    }

    /// Tie-breaking key: generator degree, generator index, then word.
    pub fn order_key(&self) -> (usize, usize, usize, Vec<usize>) {
        (self.degree, self.generator_degree(), self.generator, self.word.clone())
    }

    /// `s_j` applied to this simplex, normalized.
    pub fn degenerate(&self, j: usize) -> SimplexRef {
        debug_assert!(j <= self.degree);
        SimplexRef { degree: self.degree + 1, generator: self.generator, word: degen_word(j, &self.word) }
    }

    /// Applies the degeneracies of `word` (rightmost first).
    pub fn degenerate_by(&self, word: &[usize]) -> SimplexRef {
        word.iter().rev().fold(self.clone(), |s, &j| s.degenerate(j))
    }

    /// Checks that the word is strictly decreasing and each index fits its degree.
    pub fn is_canonical(&self) -> bool {
        if self.word.len() > self.degree {
            return false;
        }
        let p = self.generator_degree();
        let k = self.word.len();
        self.word.windows(2).all(|w| w[0] > w[1])
            && self.word.iter().enumerate().all(|(pos, &i)| i <= p + (k - 1 - pos))
    }
}

impl fmt::Display for SimplexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.word {
            write!(f, "s{i}")?;
        }
        write!(f, "g{}_{}", self.generator_degree(), self.generator)
    }
}

/// Normal form of `s_j ∘ s_word`, using `s_j s_i = s_{i+1} s_j` for `j <= i`.
pub fn degen_word(j: usize, word: &[usize]) -> Vec<usize> {
    match word.split_first() {
        None => vec![j],
        Some((&head, rest)) => {
            if j > head {
                let mut out = Vec::with_capacity(word.len() + 1);
                out.push(j);
                out.extend_from_slice(word);
                out
            } else {
                let mut out = vec![head + 1];
                out.extend(degen_word(j, rest));
                out
            }
        }
    }
}

/// Result of pushing `d_i` through a degeneracy word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaceThroughWord {
    /// `d_i s_word = s_word'` exactly (some `d_i s_j = id` fired).
    Cancelled(Vec<usize>),
    /// `d_i s_word = s_prefix d_{i'}`: the face lands on the generator.
    OnGenerator { prefix: Vec<usize>, face: usize },
}

/// Rewrites `d_i ∘ s_word` using the mixed simplicial identities.
pub fn face_through_word(i: usize, word: &[usize]) -> FaceThroughWord {
    let mut prefix = Vec::with_capacity(word.len());
    let mut i = i;
    for (pos, &j) in word.iter().enumerate() {
        if i < j {
            prefix.push(j - 1);
        } else if i == j || i == j + 1 {
            let mut out = prefix;
            out.extend_from_slice(&word[pos + 1..]);
            return FaceThroughWord::Cancelled(out);
        } else {
            prefix.push(j);
            i -= 1;
        }
    }
    FaceThroughWord::OnGenerator { prefix, face: i }
}

/// Maps a vertex of the degree-`q` domain to the generator's vertex under the
/// surjection encoded by `word`.
pub fn collapse_vertex(word: &[usize], v: usize) -> usize {
    v - word.iter().filter(|&&i| i < v).count()
}

/// Decreasing words of length `k` over `{0, ..., q-1}`, in lexicographic order.
pub fn words(q: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(max_excl: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(acc.clone());
            return;
        }
        for i in (k - 1..max_excl).rev() {
            acc.push(i);
            rec(i, k - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if k <= q {
        rec(q, k, &mut Vec::new(), &mut out);
    }
    out.reverse();
    out
}

/// Splits a pair of degeneracy words `(I, J)` into the common part `K = I ∩ J`
/// and the reduced words of the jointly nondegenerate pair.
pub fn split_common(i_word: &[usize], j_word: &[usize]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let common: Vec<usize> = i_word.iter().copied().filter(|x| j_word.contains(x)).collect();
    let reduce = |w: &[usize]| -> Vec<usize> {
        w.iter()
            .copied()
            .filter(|x| !common.contains(x))
            .map(|x| x - common.iter().filter(|&&k| k < x).count())
            .collect()
    };
    (common.clone(), reduce(i_word), reduce(j_word))
}
