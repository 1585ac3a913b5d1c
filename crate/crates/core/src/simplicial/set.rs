//! Truncated simplicial sets stored as nondegenerate generators with face tables.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::simplex::{face_through_word, words, FaceThroughWord, SimplexRef};
use crate::report::VerificationReport;

/// Truncation bound used by the standard constructors.
pub const DEFAULT_DIM_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("degree {requested} exceeds dim_cap {cap}")]
    DimCapExceeded { requested: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed simplicial data: {0}")]
    Malformed(String),
    #[error("source mismatch: {0}")]
    SourceMismatch(String),
    #[error("integer overflow in Smith normal form")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    /// `d_0, ..., d_q`; empty for vertices.
    pub faces: Vec<SimplexRef>,
}

/// How a set was built; lets horn maps and homotopies check their sources.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Shape {
    #[default]
    Custom,
    Delta(usize),
    Boundary(usize),
    Horn(usize, usize),
    Product,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ProductData {
    pub left: SimplicialSet,
    pub right: SimplicialSet,
    /// Per degree, per generator: the pair of factor simplices.
    pub pairs: Vec<Vec<(SimplexRef, SimplexRef)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialSet {
    pub dim_cap: usize,
    pub generators: Vec<Vec<Generator>>,
    pub shape: Shape,
    pub(crate) product: Option<Box<ProductData>>,
    names: HashMap<String, (usize, usize)>,
}

impl SimplicialSet {
    pub fn empty(dim_cap: usize) -> Self {
        Self { dim_cap, generators: vec![Vec::new()], shape: Shape::Custom, product: None, names: HashMap::new() }
    }

    /// Adds a nondegenerate simplex whose degree is `faces.len() - 1` (a vertex
    /// when `faces` is empty).
    pub fn add_generator(&mut self, name: &str, faces: Vec<SimplexRef>) -> Result<SimplexRef, SimplicialError> {
        let q = if faces.is_empty() { 0 } else { faces.len() - 1 };
        if faces.len() == 1 {
            return Err(SimplicialError::Malformed(format!("`{name}` has a single face")));
        }
        if q > self.dim_cap {
            return Err(SimplicialError::DimCapExceeded { requested: q, cap: self.dim_cap });
        }
        if self.names.contains_key(name) {
            return Err(SimplicialError::Malformed(format!("duplicate generator name `{name}`")));
        }
        for (i, f) in faces.iter().enumerate() {
            if f.degree + 1 != q {
                return Err(SimplicialError::Malformed(format!("face {i} of `{name}` has degree {}", f.degree)));
            }
            if !f.is_canonical() {
                return Err(SimplicialError::Malformed(format!("face {i} of `{name}` is not in canonical form")));
            }
            if self.generators.get(f.generator_degree()).is_none_or(|g| f.generator >= g.len()) {
                return Err(SimplicialError::Malformed(format!("face {i} of `{name}` names an unknown generator")));
            }
        }
        while self.generators.len() <= q {
            self.generators.push(Vec::new());
        }
        let idx = self.generators[q].len();
        self.generators[q].push(Generator { name: name.to_string(), faces });
        self.names.insert(name.to_string(), (q, idx));
        Ok(SimplexRef::nondegenerate(q, idx))
    }

    pub fn dim(&self) -> usize {
        self.generators.iter().rposition(|g| !g.is_empty()).unwrap_or(0)
    }

    pub fn count(&self, q: usize) -> usize {
        self.generators.get(q).map_or(0, Vec::len)
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.dim()).map(|q| self.count(q)).collect()
    }

    pub fn total_generators(&self) -> usize {
        self.generators.iter().map(Vec::len).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.nondegenerate_counts()
            .iter()
            .enumerate()
            .map(|(q, &c)| if q % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn generator(&self, s: &SimplexRef) -> &Generator {
        &self.generators[s.generator_degree()][s.generator]
    }

    pub fn name_of(&self, s: &SimplexRef) -> &str {
        &self.generator(s).name
    }

    pub fn lookup(&self, name: &str) -> Option<SimplexRef> {
        self.names.get(name).map(|&(q, i)| SimplexRef::nondegenerate(q, i))
    }

    /// `d_i` of any simplex, in canonical form.
    pub fn face(&self, s: &SimplexRef, i: usize) -> SimplexRef {
        assert!(s.degree >= 1 && i <= s.degree, "face d_{i} of a {}-simplex", s.degree);
        match face_through_word(i, &s.word) {
            FaceThroughWord::Cancelled(word) => SimplexRef { degree: s.degree - 1, generator: s.generator, word },
            FaceThroughWord::OnGenerator { prefix, face } => {
                let base = &self.generator(s).faces[face];
                base.degenerate_by(&prefix)
            }
        }
    }

    /// Iterated faces `d_{i_1} ... d_{i_k}` applied right to left.
    pub fn faces(&self, s: &SimplexRef, seq: &[usize]) -> SimplexRef {
        seq.iter().rev().fold(s.clone(), |acc, &i| self.face(&acc, i))
    }

    /// Vertex `k` of a simplex.
    pub fn vertex(&self, s: &SimplexRef, k: usize) -> SimplexRef {
        let mut cur = s.clone();
        // drop vertices above k, then those below
        for _ in k..s.degree {
            cur = self.face(&cur, cur.degree);
        }
        for _ in 0..k {
            cur = self.face(&cur, 0);
        }
        cur
    }

    /// Every `q`-simplex, nondegenerate or not, ordered by generator degree,
    /// generator index and word.
    pub fn all_simplices(&self, q: usize) -> Result<Vec<SimplexRef>, SimplicialError> {
        if q > self.dim_cap {
            return Err(SimplicialError::DimCapExceeded { requested: q, cap: self.dim_cap });
        }
        let mut out = Vec::new();
        for p in 0..=q.min(self.dim()) {
            for g in 0..self.count(p) {
                for w in words(q, q - p) {
                    out.push(SimplexRef { degree: q, generator: g, word: w });
                }
            }
        }
        Ok(out)
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for `i < j` on every generator, plus
    /// canonical form of every stored face.
    pub fn check_identities(&self) -> VerificationReport {
        let mut report = VerificationReport::new("simplicial_identities", 0.0);
        for (q, gens) in self.generators.iter().enumerate() {
            for (g, gen) in gens.iter().enumerate() {
                let s = SimplexRef::nondegenerate(q, g);
                let here = [q as f64, g as f64];
                let mut malformed = false;
                for (i, f) in gen.faces.iter().enumerate() {
                    let ok = f.degree + 1 == q && f.is_canonical() && f.generator < self.count(f.generator_degree());
                    if !ok {
                        malformed = true;
                        report.fail(format!("face {i} of `{}` is malformed", gen.name), Some(&here));
                    }
                }
                if q < 2 || malformed {
                    continue;
                }
                for j in 1..=q {
                    for i in 0..j {
                        let lhs = self.face(&self.face(&s, j), i);
                        let rhs = self.face(&self.face(&s, i), j - 1);
                        let point = [q as f64, g as f64, i as f64, j as f64];
                        report.observe(if lhs == rhs { 0.0 } else { 1.0 }, &point);
                        if lhs != rhs {
                            report.note(format!("`{}`: d{i} d{j} = {lhs} but d{} d{i} = {rhs}", gen.name, j - 1));
                        }
                    }
                }
            }
        }
        report.finish()
    }

    /// Connected components of the vertex set, each sorted, ordered by least vertex.
    pub fn pi0(&self) -> Vec<Vec<usize>> {
        let n = self.count(0);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for e in self.generators.get(1).into_iter().flatten() {
            let (a, b) = (e.faces[1].generator, e.faces[0].generator);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            classes.entry(r).or_default().push(v);
        }
        classes.into_values().collect()
    }

    /// Copies `other` into `self` with every name prefixed; returns the generator
    /// index offsets per degree.
    fn absorb(&mut self, other: &SimplicialSet, prefix: &str) -> Result<Vec<usize>, SimplicialError> {
        let offsets: Vec<usize> = (0..other.generators.len()).map(|q| self.count(q)).collect();
        for (q, gens) in other.generators.iter().enumerate() {
            for gen in gens {
                let faces = gen
                    .faces
                    .iter()
                    .map(|f| SimplexRef { generator: f.generator + offsets[f.generator_degree()], ..f.clone() })
                    .collect();
                let r = self.add_generator(&format!("{prefix}{}", gen.name), faces)?;
                debug_assert_eq!(r.degree, q);
            }
        }
        Ok(offsets)
    }

    pub fn disjoint_union(a: &SimplicialSet, b: &SimplicialSet) -> Result<SimplicialSet, SimplicialError> {
        let mut out = SimplicialSet::empty(a.dim_cap.max(b.dim_cap));
        out.absorb(a, "L.")?;
        out.absorb(b, "R.")?;
        Ok(out)
    }

    /// Sub-complex of `Δⁿ` spanned by the given vertex sets (closed under taking faces).
    fn from_vertex_sets(
        n: usize,
        cap: usize,
        keep: impl Fn(&[usize]) -> bool,
        shape: Shape,
    ) -> Result<Self, SimplicialError> {
        if n > cap {
            return Err(SimplicialError::DimCapExceeded { requested: n, cap });
        }
        let mut out = SimplicialSet::empty(cap);
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        for q in 0..=n {
            for set in subsets(n + 1, q + 1) {
                if !keep(&set) {
                    continue;
                }
                let faces: Vec<SimplexRef> = if q == 0 {
                    Vec::new()
                } else {
                    (0..=q)
                        .map(|i| {
                            let mut f = set.clone();
                            f.remove(i);
                            let g = *index.get(&f).ok_or_else(|| {
                                SimplicialError::Malformed(format!("vertex set {set:?} kept without its face {f:?}"))
                            })?;
                            Ok(SimplexRef::nondegenerate(q - 1, g))
                        })
                        .collect::<Result<_, SimplicialError>>()?
                };
                let r = out.add_generator(&vertex_name(&set), faces)?;
                index.insert(set, r.generator);
            }
        }
        out.shape = shape;
        Ok(out)
    }

    /// The standard `n`-simplex.
    pub fn delta(n: usize) -> Result<Self, SimplicialError> {
        Self::delta_capped(n, DEFAULT_DIM_CAP)
    }

    pub fn delta_capped(n: usize, cap: usize) -> Result<Self, SimplicialError> {
        Self::from_vertex_sets(n, cap, |_| true, Shape::Delta(n))
    }

    /// `∂Δⁿ`: every face of `Δⁿ` except the top simplex.
    pub fn boundary_delta(n: usize) -> Result<Self, SimplicialError> {
        if n == 0 {
            return Err(SimplicialError::InvalidArgument("boundary_delta needs n >= 1".into()));
        }
        Self::from_vertex_sets(n, DEFAULT_DIM_CAP, |s| s.len() <= n, Shape::Boundary(n))
    }

    /// `Λⁿ_k`: `∂Δⁿ` without the face opposite vertex `k`.
    pub fn horn(n: usize, k: usize) -> Result<Self, SimplicialError> {
        if n == 0 || k > n {
            return Err(SimplicialError::InvalidArgument(format!("horn({n}, {k}) needs n >= 1 and k <= n")));
        }
        // kept iff some vertex other than k is missing
        Self::from_vertex_sets(n, DEFAULT_DIM_CAP, |s| (0..=n).any(|v| v != k && !s.contains(&v)), Shape::Horn(n, k))
    }
}

/// Name of the face of `Δⁿ` spanned by a vertex set.
pub fn vertex_name(set: &[usize]) -> String {
    let parts: Vec<String> = set.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Increasing `k`-subsets of `{0, ..., m-1}` in lexicographic order.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for v in start..m {
            acc.push(v);
            rec(v + 1, m, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}
