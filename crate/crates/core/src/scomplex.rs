//! Finite simplicial complexes and their reduced homology over a field.
//!
//! Homology is augmented throughout: the empty simplex sits in degree -1, so
//! the empty complex has reduced Betti number 1 in degree -1 and every
//! nonempty complex has 0 there.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactfield::{FieldSpec, Matrix};
use crate::graph::{Graph, Limits, VertexSet};

/// Reduced Betti numbers indexed by degree, starting at -1.
pub type BettiVector = BTreeMap<isize, usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    /// `simplices[d]` holds the d-simplices, each strictly increasing, sorted lexicographically.
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// The complex with no simplices (not even vertices).
    pub fn empty(labels: Vec<String>) -> Self {
        SimplicialComplex {
            labels,
            simplices: Vec::new(),
        }
    }

    /// Builds a complex from a face-closed list of nonempty simplices.
    pub fn new(
        labels: Vec<String>,
        simplices: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
        for mut s in simplices {
            if s.is_empty() {
                continue;
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) || s.iter().any(|&v| v >= labels.len()) {
                return Err(Error::InvalidArgument(format!("bad simplex {s:?}")));
            }
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        for level in &mut by_dim {
            level.sort();
            level.dedup();
        }
        while by_dim.last().is_some_and(Vec::is_empty) {
            by_dim.pop();
        }
        let complex = SimplicialComplex {
            labels,
            simplices: by_dim,
        };
        for d in 1..complex.simplices.len() {
            for s in &complex.simplices[d] {
                for r in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(r);
                    if !complex.contains(&face) {
                        return Err(Error::InvalidArgument(format!(
                            "not closed under faces: {s:?} lacks {face:?}"
                        )));
                    }
                }
            }
        }
        Ok(complex)
    }

    /// The smallest complex containing the given simplices.
    pub fn from_facets(labels: Vec<String>, facets: &[Vec<usize>]) -> Result<Self> {
        let mut all = Vec::new();
        for f in facets {
            if f.len() > 20 {
                return Err(Error::Resource(format!(
                    "facet of size {} too large",
                    f.len()
                )));
            }
            for mask in 1u32..(1 << f.len()) {
                all.push(
                    f.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect(),
                );
            }
        }
        SimplicialComplex::new(labels, all)
    }

    /// Flag complex of the whole graph, simplices up to dimension `dim_cap`.
    pub fn flag_complex(g: &Graph, dim_cap: usize, limits: &Limits) -> Result<Self> {
        Self::flag_complex_on(g, g.vertices(), dim_cap, limits)
    }

    /// Flag complex of the induced subgraph on `subset`; vertex labels are the graph's names.
    pub fn flag_complex_on(
        g: &Graph,
        subset: VertexSet,
        dim_cap: usize,
        limits: &Limits,
    ) -> Result<Self> {
        let cliques = g.cliques_within(subset, dim_cap.saturating_add(1), limits)?;
        let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
        for c in cliques.into_iter().filter(|c| !c.is_empty()) {
            let d = c.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(c.members().to_vec());
        }
        // lexicographic enumeration order survives bucketing by size
        Ok(SimplicialComplex {
            labels: g.names().to_vec(),
            simplices: by_dim,
        })
    }

    /// Order complex of a finite strict partial order: d-simplices are chains of d+1 elements.
    pub fn order_complex(
        labels: Vec<String>,
        less_than: impl Fn(usize, usize) -> bool,
        limits: &Limits,
    ) -> Result<Self> {
        let n = labels.len();
        let lt: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| less_than(a, b)).collect())
            .collect();
        for a in 0..n {
            if lt[a][a] {
                return Err(Error::InvalidArgument(format!(
                    "relation is reflexive at {}",
                    labels[a]
                )));
            }
            for b in 0..n {
                if lt[a][b] && lt[b][a] {
                    return Err(Error::InvalidArgument(format!(
                        "relation is not antisymmetric at {}, {}",
                        labels[a], labels[b]
                    )));
                }
                if lt[a][b] {
                    for c in 0..n {
                        if lt[b][c] && !lt[a][c] {
                            return Err(Error::InvalidArgument(format!(
                                "relation is not transitive at {}, {}, {}",
                                labels[a], labels[b], labels[c]
                            )));
                        }
                    }
                }
            }
        }
        let comparable = |a: usize, b: usize| lt[a][b] || lt[b][a];
        let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut total = 0usize;
        let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), (0..n).collect())];
        // depth-first in reverse so output order is lexicographic
        while let Some((chain, candidates)) = stack.pop() {
            if !chain.is_empty() {
                total += 1;
                if total > limits.max_cliques {
                    return Err(Error::Resource(format!(
                        "more than {} chains",
                        limits.max_cliques
                    )));
                }
                let d = chain.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize(d + 1, Vec::new());
                }
                by_dim[d].push(chain.clone());
            }
            for (i, &v) in candidates.iter().enumerate().rev() {
                let next: Vec<usize> = candidates[i + 1..]
                    .iter()
                    .copied()
                    .filter(|&u| comparable(u, v))
                    .collect();
                let mut longer = chain.clone();
                longer.push(v);
                stack.push((longer, next));
            }
        }
        for level in &mut by_dim {
            level.sort();
        }
        Ok(SimplicialComplex {
            labels,
            simplices: by_dim,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Dimension of the complex; -1 when it has no simplices.
    pub fn dimension(&self) -> isize {
        self.simplices.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// The d-simplices; `d = -1` is represented by the single empty simplex.
    pub fn simplices(&self, d: isize) -> &[Vec<usize>] {
        static EMPTY_SIMPLEX: [Vec<usize>; 1] = [Vec::new()];
        match d {
            -1 => &EMPTY_SIMPLEX,
            d if d < -1 => &[],
            d => self
                .simplices
                .get(d as usize)
                .map_or(&[][..], Vec::as_slice),
        }
    }

    pub fn count(&self, d: isize) -> usize {
        self.simplices(d).len()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        let d = simplex.len() as isize - 1;
        self.simplices(d)
            .binary_search_by(|s| s.as_slice().cmp(simplex))
            .is_ok()
    }

    fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let d = simplex.len() as isize - 1;
        self.simplices(d)
            .binary_search_by(|s| s.as_slice().cmp(simplex))
            .ok()
    }

    /// Simplices `t` disjoint from `s` with `s ∪ t` in the complex.
    pub fn link(&self, s: &[usize]) -> Result<Self> {
        let mut s = s.to_vec();
        s.sort_unstable();
        if s.is_empty() {
            return Ok(self.clone());
        }
        if !self.contains(&s) {
            return Err(Error::InvalidArgument(format!("{s:?} is not a simplex")));
        }
        let mut out = Vec::new();
        for level in self.simplices.iter().skip(s.len()) {
            for sigma in level {
                if s.iter().all(|v| sigma.binary_search(v).is_ok()) {
                    out.push(
                        sigma
                            .iter()
                            .copied()
                            .filter(|v| s.binary_search(v).is_err())
                            .collect(),
                    );
                }
            }
        }
        SimplicialComplex::new(self.labels.clone(), out)
    }

    /// The augmented boundary map from d-simplices to (d-1)-simplices.
    ///
    /// Deleting the r-th smallest vertex (1-based) contributes `(-1)^(r-1)`.
    /// `d = 0` is the augmentation onto the empty simplex.
    pub fn boundary_matrix(&self, d: isize, field: FieldSpec) -> Matrix {
        let rows = self.count(d - 1);
        let cols = self.count(d);
        let mut m = Matrix::zeros(field, rows, cols);
        if d < 0 {
            return m;
        }
        let plus = field.one();
        let minus = plus.neg();
        for (j, sigma) in self.simplices(d).iter().enumerate() {
            for r in 0..sigma.len() {
                let mut face = sigma.clone();
                face.remove(r);
                let i = self.index_of(&face).expect("complex is closed under faces");
                let sign = if r % 2 == 0 {
                    plus.clone()
                } else {
                    minus.clone()
                };
                m.set(i, j, sign).expect("same field");
            }
        }
        m
    }

    fn boundary_rank(&self, d: isize, field: FieldSpec) -> usize {
        if d < 0 || d > self.dimension() {
            return 0;
        }
        self.boundary_matrix(d, field).rank()
    }

    /// Reduced Betti number in degree `j` (`j >= -1`).
    pub fn reduced_betti(&self, j: isize, field: FieldSpec) -> usize {
        if j < -1 || j > self.dimension() {
            return 0;
        }
        self.count(j) - self.boundary_rank(j, field) - self.boundary_rank(j + 1, field)
    }

    /// Reduced Betti numbers for degrees `-1..=dimension`.
    pub fn betti_vector(&self, field: FieldSpec) -> BettiVector {
        let top = self.dimension();
        let ranks: Vec<usize> = (-1..=top + 1)
            .map(|d| self.boundary_rank(d, field))
            .collect();
        (-1..=top)
            .map(|j| {
                let k = (j + 1) as usize;
                (j, self.count(j) - ranks[k] - ranks[k + 1])
            })
            .collect()
    }

    /// Lowest degree `j <= m` with nonzero reduced homology, with its Betti number.
    pub fn first_nonacyclic_degree(&self, m: isize, field: FieldSpec) -> Option<(isize, usize)> {
        (-1..=m)
            .map(|j| (j, self.reduced_betti(j, field)))
            .find(|&(_, b)| b != 0)
    }

    /// Reduced homology vanishes in all degrees `-1..=m`; vacuous for `m <= -2`.
    pub fn is_acyclic_up_to(&self, m: isize, field: FieldSpec) -> bool {
        self.first_nonacyclic_degree(m, field).is_none()
    }

    /// Sum of `(-1)^d` times the number of d-simplices, including the empty simplex.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        (-1..=self.dimension())
            .map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * self.count(d) as i64)
            .sum()
    }

    pub fn to_json(&self) -> Value {
        let simplices: serde_json::Map<String, Value> = self
            .simplices
            .iter()
            .enumerate()
            .map(|(d, level)| {
                let named: Vec<Vec<&str>> = level
                    .iter()
                    .map(|s| s.iter().map(|&v| self.labels[v].as_str()).collect())
                    .collect();
                (d.to_string(), json!(named))
            })
            .collect();
        json!({ "simplices": simplices })
    }
}
