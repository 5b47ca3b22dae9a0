//! Finite simple graphs with a fixed vertex order.
//!
//! Vertex indices follow the order of the `vertices` array in the input; that
//! order fixes every sign convention downstream. Graphs are limited to 64
//! vertices so vertex sets fit in a single machine word.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// Resource guards for combinatorial enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of cliques (or simplices, or chains) materialised at once.
    pub max_cliques: usize,
    /// Maximum number of projective points scanned over a finite field.
    pub max_projective_points: u64,
    /// Maximum number of distinct supports (flats) enumerated for a character space.
    pub max_supports: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cliques: 1_000_000,
            max_projective_points: 1_000_000,
            max_supports: 1_000_000,
        }
    }
}

/// A set of vertex indices, stored as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members strictly greater than `v`.
    pub fn above(self, v: usize) -> VertexSet {
        VertexSet(self.0 & !(2u64 << v).wrapping_sub(1))
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// A clique: strictly increasing vertex indices, possibly empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clique(Vec<usize>);

impl Clique {
    pub fn empty() -> Self {
        Clique(Vec::new())
    }

    /// Sorts and deduplicates the members; adjacency is not checked here.
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Clique(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    /// The clique with its `r`-th smallest member (0-based) removed.
    pub fn without(&self, r: usize) -> Clique {
        let mut m = self.0.clone();
        m.remove(r);
        Clique(m)
    }
}

impl From<VertexSet> for Clique {
    fn from(s: VertexSet) -> Self {
        Clique(s.to_vec())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    adjacency: Vec<VertexSet>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self
            .edges()
            .map(|(a, b)| (&self.names[a], &self.names[b]))
            .collect();
        f.debug_struct("Graph")
            .field("vertices", &self.names)
            .field("edges", &edges)
            .finish()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

/// Serialisable form of a graph, edges listed in lexicographic index order.
#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct GraphReport {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl Graph {
    /// Builds a graph from vertex names and index pairs. Duplicate edges are merged.
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        if names.len() > MAX_VERTICES {
            return Err(Error::Resource(format!(
                "{} vertices exceeds the limit of {MAX_VERTICES}",
                names.len()
            )));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(Error::InvalidArgument("duplicate vertex name".into()));
        }
        let n = names.len();
        let mut adjacency = vec![VertexSet::EMPTY; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a},{b}) out of range"
                )));
            }
            if a == b {
                return Err(Error::InvalidArgument(format!(
                    "loop at vertex {}",
                    names[a]
                )));
            }
            adjacency[a].insert(b);
            adjacency[b].insert(a);
        }
        Ok(Graph { names, adjacency })
    }

    /// Vertices named `"1"`, `"2"`, ... with 0-based index pairs as edges.
    pub fn numbered(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Graph::new((1..=n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn parse(text: &[u8]) -> Result<Self> {
        let raw: GraphJson = serde_json::from_slice(text).map_err(|e| {
            Error::parse(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        if raw.vertices.len() > MAX_VERTICES {
            return Err(Error::Resource(format!(
                "{} vertices exceeds the limit of {MAX_VERTICES}",
                raw.vertices.len()
            )));
        }
        for (i, name) in raw.vertices.iter().enumerate() {
            if raw.vertices[..i].contains(name) {
                return Err(Error::parse(
                    format!("vertices[{i}]"),
                    format!("duplicate vertex name {name:?}"),
                ));
            }
        }
        let index = |name: &str, loc: String| {
            raw.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::parse(loc, format!("unknown vertex {name:?}")))
        };
        let mut edges = Vec::with_capacity(raw.edges.len());
        for (i, (a, b)) in raw.edges.iter().enumerate() {
            let ia = index(a, format!("edges[{i}][0]"))?;
            let ib = index(b, format!("edges[{i}][1]"))?;
            if ia == ib {
                return Err(Error::parse(
                    format!("edges[{i}]"),
                    format!("loop at vertex {a:?}"),
                ));
            }
            edges.push((ia, ib));
        }
        Graph::new(raw.vertices, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adjacency[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    /// Edges `(a, b)` with `a < b`, lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |a| {
            self.adjacency[a]
                .iter()
                .filter(move |&b| b > a)
                .map(move |b| (a, b))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn report(&self) -> GraphReport {
        GraphReport {
            vertices: self.names.clone(),
            edges: self
                .edges()
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
        }
    }

    pub fn is_clique(&self, set: VertexSet) -> bool {
        set.iter().all(|v| {
            set.difference(VertexSet::singleton(v))
                .is_subset(self.adjacency[v])
        })
    }

    /// All cliques of size at most `size_cap`, empty clique first, in
    /// lexicographic order of their member sequences.
    pub fn enumerate_cliques(&self, size_cap: usize, limits: &Limits) -> Result<Vec<Clique>> {
        self.cliques_within(self.vertices(), size_cap, limits)
    }

    /// Cliques of the induced subgraph on `allowed`, same order as [`Graph::enumerate_cliques`].
    pub fn cliques_within(
        &self,
        allowed: VertexSet,
        size_cap: usize,
        limits: &Limits,
    ) -> Result<Vec<Clique>> {
        let mut out = vec![Clique::empty()];
        let mut current = Vec::new();
        self.extend_cliques(allowed, size_cap, limits, &mut current, &mut out)?;
        Ok(out)
    }

    // Ordered backtracking: a clique is only extended by higher-indexed common neighbours.
    fn extend_cliques(
        &self,
        candidates: VertexSet,
        size_cap: usize,
        limits: &Limits,
        current: &mut Vec<usize>,
        out: &mut Vec<Clique>,
    ) -> Result<()> {
        if current.len() >= size_cap {
            return Ok(());
        }
        for v in candidates.iter() {
            current.push(v);
            if out.len() >= limits.max_cliques {
                return Err(Error::Resource(format!(
                    "more than {} cliques",
                    limits.max_cliques
                )));
            }
            out.push(Clique(current.clone()));
            let next = candidates.above(v).intersection(self.adjacency[v]);
            self.extend_cliques(next, size_cap, limits, current, out)?;
            current.pop();
        }
        Ok(())
    }

    /// Size of a largest clique.
    pub fn clique_number(&self) -> usize {
        fn grow(g: &Graph, candidates: VertexSet, size: usize, best: &mut usize) {
            *best = (*best).max(size);
            if size + candidates.len() <= *best {
                return;
            }
            for v in candidates.iter() {
                grow(
                    g,
                    candidates.above(v).intersection(g.adjacency[v]),
                    size + 1,
                    best,
                );
            }
        }
        let mut best = 0;
        grow(self, self.vertices(), 0, &mut best);
        best
    }

    /// Vertices outside `w` adjacent to every member of `w`; all vertices when `w` is empty.
    pub fn link_in_graph(&self, w: &Clique) -> Result<VertexSet> {
        let set = w.as_set();
        if w.members().iter().any(|&v| v >= self.vertex_count()) || !self.is_clique(set) {
            return Err(Error::InvalidArgument(format!(
                "{:?} is not a clique",
                w.members()
            )));
        }
        Ok(w.members()
            .iter()
            .fold(self.vertices(), |acc, &v| {
                acc.intersection(self.adjacency[v])
            })
            .difference(set))
    }

    /// Whether the induced subgraph on `subset` is nonempty and connected.
    pub fn is_connected(&self, subset: VertexSet) -> bool {
        let Some(start) = subset.iter().next() else {
            return false;
        };
        self.component_of(start, subset) == subset
    }

    /// The connected component of `start` inside the induced subgraph on `subset`.
    pub fn component_of(&self, start: usize, subset: VertexSet) -> VertexSet {
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(self.adjacency[v]);
            }
            frontier = next.intersection(subset).difference(seen);
            seen = seen.union(frontier);
        }
        seen
    }

    /// Vertices outside `subset` with no neighbour inside it.
    pub fn undominated(&self, subset: VertexSet) -> VertexSet {
        self.vertices()
            .difference(subset)
            .iter()
            .filter(|&v| self.adjacency[v].intersection(subset).is_empty())
            .collect()
    }

    /// Whether every vertex outside `subset` has a neighbour inside it.
    pub fn is_dominant(&self, subset: VertexSet) -> bool {
        self.undominated(subset).is_empty()
    }
}
