//! Characters on the vertex set, their living subgraphs, and spaces of characters.
//!
//! A character `χ: V → K` determines the codimension-one ideal `I_χ`; a
//! k-dimensional space of characters determines a coabelian ideal of
//! codimension k. Only the support of a character matters to the decision
//! procedures, so a space is summarised by the finite set of supports its
//! nonzero members realise.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactfield::{FieldSpec, Matrix, Scalar};
use crate::graph::{Clique, Graph, Limits, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    field: FieldSpec,
    values: Vec<Scalar>,
}

/// Support of a nonzero character: the vertex set of `Γ_χ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LivingSubgraph(pub VertexSet);

impl LivingSubgraph {
    pub fn vertices(self) -> VertexSet {
        self.0
    }

    /// Members in increasing order, as a clique-like list (not necessarily a clique).
    pub fn members(self) -> Vec<usize> {
        self.0.to_vec()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CharacterJson {
    field: Option<FieldSpec>,
    values: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceJson {
    field: Option<FieldSpec>,
    basis: Vec<BTreeMap<String, String>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(
        format!("line {} column {}", e.line(), e.column()),
        e.to_string(),
    )
}

/// Values by vertex name; vertices not mentioned get zero.
fn read_values(
    g: &Graph,
    field: FieldSpec,
    values: &BTreeMap<String, String>,
    location: &str,
) -> Result<Vec<Scalar>> {
    let mut out = vec![field.zero(); g.vertex_count()];
    for (name, literal) in values {
        let v = g
            .index_of(name)
            .ok_or_else(|| Error::parse(format!("{location}.{name}"), "unknown vertex"))?;
        out[v] = field
            .parse_scalar(literal)
            .map_err(|e| Error::parse(format!("{location}.{name}"), e.to_string()))?;
    }
    Ok(out)
}

impl Character {
    pub fn new(field: FieldSpec, values: Vec<Scalar>) -> Result<Self> {
        if values.iter().any(|v| v.field() != field) {
            return Err(Error::Malformed(format!("character value outside {field}")));
        }
        Ok(Character { field, values })
    }

    pub fn from_i64(field: FieldSpec, values: &[i64]) -> Self {
        Character {
            field,
            values: values.iter().map(|&a| field.from_i64(a)).collect(),
        }
    }

    /// Reads `{"field": ..., "values": {name: "a/b", ...}}`. The field is taken
    /// from `field_override`, else the document, else `Q`.
    pub fn parse(text: &[u8], g: &Graph, field_override: Option<FieldSpec>) -> Result<Self> {
        let raw: CharacterJson = serde_json::from_slice(text).map_err(json_error)?;
        let field = field_override.or(raw.field).unwrap_or(FieldSpec::Rationals);
        let values = read_values(g, field, &raw.values, "values")?;
        Character::new(field, values)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &Scalar {
        &self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    pub fn support(&self) -> VertexSet {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(v, _)| v)
            .collect()
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        let values: serde_json::Map<String, Value> = self
            .values
            .iter()
            .enumerate()
            .map(|(v, x)| (g.name(v).to_string(), json!(x.to_string())))
            .collect();
        json!({ "field": self.field.to_string(), "values": values })
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.values.len() != g.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "character has {} values for {} vertices",
                self.values.len(),
                g.vertex_count()
            )));
        }
        Ok(())
    }
}

/// The support of `chi` as a subgraph of `g`; a zero character is rejected.
pub fn living_subgraph(g: &Graph, chi: &Character) -> Result<LivingSubgraph> {
    chi.check_graph(g)?;
    if chi.is_zero() {
        return Err(Error::InvalidArgument("χ must be non-zero".into()));
    }
    Ok(LivingSubgraph(chi.support()))
}

/// Cliques (including the empty one) all of whose vertices have `χ = 0`.
pub fn dead_cliques(
    g: &Graph,
    chi: &Character,
    size_cap: usize,
    limits: &Limits,
) -> Result<Vec<Clique>> {
    let living = living_subgraph(g, chi)?;
    g.cliques_within(g.vertices().difference(living.0), size_cap, limits)
}

/// A support realised by a space of characters, with one character realising it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizedSupport {
    pub support: LivingSubgraph,
    pub witness: Character,
}

/// A k-dimensional space of characters, given by a basis (one character per row).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSpace {
    basis: Matrix,
}

impl CharacterSpace {
    pub fn new(basis: Matrix) -> Result<Self> {
        if basis.rows() == 0 {
            return Err(Error::InvalidArgument(
                "character space needs at least one basis row".into(),
            ));
        }
        if basis.rank() != basis.rows() {
            return Err(Error::InvalidArgument(
                "basis characters are linearly dependent".into(),
            ));
        }
        Ok(CharacterSpace { basis })
    }

    pub fn from_characters(field: FieldSpec, chars: &[Character]) -> Result<Self> {
        let cols = chars.first().map_or(0, Character::len);
        let rows = chars.iter().map(|c| c.values.clone()).collect();
        CharacterSpace::new(Matrix::from_rows(field, rows, cols)?)
    }

    /// Reads `{"field": ..., "basis": [{name: value, ...}, ...]}`.
    pub fn parse(text: &[u8], g: &Graph, field_override: Option<FieldSpec>) -> Result<Self> {
        let raw: SpaceJson = serde_json::from_slice(text).map_err(json_error)?;
        let field = field_override.or(raw.field).unwrap_or(FieldSpec::Rationals);
        let rows = raw
            .basis
            .iter()
            .enumerate()
            .map(|(i, row)| read_values(g, field, row, &format!("basis[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        CharacterSpace::new(Matrix::from_rows(field, rows, g.vertex_count())?)
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn vertex_count(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn characters(&self) -> Vec<Character> {
        (0..self.dim())
            .map(|r| Character {
                field: self.field(),
                values: self.basis.row(r).to_vec(),
            })
            .collect()
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        let basis: Vec<Value> = self
            .characters()
            .iter()
            .map(|c| c.to_json(g)["values"].clone())
            .collect();
        json!({ "field": self.field().to_string(), "basis": basis })
    }

    /// Rank of the basis restricted to the columns in `subset`; this is the
    /// corank of `M ∩ L_A` in `L_A` for `A = subset`.
    pub fn restriction_rank(&self, subset: VertexSet) -> usize {
        if subset.is_empty() {
            return 0;
        }
        self.basis.select_columns(&subset.to_vec()).rank()
    }

    /// The character `Σ coeffs[i] * basis[i]`.
    pub fn combination(&self, coeffs: &[Scalar]) -> Character {
        let field = self.field();
        let values = (0..self.vertex_count())
            .map(|v| {
                coeffs.iter().enumerate().fold(field.zero(), |acc, (i, c)| {
                    acc.add(&c.mul(self.basis.get(i, v)).expect("same field"))
                        .expect("same field")
                })
            })
            .collect();
        Character { field, values }
    }

    /// Supports of the nonzero characters in the space, sorted by member list,
    /// each with a realising character.
    ///
    /// Over `Q` this uses the infinite-field characterisation; over `GF(p)` it
    /// scans every projective point of the space.
    pub fn realizable_supports(&self, limits: &Limits) -> Result<Vec<RealizedSupport>> {
        match self.field() {
            FieldSpec::Rationals => self.generic_supports(limits),
            FieldSpec::Prime(p) => self.projective_scan(p, limits),
        }
    }

    /// Supports realised over an infinite extension of the field.
    ///
    /// A set `Z` is the zero set of some nonzero member iff the members vanishing
    /// on `Z` form a nonzero space that does not shrink when any further vertex is
    /// added, i.e. iff `Z` is a flat of rank `< k` of the column matroid of the
    /// basis. Flats are enumerated upward from the closure of the empty set.
    pub fn generic_supports(&self, limits: &Limits) -> Result<Vec<RealizedSupport>> {
        let k = self.dim();
        let all = VertexSet::full(self.vertex_count());
        let mut ranks: HashMap<VertexSet, usize> = HashMap::new();
        let mut rank = |s: VertexSet| *ranks.entry(s).or_insert_with(|| self.restriction_rank(s));
        let mut closure = |s: VertexSet, r: usize| -> VertexSet {
            let extra: VertexSet = all
                .difference(s)
                .iter()
                .filter(|&v| rank(s.union(VertexSet::singleton(v))) == r)
                .collect();
            s.union(extra)
        };

        let base = closure(VertexSet::EMPTY, 0);
        let mut seen = BTreeSet::from([base]);
        let mut queue = VecDeque::from([(base, 0usize)]);
        let mut flats = Vec::new();
        while let Some((flat, r)) = queue.pop_front() {
            if r >= k {
                continue;
            }
            flats.push(flat);
            if flats.len() > limits.max_supports {
                return Err(Error::Resource(format!(
                    "more than {} supports",
                    limits.max_supports
                )));
            }
            if r + 1 >= k {
                continue;
            }
            for v in all.difference(flat).iter() {
                let next = closure(flat.union(VertexSet::singleton(v)), r + 1);
                if seen.insert(next) {
                    queue.push_back((next, r + 1));
                }
            }
        }

        let mut out: Vec<RealizedSupport> = flats
            .into_iter()
            .map(|flat| {
                let support = all.difference(flat);
                let witness = self.generic_witness(flat, support)?;
                Ok(RealizedSupport {
                    support: LivingSubgraph(support),
                    witness,
                })
            })
            .collect::<Result<_>>()?;
        out.sort_by_key(|a| a.support.members());
        Ok(out)
    }

    /// A member with support exactly `support`, vanishing on the flat `zeros`:
    /// `Σ t^j q_j` over a basis `q_j` of the members vanishing on `zeros`,
    /// scanning `t = 1, 2, ...`.
    fn generic_witness(&self, zeros: VertexSet, support: VertexSet) -> Result<Character> {
        let field = self.field();
        let k = self.dim();
        // rows: the basis columns on `zeros`, as vectors in K^k
        let constraints = self.basis.select_columns(&zeros.to_vec()).transpose();
        let kernel = constraints.kernel_basis();
        let q: Vec<Character> = (0..kernel.rows())
            .map(|r| self.combination(kernel.row(r)))
            .collect();
        let bound = (self.vertex_count() * k + 2) as i64;
        for t in 1..=bound {
            let t = field.from_i64(t);
            let coeffs: Vec<Scalar> = (0..q.len()).map(|j| t.pow(j as u64)).collect();
            let values = (0..self.vertex_count())
                .map(|v| {
                    coeffs.iter().zip(&q).fold(field.zero(), |acc, (c, qj)| {
                        acc.add(&c.mul(qj.value(v)).expect("same field"))
                            .expect("same field")
                    })
                })
                .collect();
            let chi = Character { field, values };
            if chi.support() == support {
                return Ok(chi);
            }
        }
        Err(Error::Internal(format!(
            "no witness found for support {:?} within {bound} trials",
            support.to_vec()
        )))
    }

    /// Every projective point of the space over `GF(p)`; first realiser wins.
    fn projective_scan(&self, p: u32, limits: &Limits) -> Result<Vec<RealizedSupport>> {
        let field = FieldSpec::Prime(p);
        let k = self.dim() as u32;
        let points = (p as u64).checked_pow(k).map(|n| (n - 1) / (p as u64 - 1));
        match points {
            Some(n) if n <= limits.max_projective_points => {}
            _ => {
                return Err(Error::Resource(format!(
                    "projective space of dimension {} over GF({p}) exceeds {} points",
                    k - 1,
                    limits.max_projective_points
                )))
            }
        }
        let mut found: BTreeMap<Vec<usize>, RealizedSupport> = BTreeMap::new();
        // first nonzero coordinate normalised to 1
        for lead in 0..k as usize {
            let tail = k as usize - lead - 1;
            let mut digits = vec![0u32; tail];
            loop {
                let mut coeffs = vec![field.zero(); k as usize];
                coeffs[lead] = field.one();
                for (i, &d) in digits.iter().enumerate() {
                    coeffs[lead + 1 + i] = field.from_i64(d as i64);
                }
                let chi = self.combination(&coeffs);
                let support = LivingSubgraph(chi.support());
                found.entry(support.members()).or_insert(RealizedSupport {
                    support,
                    witness: chi,
                });
                // odometer increment
                let mut i = 0;
                while i < tail {
                    digits[i] += 1;
                    if digits[i] < p {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if i == tail {
                    break;
                }
            }
        }
        Ok(found.into_values().collect())
    }
}
