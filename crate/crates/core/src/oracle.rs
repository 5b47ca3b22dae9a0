//! Brute-force homology of `N = I_χ`, independent of any link decomposition.
//!
//! Tensoring the minimal resolution of `K` over `U(L_Γ)` down to `U(N)` gives a
//! complex of free `K[v]`-modules with basis the cliques of `Γ`. Its homology in
//! position `i` is `H_i(N, K)`, graded by internal degree (`deg c_σ = |σ|`,
//! `deg v = 1`). After renormalising the basis, the differential deletes only
//! living vertices and multiplies by `v`; dropping `v` gives the finite complex
//! `C_•` on cliques, which controls finite-dimensionality:
//!
//! ```text
//! 0 → Im(d̄_{i+1}) → H_i(N, K) → H_{i-1}(C_•) ⊗ K[v] → 0
//! ```
//!
//! Above the clique number `s` every internal degree of `H_i(N, K)` has the same
//! dimension, `dim H_{i-1}(C_•)`, so probing two degrees beyond `s` decides
//! whether `H_i(N, K)` is finite dimensional.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::character::{dead_cliques, living_subgraph, Character};
use crate::decider::{Verdict, Witness};
use crate::error::{Error, Result};
use crate::exactfield::{FieldSpec, Matrix, Scalar};
use crate::graph::{Clique, Graph, Limits};
use crate::scomplex::SimplicialComplex;

/// Which basis the differential is written in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    /// `c̃_σ`: living deletions carry coefficient 1, dead deletions 0.
    #[default]
    Renormalized,
    /// `c_σ`: deleting `v` carries coefficient `χ(v)`.
    Raw,
}

/// Sign and coefficient of deleting the `r`-th smallest member (0-based) `v`.
fn deletion_coefficient(chi: &Character, v: usize, r: usize, norm: Normalization) -> Scalar {
    let field = chi.field();
    let base = match norm {
        Normalization::Renormalized if chi.value(v).is_zero() => field.zero(),
        Normalization::Renormalized => field.one(),
        Normalization::Raw => chi.value(v).clone(),
    };
    if r.is_multiple_of(2) {
        base
    } else {
        base.neg()
    }
}

/// The finite complex `C_•`: cliques of size `i + 1` in degree `i >= -1`.
#[derive(Clone, Debug)]
pub struct CliqueChainComplex {
    field: FieldSpec,
    /// `cliques[s]`: cliques of size `s`, lexicographic.
    cliques: Vec<Vec<Clique>>,
    /// `differentials[s]`: from size `s` to size `s - 1`; `differentials[0]` maps `c_∅` to 0.
    differentials: Vec<Matrix>,
    ranks: Vec<usize>,
    max_clique_size: usize,
}

fn bucket_by_size(cliques: Vec<Clique>, size_cap: usize) -> Vec<Vec<Clique>> {
    let mut out = vec![Vec::new(); size_cap + 1];
    for c in cliques {
        out[c.len()].push(c);
    }
    out
}

impl CliqueChainComplex {
    /// Builds `C_•` with cliques up to size `n + 1` (degrees `-1..=n`).
    pub fn build(g: &Graph, chi: &Character, n: usize, limits: &Limits) -> Result<Self> {
        Self::build_with(g, chi, n + 1, Normalization::Renormalized, limits)
    }

    pub fn build_with(
        g: &Graph,
        chi: &Character,
        size_cap: usize,
        norm: Normalization,
        limits: &Limits,
    ) -> Result<Self> {
        living_subgraph(g, chi)?;
        let field = chi.field();
        let cliques = bucket_by_size(g.enumerate_cliques(size_cap, limits)?, size_cap);
        let mut differentials = vec![Matrix::zeros(field, 0, 1)];
        for s in 1..=size_cap {
            let (targets, sources) = (&cliques[s - 1], &cliques[s]);
            let mut m = Matrix::zeros(field, targets.len(), sources.len());
            for (j, sigma) in sources.iter().enumerate() {
                for (r, &v) in sigma.members().iter().enumerate() {
                    let coeff = deletion_coefficient(chi, v, r, norm);
                    if coeff.is_zero() {
                        continue;
                    }
                    let i = targets
                        .binary_search(&sigma.without(r))
                        .expect("faces of cliques are cliques");
                    m.set(i, j, coeff)?;
                }
            }
            differentials.push(m);
        }
        for s in 2..=size_cap {
            if !differentials[s - 1].mul(&differentials[s])?.is_zero() {
                return Err(Error::Internal(format!("d∘d ≠ 0 at clique size {s}")));
            }
        }
        let ranks = differentials.iter().map(Matrix::rank).collect();
        Ok(CliqueChainComplex {
            field,
            cliques,
            differentials,
            ranks,
            max_clique_size: g.clique_number(),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Largest clique size of the whole graph (not just the built range).
    pub fn max_clique_size(&self) -> usize {
        self.max_clique_size
    }

    /// Largest shifted degree present in the build.
    pub fn top_degree(&self) -> isize {
        self.cliques.len() as isize - 2
    }

    /// Basis in shifted degree `i`: cliques of size `i + 1`.
    pub fn basis(&self, i: isize) -> &[Clique] {
        usize::try_from(i + 1)
            .ok()
            .and_then(|s| self.cliques.get(s))
            .map_or(&[], Vec::as_slice)
    }

    /// `d̄` out of shifted degree `i`, i.e. from cliques of size `i + 1`.
    pub fn differential(&self, i: isize) -> Option<&Matrix> {
        usize::try_from(i + 1)
            .ok()
            .and_then(|s| self.differentials.get(s))
    }

    /// Rank of `d̄` on cliques of size `size`.
    pub fn rank_from_size(&self, size: usize) -> usize {
        self.ranks.get(size).copied().unwrap_or(0)
    }

    /// `dim H_i(C_•)` for `-1 <= i <= top_degree - 1`.
    pub fn homology(&self, i: isize) -> Result<usize> {
        if i < -1 || i > self.top_degree() - 1 {
            return Err(Error::InvalidArgument(format!(
                "degree {i} outside the built range -1..={}",
                self.top_degree() - 1
            )));
        }
        let s = (i + 1) as usize;
        Ok(self.cliques[s].len() - self.ranks[s] - self.ranks[s + 1])
    }

    pub fn to_json(&self) -> Value {
        let homology: BTreeMap<String, usize> = (-1..self.top_degree())
            .map(|i| (i.to_string(), self.homology(i).expect("in range")))
            .collect();
        json!(homology)
    }
}

/// `dim H_i(N, K)_d` for `0 <= i <= n`, `i <= d <= degree_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedHomologyTable {
    pub n: usize,
    pub degree_bound: usize,
    pub entries: BTreeMap<(usize, usize), usize>,
}

impl GradedHomologyTable {
    pub fn get(&self, i: usize, d: usize) -> Option<usize> {
        self.entries.get(&(i, d)).copied()
    }

    pub fn to_json(&self) -> Value {
        let mut rows: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
        for (&(i, d), &dim) in &self.entries {
            rows.entry(i.to_string())
                .or_default()
                .insert(d.to_string(), dim);
        }
        // keys sort as strings; fine below 10, otherwise order by number
        let mut out = serde_json::Map::new();
        let mut keys: Vec<_> = rows.into_iter().collect();
        keys.sort_by_key(|(k, _)| k.parse::<usize>().unwrap_or(usize::MAX));
        for (i, row) in keys {
            let mut inner: Vec<_> = row.into_iter().collect();
            inner.sort_by_key(|(k, _)| k.parse::<usize>().unwrap_or(usize::MAX));
            let inner: serde_json::Map<String, Value> =
                inner.into_iter().map(|(d, v)| (d, json!(v))).collect();
            out.insert(i, Value::Object(inner));
        }
        Value::Object(out)
    }
}

/// The graded complex `C_• ⊗ K[v]` cut into finite internal-degree slices.
struct GradedComplex<'a> {
    chi: &'a Character,
    norm: Normalization,
    /// cliques by size, lexicographic
    cliques: Vec<Vec<Clique>>,
}

impl GradedComplex<'_> {
    /// Basis of position `i` in internal degree `d`: pairs `(σ, e)` with `|σ| = i`, `e = d - i`.
    fn slice_basis(&self, i: usize, d: usize) -> Vec<(&Clique, usize)> {
        if d < i || i >= self.cliques.len() {
            return Vec::new();
        }
        self.cliques[i].iter().map(|c| (c, d - i)).collect()
    }

    /// Matrix of `d_i` from position `i` to `i - 1` restricted to internal degree `d`.
    /// Position 0 maps to zero (the augmentation is not part of the tensored complex).
    fn slice_map(&self, i: usize, d: usize) -> Result<Matrix> {
        let field = self.chi.field();
        let sources = self.slice_basis(i, d);
        if i == 0 {
            return Ok(Matrix::zeros(field, 0, sources.len()));
        }
        let targets = self.slice_basis(i - 1, d);
        let index: BTreeMap<(&Clique, usize), usize> = targets
            .iter()
            .enumerate()
            .map(|(k, &(c, e))| ((c, e), k))
            .collect();
        let mut m = Matrix::zeros(field, targets.len(), sources.len());
        for (j, &(sigma, e)) in sources.iter().enumerate() {
            for (r, &v) in sigma.members().iter().enumerate() {
                let coeff = deletion_coefficient(self.chi, v, r, self.norm);
                if coeff.is_zero() {
                    continue;
                }
                // c_σ v^e ↦ ± coeff · c_{σ∖v} v^{e+1}
                let face = sigma.without(r);
                let row = index
                    .get(&(&face, e + 1))
                    .copied()
                    .ok_or_else(|| Error::Internal("graded face outside its slice".into()))?;
                m.set(row, j, coeff)?;
            }
        }
        Ok(m)
    }

    fn homology(&self, i: usize, d: usize) -> Result<usize> {
        let dim = self.slice_basis(i, d).len();
        let out = self.slice_map(i, d)?;
        let incoming = self.slice_map(i + 1, d)?;
        if i + 1 < self.cliques.len() && !out.mul(&incoming)?.is_zero() {
            return Err(Error::Internal(format!("d∘d ≠ 0 in slice ({i}, {d})")));
        }
        Ok(dim - out.rank() - incoming.rank())
    }
}

fn graded_complex<'a>(
    g: &Graph,
    chi: &'a Character,
    n: usize,
    norm: Normalization,
    limits: &Limits,
) -> Result<GradedComplex<'a>> {
    living_subgraph(g, chi)?;
    let cliques = bucket_by_size(g.enumerate_cliques(n + 1, limits)?, n + 1);
    Ok(GradedComplex { chi, norm, cliques })
}

/// Exact `dim H_i(N, K)_d` from the graded slices, for `0 <= i <= n` and `i <= d <= degree_bound`.
pub fn graded_homology(
    g: &Graph,
    chi: &Character,
    n: usize,
    degree_bound: usize,
    norm: Normalization,
    limits: &Limits,
) -> Result<GradedHomologyTable> {
    if degree_bound < n {
        return Err(Error::InvalidArgument(format!(
            "degree bound {degree_bound} is below n = {n}"
        )));
    }
    let complex = graded_complex(g, chi, n, norm, limits)?;
    let mut entries = BTreeMap::new();
    for i in 0..=n {
        for d in i..=degree_bound {
            entries.insert((i, d), complex.homology(i, d)?);
        }
    }
    Ok(GradedHomologyTable {
        n,
        degree_bound,
        entries,
    })
}

/// `dim H_i(C_•) = Σ_w dim H̃_{i-|w|}(lk(w))` over dead cliques `w`.
///
/// The links are computed as simplicial links in the full flag complex,
/// then restricted to living vertices.
pub fn decomposition_check(g: &Graph, chi: &Character, i: isize, limits: &Limits) -> Result<bool> {
    if i < -1 {
        return Err(Error::InvalidArgument(format!("degree {i} below -1")));
    }
    let c = CliqueChainComplex::build(g, chi, (i + 1) as usize, limits)?;
    let lhs = c.homology(i)?;
    let living = chi.support();
    let flag = SimplicialComplex::flag_complex(g, (i + 1) as usize, limits)?;
    let mut rhs = 0;
    for w in dead_cliques(g, chi, (i + 1) as usize, limits)? {
        let link = flag.link(w.members())?;
        let living_part = SimplicialComplex::new(
            link.labels().to_vec(),
            (0..=link.dimension())
                .flat_map(|d| link.simplices(d).iter().cloned())
                .filter(|s| s.iter().all(|&v| living.contains(v))),
        )?;
        rhs += living_part.reduced_betti(i - w.len() as isize, chi.field());
    }
    Ok(lhs == rhs)
}

/// Per-degree comparison of the graded table against the split sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    /// `(i, d, table value, predicted value)` for every mismatch.
    pub mismatches: Vec<(usize, usize, usize, usize)>,
}

impl SplitReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks, for `1 <= i <= n` and `i <= d <= s + 3`,
/// `dim H_i(N,K)_d = dim(Im d̄_{i+1})_d + Σ_{j <= d} dim H_{i-1}(C_•)_j`
/// with both right-hand terms graded by clique size, and that for `d > s`
/// the value equals `dim H_{i-1}(C_•)`.
pub fn split_check(g: &Graph, chi: &Character, n: usize, limits: &Limits) -> Result<SplitReport> {
    let s = g.clique_number();
    let bound = (s + 3).max(n);
    let table = graded_homology(g, chi, n, bound, Normalization::Renormalized, limits)?;
    let c = CliqueChainComplex::build(g, chi, n, limits)?;
    let mut mismatches = Vec::new();
    for i in 1..=n {
        // Im d̄_{i+1} and H_{i-1}(C_•) both live in C_i: clique size i
        let image_by_size = |size: usize| {
            if size == i {
                c.rank_from_size(i + 1)
            } else {
                0
            }
        };
        let c_homology = c.homology(i as isize - 1)?;
        let homology_by_size = |size: usize| if size == i { c_homology } else { 0 };
        for d in i..=bound {
            let got = table.get(i, d).expect("table covers the range");
            let predicted = image_by_size(d) + (0..=d).map(homology_by_size).sum::<usize>();
            if got != predicted {
                mismatches.push((i, d, got, predicted));
            }
            if d > s && got != c_homology {
                mismatches.push((i, d, got, c_homology));
            }
        }
    }
    Ok(SplitReport { mismatches })
}

/// Type `FP_n` of `I_χ` decided from the graded homology alone.
///
/// `H_i(N, K)` is finite dimensional iff it vanishes in internal degrees `s + 1`
/// and `s + 2`, where `s` is the clique number. The two probes must agree.
pub fn fp_oracle(g: &Graph, chi: &Character, n: usize, limits: &Limits) -> Result<Verdict> {
    let s = g.clique_number();
    let notes = vec![
        format!("clique number s = {s}; internal degrees above s are stable"),
        format!("probed internal degrees {} and {}", s + 1, s + 2),
    ];
    if n == 0 {
        living_subgraph(g, chi)?;
        return Ok(Verdict::pass(0, notes));
    }
    let complex = graded_complex(g, chi, n, Normalization::Renormalized, limits)?;
    for i in 1..=n {
        let a = complex.homology(i, s + 1)?;
        let b = complex.homology(i, s + 2)?;
        if a != b {
            return Err(Error::Internal(format!(
                "dim H_{i}(N,K) differs between degrees {} ({a}) and {} ({b})",
                s + 1,
                s + 2
            )));
        }
        if a != 0 {
            let witness = Witness::GradedHomology {
                homological_degree: i,
                internal_degree: s + 1,
                dim: a,
            };
            return Ok(Verdict::fail(n, witness, notes));
        }
    }
    Ok(Verdict::pass(n, notes))
}

/// Everything the oracle computes for one instance.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub table: GradedHomologyTable,
    pub c_homology: BTreeMap<isize, usize>,
    pub verdict: Verdict,
}

impl OracleReport {
    pub fn to_json(&self, g: &Graph) -> Value {
        let c: serde_json::Map<String, Value> = self
            .c_homology
            .iter()
            .map(|(i, d)| (i.to_string(), json!(d)))
            .collect();
        json!({
            "H": self.table.to_json(),
            "C_homology": c,
            "verdict": self.verdict.to_json(g),
        })
    }
}

/// Graded table up to `degree_bound` (default `max(n, s + 2)`), `C_•` homology
/// in degrees `-1..n`, and the oracle verdict.
pub fn oracle_report(
    g: &Graph,
    chi: &Character,
    n: usize,
    degree_bound: Option<usize>,
    limits: &Limits,
) -> Result<OracleReport> {
    let s = g.clique_number();
    let bound = degree_bound.unwrap_or((s + 2).max(n));
    let table = graded_homology(g, chi, n, bound, Normalization::Renormalized, limits)?;
    let c = CliqueChainComplex::build(g, chi, n, limits)?;
    let c_homology = (-1..n as isize)
        .map(|i| Ok((i, c.homology(i)?)))
        .collect::<Result<_>>()?;
    let verdict = fp_oracle(g, chi, n, limits)?;
    Ok(OracleReport {
        table,
        c_homology,
        verdict,
    })
}
