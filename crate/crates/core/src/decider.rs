//! Decision procedures for finiteness properties of ideals of `L_Γ`.
//!
//! * [`fp_codim1`]: type `FP_n` of `I_χ` via acyclicity of links of dead cliques
//!   in the flag complex of the living subgraph.
//! * [`fg_corollary_e`]: finite generation of `I_χ` via connectivity and dominance.
//! * [`fp_ideal`]: type `FP_n` of a coabelian ideal, reduced to the finitely many
//!   living subgraphs its character space realises.
//! * [`thm_g_sufficient`]: a sufficient condition on order-complex links.
//! * [`cross_check_p1_p2`]: compares two posets whose realisations are homotopy
//!   equivalent, at the level of Betti numbers.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::character::{dead_cliques, living_subgraph, Character, CharacterSpace, LivingSubgraph};
use crate::error::{Error, Result};
use crate::exactfield::FieldSpec;
use crate::graph::{Clique, Graph, Limits, VertexSet};
use crate::scomplex::{BettiVector, SimplicialComplex};

/// How the link condition depends on the size of the dead clique.
///
/// `Shifted` requires `H̃_j(lk(w)) = 0` for `j <= n - 1 - |w|`; `Uniform`
/// requires it for `j <= n - 1` regardless of `|w|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Convention {
    #[default]
    Shifted,
    Uniform,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::Shifted => write!(f, "shifted"),
            Convention::Uniform => write!(f, "uniform"),
        }
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "shifted" => Ok(Convention::Shifted),
            "uniform" => Ok(Convention::Uniform),
            other => Err(Error::Malformed(format!("unknown convention {other:?}"))),
        }
    }
}

/// Why a verdict fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The link of `dead_clique` in the living flag complex has reduced Betti
    /// number `betti` in `degree`.
    Link {
        dead_clique: Clique,
        degree: isize,
        betti: usize,
    },
    /// The codimension-one verdict for a realisable support fails.
    Support {
        support: LivingSubgraph,
        inner: Box<Verdict>,
    },
    /// The living subgraph splits into these components.
    NotConnected { components: Vec<VertexSet> },
    /// This vertex has no living neighbour.
    NotDominant { vertex: usize },
    /// The order-complex link of `clique` has reduced Betti number `betti` in `degree`.
    OrderComplexLink {
        clique: Clique,
        degree: isize,
        betti: usize,
    },
    /// `dim H_i(N, K)_d` is nonzero beyond the stable range.
    GradedHomology {
        homological_degree: usize,
        internal_degree: usize,
        dim: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub n: usize,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub(crate) fn pass(n: usize, notes: Vec<String>) -> Self {
        Verdict {
            holds: true,
            n,
            witness: None,
            notes,
        }
    }

    pub(crate) fn fail(n: usize, witness: Witness, notes: Vec<String>) -> Self {
        Verdict {
            holds: false,
            n,
            witness: Some(witness),
            notes,
        }
    }

    /// JSON rendering with vertex names taken from `g`.
    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "holds": self.holds,
            "n": self.n,
            "witness": self.witness.as_ref().map_or(Value::Null, |w| w.to_json(g)),
            "notes": self.notes,
        })
    }
}

fn names(g: &Graph, members: impl IntoIterator<Item = usize>) -> Vec<String> {
    members.into_iter().map(|v| g.name(v).to_string()).collect()
}

impl Witness {
    pub fn to_json(&self, g: &Graph) -> Value {
        match self {
            Witness::Link {
                dead_clique,
                degree,
                betti,
            } => json!({
                "dead_clique": names(g, dead_clique.members().iter().copied()),
                "degree": degree,
                "betti": betti,
            }),
            Witness::Support { support, inner } => json!({
                "support": names(g, support.members()),
                "inner": inner.to_json(g),
            }),
            Witness::NotConnected { components } => json!({
                "reason": "not connected",
                "components": components.iter().map(|c| names(g, c.iter())).collect::<Vec<_>>(),
            }),
            Witness::NotDominant { vertex } => json!({
                "reason": "not dominant",
                "vertex": g.name(*vertex),
            }),
            Witness::OrderComplexLink {
                clique,
                degree,
                betti,
            } => json!({
                "clique": names(g, clique.members().iter().copied()),
                "degree": degree,
                "betti": betti,
            }),
            Witness::GradedHomology {
                homological_degree,
                internal_degree,
                dim,
            } => json!({
                "homological_degree": homological_degree,
                "internal_degree": internal_degree,
                "dim": dim,
            }),
        }
    }
}

/// `lk_{Δ_Γ}(w) ∩ Δ_{Γ_χ}`: the flag complex on living vertices adjacent to all of `w`,
/// with simplices up to dimension `dim_cap`.
pub fn living_link(
    g: &Graph,
    living: VertexSet,
    w: &Clique,
    dim_cap: usize,
    limits: &Limits,
) -> Result<SimplicialComplex> {
    let span = g.link_in_graph(w)?.intersection(living);
    SimplicialComplex::flag_complex_on(g, span, dim_cap, limits)
}

/// Whether `I_χ` is of type `FP_n`, by the link condition on dead cliques.
pub fn fp_codim1(
    g: &Graph,
    chi: &Character,
    n: usize,
    conv: Convention,
    limits: &Limits,
) -> Result<Verdict> {
    let living = living_subgraph(g, chi)?.vertices();
    let field = chi.field();
    let notes = vec![format!("convention: {conv}")];
    if n == 0 {
        return Ok(Verdict::pass(0, notes));
    }
    let size_cap = match conv {
        // larger dead cliques impose no condition
        Convention::Shifted => n,
        Convention::Uniform => usize::MAX,
    };
    for w in dead_cliques(g, chi, size_cap, limits)? {
        let top = match conv {
            Convention::Shifted => n as isize - 1 - w.len() as isize,
            Convention::Uniform => n as isize - 1,
        };
        let link = living_link(g, living, &w, (top + 1).max(0) as usize, limits)?;
        if let Some((degree, betti)) = link.first_nonacyclic_degree(top, field) {
            return Ok(Verdict::fail(
                n,
                Witness::Link {
                    dead_clique: w,
                    degree,
                    betti,
                },
                notes,
            ));
        }
    }
    Ok(Verdict::pass(n, notes))
}

/// Whether `I_χ` is finitely generated: the living subgraph must be connected and dominant.
pub fn fg_corollary_e(g: &Graph, chi: &Character) -> Result<Verdict> {
    let living = living_subgraph(g, chi)?.vertices();
    let connected = g.is_connected(living);
    let undominated = g.undominated(living);
    let notes = vec![
        format!(
            "living subgraph is {}",
            if connected {
                "connected"
            } else {
                "not connected"
            }
        ),
        format!(
            "living subgraph is {}",
            if undominated.is_empty() {
                "dominant"
            } else {
                "not dominant"
            }
        ),
    ];
    if !connected {
        let mut components = Vec::new();
        let mut rest = living;
        while let Some(v) = rest.iter().next() {
            let c = g.component_of(v, living);
            components.push(c);
            rest = rest.difference(c);
        }
        return Ok(Verdict::fail(
            1,
            Witness::NotConnected { components },
            notes,
        ));
    }
    if let Some(vertex) = undominated.iter().next() {
        return Ok(Verdict::fail(1, Witness::NotDominant { vertex }, notes));
    }
    Ok(Verdict::pass(1, notes))
}

/// Whether the coabelian ideal annihilated by `sp` is of type `FP_n`: every
/// realisable living subgraph must pass [`fp_codim1`].
pub fn fp_ideal(
    g: &Graph,
    sp: &CharacterSpace,
    n: usize,
    conv: Convention,
    limits: &Limits,
) -> Result<Verdict> {
    check_space(g, sp)?;
    let supports = sp.realizable_supports(limits)?;
    let notes = vec![
        format!("convention: {conv}"),
        format!(
            "checked {} realizable supports over {} (finite reduction over living subgraphs)",
            supports.len(),
            sp.field()
        ),
    ];
    for found in supports {
        let inner = fp_codim1(g, &found.witness, n, conv, limits)?;
        if !inner.holds {
            let witness = Witness::Support {
                support: found.support,
                inner: Box::new(inner),
            };
            return Ok(Verdict::fail(n, witness, notes));
        }
    }
    Ok(Verdict::pass(n, notes))
}

fn check_space(g: &Graph, sp: &CharacterSpace) -> Result<()> {
    if sp.vertex_count() != g.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "character space on {} vertices for a graph with {}",
            sp.vertex_count(),
            g.vertex_count()
        )));
    }
    Ok(())
}

/// Order complex of `{A ∈ candidates : below ⊊ A}` under strict inclusion.
fn upper_order_complex(
    g: &Graph,
    candidates: &[Clique],
    below: VertexSet,
    limits: &Limits,
) -> Result<SimplicialComplex> {
    let members: Vec<VertexSet> = candidates
        .iter()
        .map(Clique::as_set)
        .filter(|a| below.is_subset(*a) && *a != below)
        .collect();
    let labels = members
        .iter()
        .map(|a| format!("{{{}}}", names(g, a.iter()).join(",")))
        .collect();
    SimplicialComplex::order_complex(
        labels,
        |i, j| members[i] != members[j] && members[i].is_subset(members[j]),
        limits,
    )
}

/// Sufficient condition for `FP_n`: for every clique `Z` on which the space
/// does not have full rank, the link of `Z` in the order complex of the
/// full-rank cliques must be `(n - |Z| - 1)`-acyclic.
///
/// A failing verdict means no conclusion, not that `FP_n` fails.
pub fn thm_g_sufficient(
    g: &Graph,
    sp: &CharacterSpace,
    n: usize,
    limits: &Limits,
) -> Result<Verdict> {
    check_space(g, sp)?;
    let field = sp.field();
    let k = sp.dim();
    let all = g.enumerate_cliques(usize::MAX, limits)?;
    let (full, deficient): (Vec<Clique>, Vec<Clique>) = all
        .into_iter()
        .partition(|a| sp.restriction_rank(a.as_set()) == k);
    for z in deficient {
        let top = n as isize - z.len() as isize - 1;
        if top < -1 {
            continue;
        }
        let link = upper_order_complex(g, &full, z.as_set(), limits)?;
        if let Some((degree, betti)) = link.first_nonacyclic_degree(top, field) {
            let notes = vec![format!(
                "sufficient condition not met: no conclusion about FP_{n}"
            )];
            return Ok(Verdict::fail(
                n,
                Witness::OrderComplexLink {
                    clique: z,
                    degree,
                    betti,
                },
                notes,
            ));
        }
    }
    Ok(Verdict::pass(
        n,
        vec![format!("sufficient condition met: FP_{n} guaranteed")],
    ))
}

/// Betti numbers of the two sides compared by [`cross_check_p1_p2`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub clique: Clique,
    /// Order complex of `{A clique : A meets Γ_χ, Z ⊆ A}`.
    pub p1: BettiVector,
    /// `lk_{Δ_{Γ_χ}}(Z)`.
    pub link: BettiVector,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        let top = self
            .p1
            .keys()
            .chain(self.link.keys())
            .copied()
            .max()
            .unwrap_or(-1);
        (-1..=top).all(|j| {
            self.p1.get(&j).copied().unwrap_or(0) == self.link.get(&j).copied().unwrap_or(0)
        })
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "clique": names(g, self.clique.members().iter().copied()),
            "p1_betti": self.p1,
            "link_betti": self.link,
            "agrees": self.agrees(),
        })
    }
}

pub fn cross_check_details(
    g: &Graph,
    chi: &Character,
    z: &Clique,
    limits: &Limits,
) -> Result<CrossCheck> {
    let living = living_subgraph(g, chi)?.vertices();
    let zs = z.as_set();
    if !g.is_clique(zs)
        || z.members().iter().any(|&v| v >= g.vertex_count())
        || !zs.intersection(living).is_empty()
    {
        return Err(Error::InvalidArgument(format!(
            "{:?} is not a dead clique",
            z.members()
        )));
    }
    let field = chi.field();
    let all = g.enumerate_cliques(usize::MAX, limits)?;
    let p1: Vec<Clique> = all
        .into_iter()
        .filter(|a| !a.as_set().intersection(living).is_empty())
        .collect();
    // every member of p1 strictly contains the dead clique z
    let p1 = upper_order_complex(g, &p1, zs, limits)?;
    let link = living_link(g, living, z, usize::MAX - 1, limits)?;
    Ok(CrossCheck {
        clique: z.clone(),
        p1: p1.betti_vector(field),
        link: link.betti_vector(field),
    })
}

/// Whether the poset of cliques meeting `Γ_χ` and containing `Z` has the same
/// reduced Betti numbers as the link of `Z` in the living flag complex.
pub fn cross_check_p1_p2(g: &Graph, chi: &Character, z: &Clique, limits: &Limits) -> Result<bool> {
    Ok(cross_check_details(g, chi, z, limits)?.agrees())
}

/// Recomputes the Betti number cited by a link witness for the living set `living`.
///
/// Support witnesses are re-checked with the indicator character of the support,
/// which must give the same inner verdict.
pub fn verify_witness(
    g: &Graph,
    living: VertexSet,
    field: FieldSpec,
    witness: &Witness,
    conv: Convention,
    limits: &Limits,
) -> Result<bool> {
    Ok(match witness {
        Witness::Link {
            dead_clique,
            degree,
            betti,
        } => {
            if !dead_clique.as_set().intersection(living).is_empty() {
                return Ok(false);
            }
            let link = living_link(
                g,
                living,
                dead_clique,
                (*degree + 1).max(0) as usize,
                limits,
            )?;
            *betti != 0 && link.reduced_betti(*degree, field) == *betti
        }
        Witness::Support { support, inner } => {
            let indicator: Vec<i64> = (0..g.vertex_count())
                .map(|v| support.vertices().contains(v) as i64)
                .collect();
            let chi = Character::from_i64(field, &indicator);
            let again = fp_codim1(g, &chi, inner.n, conv, limits)?;
            again == **inner
                && match &inner.witness {
                    Some(w) => verify_witness(g, support.vertices(), field, w, conv, limits)?,
                    None => false,
                }
        }
        Witness::NotConnected { components } => {
            components.len() >= 2
                && components
                    .iter()
                    .fold(VertexSet::EMPTY, |acc, c| acc.union(*c))
                    == living
                && components.iter().all(|c| g.is_connected(*c))
        }
        Witness::NotDominant { vertex } => {
            !living.contains(*vertex) && g.neighbors(*vertex).intersection(living).is_empty()
        }
        Witness::OrderComplexLink { .. } | Witness::GradedHomology { .. } => {
            return Err(Error::InvalidArgument(
                "witness kind is not a codimension-one link witness".into(),
            ))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Matrix;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn limits() -> Limits {
        Limits::default()
    }

    fn c4() -> Graph {
        Graph::numbered(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn path3() -> Graph {
        Graph::numbered(3, &[(0, 1), (1, 2)]).unwrap()
    }

    /// Living path 1–3–2 plus dead vertex 4 adjacent to 1 and 2.
    fn discriminator() -> Graph {
        Graph::numbered(4, &[(0, 2), (1, 2), (0, 3), (1, 3)]).unwrap()
    }

    #[test]
    fn two_points_are_not_fp1() {
        let g = Graph::numbered(2, &[]).unwrap();
        let v = fp_codim1(
            &g,
            &Character::from_i64(Q, &[1, 1]),
            1,
            Convention::Shifted,
            &limits(),
        )
        .unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Witness::Link {
                dead_clique: Clique::empty(),
                degree: 0,
                betti: 1
            })
        );
    }

    #[test]
    fn four_cycle() {
        let ones = Character::from_i64(Q, &[1, 1, 1, 1]);
        assert!(
            fp_codim1(&c4(), &ones, 1, Convention::Shifted, &limits())
                .unwrap()
                .holds
        );
        let v = fp_codim1(&c4(), &ones, 2, Convention::Shifted, &limits()).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Witness::Link {
                dead_clique: Clique::empty(),
                degree: 1,
                betti: 1
            })
        );
    }

    #[test]
    fn discriminator_separates_conventions() {
        let g = discriminator();
        let chi = Character::from_i64(Q, &[1, 1, 1, 0]);
        assert!(
            fp_codim1(&g, &chi, 1, Convention::Shifted, &limits())
                .unwrap()
                .holds
        );
        let uniform = fp_codim1(&g, &chi, 1, Convention::Uniform, &limits()).unwrap();
        assert!(!uniform.holds);
        assert_eq!(
            uniform.witness,
            Some(Witness::Link {
                dead_clique: Clique::new(vec![3]),
                degree: 0,
                betti: 1
            })
        );
        assert!(
            !fp_codim1(&g, &chi, 2, Convention::Shifted, &limits())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn fp0_always_holds() {
        let g = Graph::numbered(2, &[]).unwrap();
        let chi = Character::from_i64(Q, &[1, 0]);
        for conv in [Convention::Shifted, Convention::Uniform] {
            assert!(fp_codim1(&g, &chi, 0, conv, &limits()).unwrap().holds);
        }
    }

    #[test]
    fn zero_character_is_rejected() {
        let chi = Character::from_i64(Q, &[0, 0, 0]);
        assert!(fp_codim1(&path3(), &chi, 1, Convention::Shifted, &limits()).is_err());
        assert!(fg_corollary_e(&path3(), &chi).is_err());
    }

    #[test]
    fn finite_generation_examples() {
        let edge = Graph::numbered(2, &[(0, 1)]).unwrap();
        assert!(
            fg_corollary_e(&edge, &Character::from_i64(Q, &[1, 1]))
                .unwrap()
                .holds
        );

        let v = fg_corollary_e(&path3(), &Character::from_i64(Q, &[1, 0, 0])).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(Witness::NotDominant { vertex: 2 }));
        assert_eq!(
            v.to_json(&path3())["witness"],
            json!({"reason": "not dominant", "vertex": "3"})
        );

        let two = Graph::numbered(2, &[]).unwrap();
        let v = fg_corollary_e(&two, &Character::from_i64(Q, &[1, 1])).unwrap();
        assert!(
            matches!(v.witness, Some(Witness::NotConnected { ref components }) if components.len() == 2)
        );
    }

    #[test]
    fn ideal_examples() {
        let edge = Graph::numbered(2, &[(0, 1)]).unwrap();
        let full = CharacterSpace::new(Matrix::identity(Q, 2)).unwrap();
        for n in 0..=4 {
            assert!(
                fp_ideal(&edge, &full, n, Convention::Shifted, &limits())
                    .unwrap()
                    .holds
            );
        }
        let two = Graph::numbered(2, &[]).unwrap();
        let v = fp_ideal(&two, &full, 1, Convention::Shifted, &limits()).unwrap();
        assert!(!v.holds);
        assert!(matches!(v.witness, Some(Witness::Support { .. })));

        let chi = Character::from_i64(Q, &[1, 1, 1, 0]);
        let sp = CharacterSpace::from_characters(Q, std::slice::from_ref(&chi)).unwrap();
        for n in 0..4 {
            let a = fp_ideal(&discriminator(), &sp, n, Convention::Shifted, &limits()).unwrap();
            let b = fp_codim1(&discriminator(), &chi, n, Convention::Shifted, &limits()).unwrap();
            assert_eq!(a.holds, b.holds);
        }
    }

    #[test]
    fn sufficient_condition_examples() {
        let edge = Graph::numbered(2, &[(0, 1)]).unwrap();
        let full = CharacterSpace::new(Matrix::identity(Q, 2)).unwrap();
        for n in 0..=5 {
            assert!(thm_g_sufficient(&edge, &full, n, &limits()).unwrap().holds);
        }

        let two = Graph::numbered(2, &[]).unwrap();
        let v = thm_g_sufficient(&two, &full, 0, &limits()).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Witness::OrderComplexLink {
                clique: Clique::empty(),
                degree: -1,
                betti: 1
            })
        );
        assert!(v.notes[0].contains("no conclusion"));

        let ones =
            CharacterSpace::from_characters(Q, &[Character::from_i64(Q, &[1, 1, 1, 1])]).unwrap();
        assert!(thm_g_sufficient(&c4(), &ones, 1, &limits()).unwrap().holds);
        assert!(!thm_g_sufficient(&c4(), &ones, 2, &limits()).unwrap().holds);
    }

    #[test]
    fn cross_check_examples() {
        let ones = Character::from_i64(Q, &[1, 1, 1, 1]);
        let cc = cross_check_details(&c4(), &ones, &Clique::empty(), &limits()).unwrap();
        assert!(cc.agrees());
        assert_eq!(cc.p1.get(&1), Some(&1));

        let tri = Graph::numbered(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let chi = Character::from_i64(Q, &[1, 0, 0]);
        assert!(cross_check_p1_p2(&tri, &chi, &Clique::new(vec![1]), &limits()).unwrap());

        let cc = cross_check_details(&path3(), &chi, &Clique::new(vec![2]), &limits()).unwrap();
        assert!(cc.agrees());
        assert_eq!(cc.link.get(&-1), Some(&1));

        assert!(cross_check_p1_p2(&path3(), &chi, &Clique::new(vec![0]), &limits()).is_err());
    }

    #[test]
    fn witnesses_reverify() {
        let ones = Character::from_i64(Q, &[1, 1, 1, 1]);
        let v = fp_codim1(&c4(), &ones, 2, Convention::Shifted, &limits()).unwrap();
        let w = v.witness.unwrap();
        assert!(verify_witness(
            &c4(),
            c4().vertices(),
            Q,
            &w,
            Convention::Shifted,
            &limits()
        )
        .unwrap());

        let two = Graph::numbered(2, &[]).unwrap();
        let full = CharacterSpace::new(Matrix::identity(Q, 2)).unwrap();
        let v = fp_ideal(&two, &full, 1, Convention::Shifted, &limits()).unwrap();
        let w = v.witness.unwrap();
        assert!(
            verify_witness(&two, two.vertices(), Q, &w, Convention::Shifted, &limits()).unwrap()
        );

        let forged = Witness::Link {
            dead_clique: Clique::empty(),
            degree: 0,
            betti: 1,
        };
        assert!(!verify_witness(
            &c4(),
            c4().vertices(),
            Q,
            &forged,
            Convention::Shifted,
            &limits()
        )
        .unwrap());
    }
}
