use proptest::prelude::*;

use raag_fp::character::{living_subgraph, Character, CharacterSpace};
use raag_fp::decider::{
    fg_corollary_e, fp_codim1, fp_ideal, thm_g_sufficient, verify_witness, Convention,
};
use raag_fp::exactfield::{FieldSpec, Matrix};
use raag_fp::graph::{Clique, Graph, Limits, VertexSet};
use raag_fp::oracle::{graded_homology, CliqueChainComplex, Normalization};
use raag_fp::scomplex::SimplicialComplex;

const Q: FieldSpec = FieldSpec::Rationals;

fn limits() -> Limits {
    Limits::default()
}

fn graph_strategy(max_vertices: usize) -> impl Strategy<Value = Graph> {
    (1..=max_vertices).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        edges.push((a, b));
                    }
                    k += 1;
                }
            }
            Graph::numbered(n, &edges).unwrap()
        })
    })
}

/// A graph with a character whose entries lie in -2..=2, not all zero.
fn instance_strategy(max_vertices: usize) -> impl Strategy<Value = (Graph, Vec<i64>)> {
    graph_strategy(max_vertices).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), proptest::collection::vec(-2i64..=2, n))
            .prop_filter("nonzero character", |(_, v)| v.iter().any(|&x| x != 0))
    })
}

fn int_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
    })
}

fn fields() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(Q),
        Just(FieldSpec::Prime(2)),
        Just(FieldSpec::Prime(5)),
        Just(FieldSpec::Prime(101))
    ]
}

/// Integer determinant by cofactor expansion.
fn det(m: &[Vec<i64>]) -> i128 {
    if m.is_empty() {
        return 1;
    }
    let mut total = 0i128;
    for (j, &x) in m[0].iter().enumerate() {
        if x == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * x as i128 * det(&minor);
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect()
}

/// Rank as the size of the largest nonvanishing minor.
fn minor_rank(m: &[Vec<i64>], p: Option<i128>) -> usize {
    let (r, c) = (m.len(), m[0].len());
    (1..=r.min(c))
        .rev()
        .find(|&k| {
            subsets(r, k).iter().any(|rows| {
                subsets(c, k).iter().any(|cols| {
                    let sub: Vec<Vec<i64>> = rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| m[i][j]).collect())
                        .collect();
                    let d = det(&sub);
                    match p {
                        None => d != 0,
                        Some(p) => d.rem_euclid(p) != 0,
                    }
                })
            })
        })
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(rows in int_matrix(5, 6), field in fields()) {
        let m = Matrix::from_i64_rows(field, &rows).unwrap();
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.rows(), m.cols());
        prop_assert_eq!(kernel.rank(), kernel.rows());
        prop_assert!(m.mul(&kernel.transpose()).unwrap().is_zero());
    }

    #[test]
    fn rank_matches_largest_nonzero_minor(rows in int_matrix(4, 4)) {
        let expected = minor_rank(&rows, None);
        prop_assert_eq!(Matrix::from_i64_rows(Q, &rows).unwrap().rank(), expected);
        let expected = minor_rank(&rows, Some(5));
        prop_assert_eq!(Matrix::from_i64_rows(FieldSpec::Prime(5), &rows).unwrap().rank(), expected);
    }

    #[test]
    fn rank_invariant_under_row_operations(
        rows in int_matrix(5, 5),
        field in fields(),
        seed in any::<u64>(),
        scale in 1i64..50,
    ) {
        let m = Matrix::from_i64_rows(field, &rows).unwrap();
        let mut permuted = rows.clone();
        let len = permuted.len();
        permuted.rotate_left((seed as usize) % len);
        let target = (seed as usize / 7) % len;
        let s = field.from_i64(scale);
        prop_assume!(!s.is_zero());
        let mut scaled = Matrix::from_i64_rows(field, &permuted).unwrap();
        for c in 0..scaled.cols() {
            let v = scaled.get(target, c).mul(&s).unwrap();
            scaled.set(target, c, v).unwrap();
        }
        prop_assert_eq!(scaled.rank(), m.rank());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn fermat_and_inverse(a in 1i64..1_000_000, p in prop_oneof![Just(2u32), Just(5), Just(101), Just(2_147_483_647)]) {
        let field = FieldSpec::Prime(p);
        let x = field.from_i64(a);
        prop_assume!(!x.is_zero());
        prop_assert_eq!(x.pow(p as u64 - 1), field.one());
        prop_assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), field.one());
    }

    #[test]
    fn boundary_of_boundary_vanishes(g in graph_strategy(7), field in fields()) {
        let k = SimplicialComplex::flag_complex(&g, 6, &limits()).unwrap();
        for d in 0..=k.dimension() {
            let dd = k.boundary_matrix(d, field).mul(&k.boundary_matrix(d + 1, field)).unwrap();
            prop_assert!(dd.is_zero());
        }
    }

    #[test]
    fn euler_characteristic_is_field_independent(g in graph_strategy(7), field in fields()) {
        let k = SimplicialComplex::flag_complex(&g, 6, &limits()).unwrap();
        let alternating: i64 = k
            .betti_vector(field)
            .iter()
            .map(|(&j, &b)| if j.rem_euclid(2) == 0 { b as i64 } else { -(b as i64) })
            .sum();
        prop_assert_eq!(alternating, k.reduced_euler_characteristic());
    }

    #[test]
    fn betti_numbers_survive_relabelling(g in graph_strategy(7), seed in any::<u64>(), field in fields()) {
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let edges: Vec<(usize, usize)> = g.edges().map(|(a, b)| (perm[a], perm[b])).collect();
        let h = Graph::numbered(n, &edges).unwrap();
        let a = SimplicialComplex::flag_complex(&g, 6, &limits()).unwrap();
        let b = SimplicialComplex::flag_complex(&h, 6, &limits()).unwrap();
        prop_assert_eq!(a.betti_vector(field), b.betti_vector(field));
    }

    #[test]
    fn cliques_are_closed_under_subsets(g in graph_strategy(8), cap in 0usize..5) {
        let cliques = g.enumerate_cliques(cap, &limits()).unwrap();
        let sets: std::collections::BTreeSet<u64> = cliques.iter().map(|c| c.as_set().0).collect();
        for c in &cliques {
            prop_assert!(c.len() <= cap);
            for r in 0..c.len() {
                prop_assert!(sets.contains(&c.without(r).as_set().0));
            }
        }
        // brute force: every subset that is a clique of size <= cap is listed
        let n = g.vertex_count();
        let expected = (0u64..1 << n).filter(|&m| VertexSet(m).len() <= cap && g.is_clique(VertexSet(m))).count();
        prop_assert_eq!(cliques.len(), expected);
    }

    #[test]
    fn graph_link_is_antitone(g in graph_strategy(8)) {
        let cliques = g.enumerate_cliques(usize::MAX, &limits()).unwrap();
        for w in &cliques {
            let lw = g.link_in_graph(w).unwrap();
            for r in 0..w.len() {
                let smaller = g.link_in_graph(&w.without(r)).unwrap();
                prop_assert!(lw.is_subset(smaller));
            }
        }
        prop_assert!(g.is_dominant(g.vertices()));
        for v in 0..g.vertex_count() {
            prop_assert!(g.is_connected(VertexSet::singleton(v)));
        }
    }

    #[test]
    fn restriction_rank_is_monotone(rows in int_matrix(3, 6), mask in any::<u64>()) {
        let m = Matrix::from_i64_rows(Q, &rows).unwrap();
        prop_assume!(m.rank() == m.rows());
        let sp = CharacterSpace::new(m).unwrap();
        let all = VertexSet::full(sp.vertex_count());
        let s = VertexSet(mask).intersection(all);
        let r = sp.restriction_rank(s);
        prop_assert!(r <= sp.dim());
        for v in all.difference(s).iter() {
            prop_assert!(sp.restriction_rank(s.union(VertexSet::singleton(v))) >= r);
        }
    }

    #[test]
    fn rational_supports_have_exact_witnesses(rows in int_matrix(3, 6)) {
        let m = Matrix::from_i64_rows(Q, &rows).unwrap();
        prop_assume!(m.rank() == m.rows());
        let sp = CharacterSpace::new(m.clone()).unwrap();
        for found in sp.realizable_supports(&limits()).unwrap() {
            prop_assert_eq!(found.witness.support(), found.support.vertices());
            // the witness lies in the row space
            let mut stacked: Vec<Vec<_>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
            stacked.push(found.witness.values().to_vec());
            let aug = Matrix::from_rows(Q, stacked, m.cols()).unwrap();
            prop_assert_eq!(aug.rank(), m.rank());
        }
    }

    #[test]
    fn supports_agree_over_q_and_large_primes(rows in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 1..=5), 1..=3)) {
        let cols = rows[0].len();
        let rows: Vec<Vec<i64>> = rows.into_iter().map(|mut r| { r.resize(cols, 0); r }).collect();
        let support_sets = |field: FieldSpec| -> Option<Vec<VertexSet>> {
            let m = Matrix::from_i64_rows(field, &rows).unwrap();
            if m.rank() != m.rows() {
                return None;
            }
            let sp = CharacterSpace::new(m).unwrap();
            Some(sp.realizable_supports(&limits()).unwrap().into_iter().map(|s| s.support.vertices()).collect())
        };
        let over_q = support_sets(Q);
        prop_assume!(over_q.is_some());
        // 3x3 minors with entries in -2..=2 are below 101 in absolute value
        for p in [101, 103] {
            prop_assert_eq!(&support_sets(FieldSpec::Prime(p)), &over_q);
        }
    }

    #[test]
    fn single_character_has_single_support((g, values) in instance_strategy(6)) {
        let chi = Character::from_i64(Q, &values);
        let sp = CharacterSpace::from_characters(Q, std::slice::from_ref(&chi)).unwrap();
        let supports = sp.realizable_supports(&limits()).unwrap();
        prop_assert_eq!(supports.len(), 1);
        prop_assert_eq!(supports[0].support, living_subgraph(&g, &chi).unwrap());
    }

    #[test]
    fn fp_is_monotone_in_n((g, values) in instance_strategy(7), field in fields()) {
        let chi = Character::from_i64(field, &values);
        prop_assume!(!chi.is_zero());
        for conv in [Convention::Shifted, Convention::Uniform] {
            let verdicts: Vec<bool> =
                (0..=5).map(|n| fp_codim1(&g, &chi, n, conv, &limits()).unwrap().holds).collect();
            prop_assert!(verdicts.windows(2).all(|w| w[0] || !w[1]), "{:?}", verdicts);
            prop_assert!(verdicts[0]);
        }
    }

    #[test]
    fn uniform_implies_shifted((g, values) in instance_strategy(7), n in 0usize..5) {
        let chi = Character::from_i64(Q, &values);
        let uniform = fp_codim1(&g, &chi, n, Convention::Uniform, &limits()).unwrap();
        let shifted = fp_codim1(&g, &chi, n, Convention::Shifted, &limits()).unwrap();
        prop_assert!(!uniform.holds || shifted.holds);
    }

    #[test]
    fn verdict_depends_only_on_support((g, values) in instance_strategy(7), scales in proptest::collection::vec(1i64..=4, 7), n in 0usize..5) {
        let chi = Character::from_i64(Q, &values);
        let rescaled: Vec<i64> = values.iter().zip(&scales).map(|(v, s)| v * s).collect();
        let other = Character::from_i64(Q, &rescaled);
        let a = fp_codim1(&g, &chi, n, Convention::Shifted, &limits()).unwrap();
        let b = fp_codim1(&g, &other, n, Convention::Shifted, &limits()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn witnesses_reverify((g, values) in instance_strategy(7), n in 0usize..5, field in fields()) {
        let chi = Character::from_i64(field, &values);
        prop_assume!(!chi.is_zero());
        for v in [
            fp_codim1(&g, &chi, n, Convention::Shifted, &limits()).unwrap(),
            fg_corollary_e(&g, &chi).unwrap(),
        ] {
            if let Some(w) = &v.witness {
                prop_assert!(verify_witness(&g, chi.support(), field, w, Convention::Shifted, &limits()).unwrap());
            }
        }
    }

    #[test]
    fn sufficient_condition_is_sufficient(g in graph_strategy(6), rows in int_matrix(2, 6), n in 0usize..4) {
        let cols = g.vertex_count();
        let rows: Vec<Vec<i64>> = rows.into_iter().map(|mut r| { r.resize(cols, 1); r }).collect();
        let m = Matrix::from_i64_rows(Q, &rows).unwrap();
        prop_assume!(m.rank() == m.rows());
        let sp = CharacterSpace::new(m).unwrap();
        if thm_g_sufficient(&g, &sp, n, &limits()).unwrap().holds {
            prop_assert!(fp_ideal(&g, &sp, n, Convention::Shifted, &limits()).unwrap().holds);
        }
    }

    #[test]
    fn graded_homology_is_basis_independent((g, values) in instance_strategy(6), n in 0usize..4) {
        let chi = Character::from_i64(FieldSpec::Prime(5), &values);
        prop_assume!(!chi.is_zero());
        let s = g.clique_number();
        let a = graded_homology(&g, &chi, n, s + 2, Normalization::Renormalized, &limits()).unwrap();
        let b = graded_homology(&g, &chi, n, s + 2, Normalization::Raw, &limits()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn clique_complex_differential_squares_to_zero((g, values) in instance_strategy(7)) {
        let chi = Character::from_i64(Q, &values);
        for norm in [Normalization::Renormalized, Normalization::Raw] {
            // construction checks d∘d = 0 itself
            let c = CliqueChainComplex::build_with(&g, &chi, 8, norm, &limits()).unwrap();
            prop_assert_eq!(c.homology(-1).unwrap(), 0);
            prop_assert_eq!(c.basis(-1), &[Clique::empty()][..]);
        }
    }
}
