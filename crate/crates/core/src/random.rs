//! Seeded random instances for the self-test and the acceptance suite.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::character::{Character, CharacterSpace};
use crate::exactfield::{FieldSpec, Matrix, Scalar};
use crate::graph::Graph;

/// A graph, a nonzero character and a target `n`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Graph,
    pub character: Character,
    pub n: usize,
}

/// A graph, a character space of dimension `k` and a target `n`.
#[derive(Clone, Debug)]
pub struct SpaceInstance {
    pub graph: Graph,
    pub space: CharacterSpace,
    pub n: usize,
}

pub struct InstanceGenerator {
    rng: ChaCha8Rng,
    max_vertices: usize,
    fields: Vec<FieldSpec>,
    max_n: usize,
}

impl InstanceGenerator {
    /// `fields` is cycled through uniformly at random; it must not be empty.
    pub fn new(seed: u64, max_vertices: usize, fields: Vec<FieldSpec>) -> Self {
        assert!(!fields.is_empty(), "at least one field");
        assert!((1..=crate::graph::MAX_VERTICES).contains(&max_vertices));
        InstanceGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_vertices,
            fields,
            max_n: 4,
        }
    }

    pub fn with_max_n(mut self, max_n: usize) -> Self {
        self.max_n = max_n;
        self
    }

    fn field(&mut self) -> FieldSpec {
        self.fields[self.rng.gen_range(0..self.fields.len())]
    }

    /// `G(v, 1/2)` with `v` uniform in `1..=max_vertices`.
    pub fn graph(&mut self) -> Graph {
        let v = self.rng.gen_range(1..=self.max_vertices);
        let mut edges = Vec::new();
        for a in 0..v {
            for b in a + 1..v {
                if self.rng.gen_bool(0.5) {
                    edges.push((a, b));
                }
            }
        }
        Graph::numbered(v, &edges).expect("simple graph")
    }

    fn nonzero_scalar(&mut self, field: FieldSpec) -> Scalar {
        match field {
            FieldSpec::Rationals => {
                let mut num = self.rng.gen_range(1..=4i64);
                if self.rng.gen_bool(0.5) {
                    num = -num;
                }
                let den = self.rng.gen_range(1..=3i64);
                field
                    .from_ratio(&BigInt::from(num), &BigInt::from(den))
                    .expect("nonzero denominator")
            }
            FieldSpec::Prime(p) => field.from_i64(self.rng.gen_range(1..p as i64)),
        }
    }

    fn scalar(&mut self, field: FieldSpec) -> Scalar {
        if self.rng.gen_ratio(1, 3) {
            field.zero()
        } else {
            self.nonzero_scalar(field)
        }
    }

    /// Roughly a third of the values are zero; never identically zero.
    pub fn character(&mut self, g: &Graph, field: FieldSpec) -> Character {
        let mut values: Vec<Scalar> = (0..g.vertex_count()).map(|_| self.scalar(field)).collect();
        if values.iter().all(Scalar::is_zero) {
            let v = self.rng.gen_range(0..values.len());
            values[v] = self.nonzero_scalar(field);
        }
        Character::new(field, values).expect("matching length")
    }

    /// `k` independent characters (fewer if the graph has fewer vertices).
    pub fn space(&mut self, g: &Graph, field: FieldSpec, k: usize) -> CharacterSpace {
        let k = k.min(g.vertex_count());
        loop {
            let rows: Vec<Vec<Scalar>> = (0..k)
                .map(|_| (0..g.vertex_count()).map(|_| self.scalar(field)).collect())
                .collect();
            let m = Matrix::from_rows(field, rows, g.vertex_count()).expect("rectangular");
            if m.rank() == k {
                return CharacterSpace::new(m).expect("independent rows");
            }
        }
    }

    pub fn instance(&mut self) -> Instance {
        let graph = self.graph();
        let field = self.field();
        let character = self.character(&graph, field);
        let n = self.rng.gen_range(0..=self.max_n);
        Instance {
            graph,
            character,
            n,
        }
    }

    /// Space instance with `k` uniform in `{1, 2}`.
    pub fn space_instance(&mut self) -> SpaceInstance {
        let graph = self.graph();
        let field = self.field();
        let k = self.rng.gen_range(1..=2);
        let space = self.space(&graph, field, k);
        let n = self.rng.gen_range(0..=self.max_n);
        SpaceInstance { graph, space, n }
    }
}
