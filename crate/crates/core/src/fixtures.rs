//! Small named graphs and characters used by tests, the self-test and the docs.

use crate::character::{Character, CharacterSpace};
use crate::error::Result;
use crate::exactfield::{FieldSpec, Matrix};
use crate::graph::Graph;

/// Two vertices, no edges.
pub fn two_points() -> Graph {
    Graph::numbered(2, &[]).expect("valid")
}

/// A single edge.
pub fn edge() -> Graph {
    Graph::numbered(2, &[(0, 1)]).expect("valid")
}

/// Path 1–2–3.
pub fn path3() -> Graph {
    Graph::numbered(3, &[(0, 1), (1, 2)]).expect("valid")
}

pub fn triangle() -> Graph {
    Graph::numbered(3, &[(0, 1), (1, 2), (0, 2)]).expect("valid")
}

/// The 4-cycle 1–2–3–4–1.
pub fn c4() -> Graph {
    Graph::numbered(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).expect("valid")
}

/// Living path 1–3–2 plus vertex 4 adjacent to 1 and 2; pair with
/// [`discriminator_character`], which kills vertex 4.
///
/// The dead vertex has link two points, so `H̃_0` of its link is nonzero.
/// That obstructs `FP_2` but not `FP_1`.
pub fn discriminator() -> Graph {
    Graph::numbered(4, &[(0, 2), (1, 2), (0, 3), (1, 3)]).expect("valid")
}

pub fn discriminator_character(field: FieldSpec) -> Character {
    Character::from_i64(field, &[1, 1, 1, 0])
}

/// The constant character 1 on every vertex.
pub fn ones(g: &Graph, field: FieldSpec) -> Character {
    Character::from_i64(field, &vec![1; g.vertex_count()])
}

/// The full character space `K^V` (identity basis).
pub fn full_space(g: &Graph, field: FieldSpec) -> CharacterSpace {
    CharacterSpace::new(Matrix::identity(field, g.vertex_count()))
        .expect("identity rows are independent")
}

/// Triangles of the 6-vertex triangulation of the real projective plane.
///
/// Vertex 0 is joined to the pentagon 1..5, and the remaining five triangles
/// are `{i, i+1, i+3}` around the pentagon.
pub const RP2_TRIANGLES: [[usize; 3]; 10] = [
    [0, 1, 2],
    [0, 2, 3],
    [0, 3, 4],
    [0, 4, 5],
    [0, 1, 5],
    [1, 2, 4],
    [2, 3, 5],
    [1, 3, 4],
    [2, 4, 5],
    [1, 3, 5],
];

/// All nonempty faces of the RP² triangulation, as sorted vertex lists.
pub fn rp2_faces() -> Vec<Vec<usize>> {
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for t in RP2_TRIANGLES {
        for mask in 1u8..8 {
            let face: Vec<usize> = (0..3)
                .filter(|&k| mask & (1 << k) != 0)
                .map(|k| t[k])
                .collect();
            faces.push(face);
        }
    }
    for f in &mut faces {
        f.sort_unstable();
    }
    faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    faces.dedup();
    faces
}

/// Comparability graph of the face poset of the RP² triangulation.
///
/// Its flag complex is the barycentric subdivision, so it is a flag
/// triangulation of RP² on 31 vertices. Vertex names list the face's
/// vertices, e.g. `"024"`.
pub fn rp2_barycentric() -> Result<Graph> {
    let faces = rp2_faces();
    let names = faces
        .iter()
        .map(|f| f.iter().map(usize::to_string).collect::<String>())
        .collect();
    let mut edges = Vec::new();
    for (a, fa) in faces.iter().enumerate() {
        for (b, fb) in faces.iter().enumerate().skip(a + 1) {
            if fa.len() < fb.len() && fa.iter().all(|v| fb.contains(v)) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(names, &edges)
}
