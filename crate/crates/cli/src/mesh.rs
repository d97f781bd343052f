//! Wavefront OBJ export.
//!
//! Level 0 writes each tile as one chord pentagon. Level `k > 0` fans every
//! tile from its centroid into five triangles and splits each triangle four
//! ways `k` times, pushing new vertices onto the sphere.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::Vector3;

use crate::document::TilingDocument;

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vector3<f64>>,
    /// Zero-based vertex indices, counterclockwise from outside.
    pub faces: Vec<Vec<usize>>,
}

impl Mesh {
    pub fn from_document(doc: &TilingDocument, subdivisions: u32) -> Mesh {
        let mut vertices: Vec<Vector3<f64>> = doc.vertices.iter().map(|&[x, y, z]| Vector3::new(x, y, z)).collect();
        if subdivisions == 0 {
            let faces = doc.faces.iter().map(|f| f.vertices.to_vec()).collect();
            return Mesh { vertices, faces };
        }
        let mut triangles = Vec::new();
        for f in &doc.faces {
            let centre: Vector3<f64> = f.vertices.iter().map(|&i| vertices[i]).sum::<Vector3<f64>>().normalize();
            vertices.push(centre);
            let c = vertices.len() - 1;
            for k in 0..5 {
                triangles.push([f.vertices[k], f.vertices[(k + 1) % 5], c]);
            }
        }
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        for _ in 0..subdivisions {
            let mut mid = |i: usize, j: usize, vertices: &mut Vec<Vector3<f64>>| {
                *midpoints.entry((i.min(j), i.max(j))).or_insert_with(|| {
                    vertices.push((vertices[i] + vertices[j]).normalize());
                    vertices.len() - 1
                })
            };
            triangles = triangles
                .iter()
                .flat_map(|&[a, b, c]| {
                    let ab = mid(a, b, &mut vertices);
                    let bc = mid(b, c, &mut vertices);
                    let ca = mid(c, a, &mut vertices);
                    [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
                })
                .collect();
        }
        Mesh { vertices, faces: triangles.into_iter().map(|t| t.to_vec()).collect() }
    }

    pub fn to_obj(&self) -> String {
        let mut s = String::from("# dodecatile mesh\n");
        for v in &self.vertices {
            let _ = writeln!(s, "v {:?} {:?} {:?}", v.x, v.y, v.z);
        }
        for f in &self.faces {
            let idx: Vec<String> = f.iter().map(|i| (i + 1).to_string()).collect();
            let _ = writeln!(s, "f {}", idx.join(" "));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::Face;
    use dodecatile::tilings::{AngleLabel, LengthLabel};
    use dodecatile::type5::SymmetryClass;

    /// Cube corners with one face that repeats a corner; only indices and
    /// positions matter here.
    fn square_doc() -> TilingDocument {
        let s = 1.0 / 3f64.sqrt();
        let mut vertices = Vec::new();
        for &x in &[-s, s] {
            for &y in &[-s, s] {
                for &z in &[-s, s] {
                    vertices.push([x, y, z]);
                }
            }
        }
        let faces = vec![Face { vertices: [0, 1, 3, 2, 0], corners: [AngleLabel::Alpha; 5], edges: [LengthLabel::A; 5] }];
        TilingDocument { type_id: 5, angles: [0.0; 4], lengths: [0.0; 3], symmetry: (SymmetryClass::T, 12), vertices, faces }
    }

    #[test]
    fn subdivided_vertices_lie_on_the_sphere() {
        let doc = square_doc();
        for level in 0..3 {
            let m = Mesh::from_document(&doc, level);
            assert!(m.vertices.iter().all(|v| (v.norm() - 1.0).abs() < 1e-12));
            assert!(m.faces.iter().flatten().all(|&i| i < m.vertices.len()));
            if level > 0 {
                assert_eq!(m.faces.len(), 5 * 4usize.pow(level));
            }
        }
    }

    #[test]
    fn obj_indices_are_one_based() {
        let obj = Mesh::from_document(&square_doc(), 0).to_obj();
        assert!(obj.lines().any(|l| l == "f 1 2 4 3 1"));
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 8);
    }
}
