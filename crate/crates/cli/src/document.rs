//! Tiling documents: a versioned, line-oriented text format.
//!
//! ```text
//! dodecatile-tiling 1
//! type 5
//! angles <alpha> <beta> <gamma> <delta>
//! lengths <a> <b> <c>
//! symmetry <class> <order>
//! vertices <n>
//! v <x> <y> <z>
//! faces <m>
//! f <i0> <i1> <i2> <i3> <i4> | <corner labels> | <edge labels>
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a written
//! document reproduces it bit for bit. Faces are counterclockwise seen
//! from outside and follow the tile order of the type 5 fixture.

use std::fmt::Write as _;

use dodecatile::pentagon::SphericalPentagon;
use dodecatile::sphere_geom::{geodesic_distance, UnitVector};
use dodecatile::tilings::{AngleLabel, LengthLabel};
use dodecatile::type5::{SymmetryClass, Type5Tiling};
use dodecatile::EdgeLabel;

use crate::CliError;

pub const TILING_FORMAT: &str = "dodecatile-tiling";
pub const TILING_VERSION: u32 = 1;
const MERGE_TOL: f64 = 1e-9;
const NORM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub vertices: [usize; 5],
    pub corners: [AngleLabel; 5],
    pub edges: [LengthLabel; 5],
}

#[derive(Clone, Debug, PartialEq)]
pub struct TilingDocument {
    pub type_id: u8,
    /// alpha, beta, gamma, delta.
    pub angles: [f64; 4],
    /// a, b, c.
    pub lengths: [f64; 3],
    pub symmetry: (SymmetryClass, usize),
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Face>,
}

fn length_label(l: EdgeLabel) -> LengthLabel {
    match l {
        EdgeLabel::B => LengthLabel::B,
        EdgeLabel::C => LengthLabel::C,
        _ => LengthLabel::A,
    }
}

impl TilingDocument {
    /// Shared corners are merged into single vertices.
    pub fn from_tiling(t: &Type5Tiling, corners: &[[AngleLabel; 5]], symmetry: (SymmetryClass, usize)) -> Self {
        let mut vertices: Vec<UnitVector> = Vec::new();
        let mut faces = Vec::new();
        for (tile, labels) in t.tiles.iter().zip(corners) {
            let idx = tile.vertices().map(|p| match vertices.iter().position(|q| geodesic_distance(&p, q).value() < MERGE_TOL) {
                Some(i) => i,
                None => {
                    vertices.push(p);
                    vertices.len() - 1
                }
            });
            faces.push(Face { vertices: idx, corners: *labels, edges: tile.edges().labels().map(length_label) });
        }
        TilingDocument {
            type_id: 5,
            angles: [t.params.alpha(), t.params.beta, t.params.gamma, t.params.delta()],
            lengths: t.lengths,
            symmetry,
            vertices: vertices.iter().map(|v| [v.x(), v.y(), v.z()]).collect(),
            faces,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{TILING_FORMAT} {TILING_VERSION}\n");
        let _ = writeln!(s, "type {}", self.type_id);
        let [al, be, ga, de] = self.angles;
        let _ = writeln!(s, "angles {al:?} {be:?} {ga:?} {de:?}");
        let [a, b, c] = self.lengths;
        let _ = writeln!(s, "lengths {a:?} {b:?} {c:?}");
        let _ = writeln!(s, "symmetry {} {}", self.symmetry.0.name(), self.symmetry.1);
        let _ = writeln!(s, "vertices {}", self.vertices.len());
        for [x, y, z] in &self.vertices {
            let _ = writeln!(s, "v {x:?} {y:?} {z:?}");
        }
        let _ = writeln!(s, "faces {}", self.faces.len());
        for f in &self.faces {
            let idx: Vec<String> = f.vertices.iter().map(|i| i.to_string()).collect();
            let corners: Vec<String> = f.corners.iter().map(|c| c.symbol().to_string()).collect();
            let edges: Vec<String> = f.edges.iter().map(|e| e.symbol().to_string()).collect();
            let _ = writeln!(s, "f {} | {} | {}", idx.join(" "), corners.join(" "), edges.join(" "));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let mut next = |what: &str| {
            lines.next().map(|(n, l)| (n + 1, l.trim())).ok_or_else(|| CliError::Parse(format!("unexpected end of document, expected {what}")))
        };
        let (n, header) = next("header")?;
        if header != format!("{TILING_FORMAT} {TILING_VERSION}") {
            return Err(CliError::Parse(format!("line {n}: unsupported header '{header}'")));
        }
        let (n, l) = next("type")?;
        let type_id = field(n, l, "type")?.parse().map_err(|_| bad(n, "type id"))?;
        let (n, l) = next("angles")?;
        let angles = floats::<4>(n, field(n, l, "angles")?)?;
        let (n, l) = next("lengths")?;
        let lengths = floats::<3>(n, field(n, l, "lengths")?)?;
        let (n, l) = next("symmetry")?;
        let mut sym = field(n, l, "symmetry")?.split_whitespace();
        let class = sym.next().and_then(SymmetryClass::parse).ok_or_else(|| bad(n, "symmetry class"))?;
        let order = sym.next().and_then(|o| o.parse().ok()).ok_or_else(|| bad(n, "symmetry order"))?;
        let (n, l) = next("vertices")?;
        let nv: usize = field(n, l, "vertices")?.parse().map_err(|_| bad(n, "vertex count"))?;
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (n, l) = next("vertex")?;
            let v = floats::<3>(n, field(n, l, "v")?)?;
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(CliError::Parse(format!("line {n}: vertex norm {norm} is not 1")));
            }
            vertices.push(v);
        }
        let (n, l) = next("faces")?;
        let nf: usize = field(n, l, "faces")?.parse().map_err(|_| bad(n, "face count"))?;
        let mut faces = Vec::with_capacity(nf);
        for _ in 0..nf {
            let (n, l) = next("face")?;
            let parts: Vec<&str> = field(n, l, "f")?.split('|').collect();
            if parts.len() != 3 {
                return Err(bad(n, "face (expected indices | corners | edges)"));
            }
            let idx: Vec<usize> = parts[0].split_whitespace().map(|s| s.parse().map_err(|_| bad(n, "vertex index"))).collect::<Result<_, _>>()?;
            let idx: [usize; 5] = idx.try_into().map_err(|_| bad(n, "face (expected 5 indices)"))?;
            if idx.iter().any(|&i| i >= nv) {
                return Err(CliError::Parse(format!("line {n}: vertex index out of range")));
            }
            let corners = five(n, parts[1], "corner label", AngleLabel::parse)?;
            let edges = five(n, parts[2], "edge label", LengthLabel::parse)?;
            faces.push(Face { vertices: idx, corners, edges });
        }
        if let Ok((n, _)) = next("") {
            return Err(CliError::Parse(format!("line {n}: trailing content")));
        }
        Ok(TilingDocument { type_id, angles, lengths, symmetry: (class, order), vertices, faces })
    }

    /// Tiles rebuilt from the stored vertices; angles and edges are measured.
    pub fn tiles(&self) -> Result<Vec<SphericalPentagon>, CliError> {
        let points: Vec<UnitVector> = self
            .vertices
            .iter()
            .map(|&[x, y, z]| UnitVector::new(x, y, z).map_err(|e| CliError::Parse(e.to_string())))
            .collect::<Result<_, _>>()?;
        self.faces
            .iter()
            .map(|f| {
                let labels = f.edges.map(EdgeLabel::from);
                SphericalPentagon::from_vertices(f.vertices.map(|i| points[i]), labels).map_err(|e| CliError::Parse(e.to_string()))
            })
            .collect()
    }
}

fn bad(line: usize, what: &str) -> CliError {
    CliError::Parse(format!("line {line}: bad {what}"))
}

fn field<'a>(line: usize, l: &'a str, key: &str) -> Result<&'a str, CliError> {
    l.strip_prefix(key)
        .filter(|rest| rest.is_empty() || rest.starts_with(' '))
        .map(str::trim)
        .ok_or_else(|| CliError::Parse(format!("line {line}: expected '{key}'")))
}

fn floats<const N: usize>(line: usize, s: &str) -> Result<[f64; N], CliError> {
    let v: Vec<f64> = s.split_whitespace().map(|x| x.parse().map_err(|_| bad(line, "number"))).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| CliError::Parse(format!("line {line}: expected {N} numbers")))
}

fn five<T>(line: usize, s: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<[T; 5], CliError> {
    let v: Vec<T> = s.split_whitespace().map(|x| f(x).ok_or_else(|| bad(line, what))).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| CliError::Parse(format!("line {line}: expected 5 of {what}")))
}
