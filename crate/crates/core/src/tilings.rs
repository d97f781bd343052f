//! Combinatorial tilings of the sphere by twelve pentagons.
//!
//! The five tiling types are stored as plain-text fixtures, one row per tile:
//!
//! ```text
//! type 5
//!  0 | δ α β γ α | a a c b b |  2.3  3.3  4.3  5.3  1.3  # comment
//! ```
//!
//! Corners are listed counterclockwise (interior on the left); edge `i`
//! joins corner `i` to corner `i + 1`; partner `t.e` is edge `e` of tile
//! `t`, traversed the other way. Vertex cycles are derived from the gluing.
//! Angle labels may also be written as `alpha`, `beta`, `gamma`, `delta`,
//! `epsilon`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::pentagon::{EdgeLabel, SphericalPentagon};
use crate::sphere_geom::{best_orthogonal_fit, geodesic_distance};

/// Residual bound for a realization to count as valid.
pub const VALID_TOL: f64 = 1e-7;

pub const TILE_COUNT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TilingError {
    #[error("unknown tiling type {0} (expected 1..=5)")]
    UnknownType(u8),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expected {TILE_COUNT} tiles, found {0}")]
    TileCount(usize),
    #[error("edge {tile}.{edge} is glued inconsistently: {message}")]
    Gluing { tile: usize, edge: usize, message: String },
    #[error("Euler characteristic V - E + F = {v} - {e} + {f} is not 2")]
    Euler { v: usize, e: usize, f: usize },
    #[error("vertex containing corner {tile}.{corner} has degree {degree}, expected 3")]
    VertexDegree { tile: usize, corner: usize, degree: usize },
    #[error("expected {expected} tiles, got {got}")]
    IndexMismatch { expected: usize, got: usize },
    #[error("angle relations are {0}")]
    AngleSystem(&'static str),
    #[error("cannot match the geometric tiles to the combinatorics: {0}")]
    Alignment(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AngleLabel {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Epsilon,
}

impl AngleLabel {
    pub const ALL: [AngleLabel; 5] = [Self::Alpha, Self::Beta, Self::Gamma, Self::Delta, Self::Epsilon];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> char {
        ['α', 'β', 'γ', 'δ', 'ε'][self.index()]
    }

    pub fn name(self) -> &'static str {
        ["alpha", "beta", "gamma", "delta", "epsilon"][self.index()]
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| s == l.name() || s.chars().eq(std::iter::once(l.symbol())))
    }
}

impl fmt::Display for AngleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Length class of an edge: normal (a), thick (b), dashed (c).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LengthLabel {
    A,
    B,
    C,
}

impl LengthLabel {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "a" => Some(Self::A),
            "b" => Some(Self::B),
            "c" => Some(Self::C),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        ['a', 'b', 'c'][self as usize]
    }
}

impl From<LengthLabel> for EdgeLabel {
    fn from(l: LengthLabel) -> EdgeLabel {
        match l {
            LengthLabel::A => EdgeLabel::A,
            LengthLabel::B => EdgeLabel::B,
            LengthLabel::C => EdgeLabel::C,
        }
    }
}

/// Corner and edge labels of one tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TileSlots {
    pub corners: [AngleLabel; 5],
    pub edges: [LengthLabel; 5],
}

/// A corner or edge slot: (tile, index).
pub type Slot = (usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct CombinatorialTiling {
    type_id: u8,
    tiles: Vec<TileSlots>,
    gluings: Vec<[Slot; 5]>,
    vertex_cycles: Vec<Vec<Slot>>,
}

/// Fixture for one of the five tiling types.
pub fn builtin(type_id: u8) -> Result<CombinatorialTiling, TilingError> {
    let text = match type_id {
        1 => include_str!("../fixtures/type1.tiling"),
        2 => include_str!("../fixtures/type2.tiling"),
        3 => include_str!("../fixtures/type3.tiling"),
        4 => include_str!("../fixtures/type4.tiling"),
        5 => include_str!("../fixtures/type5.tiling"),
        other => return Err(TilingError::UnknownType(other)),
    };
    CombinatorialTiling::parse(text)
}

fn parse_err(line: usize, message: impl Into<String>) -> TilingError {
    TilingError::Parse { line, message: message.into() }
}

fn parse_five<T>(field: &str, line: usize, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<[T; 5], TilingError> {
    let items: Vec<T> = field
        .split_whitespace()
        .map(|s| f(s).ok_or_else(|| parse_err(line, format!("bad {what} '{s}'"))))
        .collect::<Result<_, _>>()?;
    items
        .try_into()
        .map_err(|v: Vec<T>| parse_err(line, format!("expected 5 {what}s, found {}", v.len())))
}

impl CombinatorialTiling {
    /// Parses the fixture format and checks every invariant: symmetric
    /// gluing with matching length labels, V - E + F = 2, degree-3 vertices.
    pub fn parse(text: &str) -> Result<Self, TilingError> {
        let mut type_id = None;
        let mut tiles = Vec::new();
        let mut gluings = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("type") {
                let id: u8 = rest.trim().parse().map_err(|_| parse_err(line, "bad type id"))?;
                type_id = Some(id);
                continue;
            }
            let fields: Vec<&str> = content.split('|').collect();
            if fields.len() != 4 {
                return Err(parse_err(line, "expected 4 '|'-separated fields"));
            }
            let index: usize = fields[0].trim().parse().map_err(|_| parse_err(line, "bad tile index"))?;
            if index != tiles.len() {
                return Err(parse_err(line, format!("tile {index} out of order")));
            }
            let corners = parse_five(fields[1], line, "angle label", AngleLabel::parse)?;
            let edges = parse_five(fields[2], line, "edge label", LengthLabel::parse)?;
            let partners = parse_five(fields[3], line, "partner", |s| {
                let (t, e) = s.split_once('.')?;
                Some((t.parse().ok()?, e.parse().ok()?))
            })?;
            tiles.push(TileSlots { corners, edges });
            gluings.push(partners);
        }
        let type_id = type_id.ok_or_else(|| parse_err(0, "missing 'type' line"))?;
        Self::from_parts(type_id, tiles, gluings)
    }

    pub fn from_parts(type_id: u8, tiles: Vec<TileSlots>, gluings: Vec<[Slot; 5]>) -> Result<Self, TilingError> {
        if tiles.len() != TILE_COUNT {
            return Err(TilingError::TileCount(tiles.len()));
        }
        for (t, partners) in gluings.iter().enumerate() {
            for (i, &(u, j)) in partners.iter().enumerate() {
                let bad = |message: String| TilingError::Gluing { tile: t, edge: i, message };
                if u >= tiles.len() || j >= 5 {
                    return Err(bad(format!("partner {u}.{j} does not exist")));
                }
                if u == t {
                    return Err(bad("glued to its own tile".into()));
                }
                if gluings[u][j] != (t, i) {
                    let (x, y) = gluings[u][j];
                    return Err(bad(format!("partner {u}.{j} points back to {x}.{y}")));
                }
                if tiles[t].edges[i] != tiles[u].edges[j] {
                    return Err(bad(format!(
                        "length label {} differs from partner's {}",
                        tiles[t].edges[i].symbol(),
                        tiles[u].edges[j].symbol()
                    )));
                }
            }
        }
        // corner i of t is the start of edge i; the partner edge ends there
        let mut seen = vec![[false; 5]; tiles.len()];
        let mut vertex_cycles = Vec::new();
        for t in 0..tiles.len() {
            for i in 0..5 {
                if seen[t][i] {
                    continue;
                }
                let mut cycle = Vec::new();
                let (mut u, mut k) = (t, i);
                while !seen[u][k] {
                    seen[u][k] = true;
                    cycle.push((u, k));
                    let (w, j) = gluings[u][k];
                    (u, k) = (w, (j + 1) % 5);
                }
                if (u, k) != (t, i) {
                    return Err(TilingError::Gluing { tile: t, edge: i, message: "corner cycle does not close".into() });
                }
                if cycle.len() != 3 {
                    return Err(TilingError::VertexDegree { tile: t, corner: i, degree: cycle.len() });
                }
                vertex_cycles.push(cycle);
            }
        }
        let (v, e, f) = (vertex_cycles.len(), tiles.len() * 5 / 2, tiles.len());
        if v + f != e + 2 {
            return Err(TilingError::Euler { v, e, f });
        }
        Ok(CombinatorialTiling { type_id, tiles, gluings, vertex_cycles })
    }

    pub fn type_id(&self) -> u8 {
        self.type_id
    }

    pub fn tiles(&self) -> &[TileSlots] {
        &self.tiles
    }

    pub fn gluings(&self) -> &[[Slot; 5]] {
        &self.gluings
    }

    pub fn vertex_cycles(&self) -> &[Vec<Slot>] {
        &self.vertex_cycles
    }

    /// Sorted corner labels of each vertex.
    pub fn vertex_labels(&self) -> Vec<Vec<AngleLabel>> {
        self.vertex_cycles
            .iter()
            .map(|c| {
                let mut l: Vec<AngleLabel> = c.iter().map(|&(t, i)| self.tiles[t].corners[i]).collect();
                l.sort();
                l
            })
            .collect()
    }

    /// Angle labels that occur on some tile.
    pub fn used_labels(&self) -> BTreeSet<AngleLabel> {
        self.tiles.iter().flat_map(|t| t.corners).collect()
    }

    /// Serializes back to the fixture format.
    pub fn to_text(&self) -> String {
        let mut out = format!("type {}\n", self.type_id);
        for (t, (slots, partners)) in self.tiles.iter().zip(&self.gluings).enumerate() {
            let corners: Vec<String> = slots.corners.iter().map(|c| c.symbol().to_string()).collect();
            let edges: Vec<String> = slots.edges.iter().map(|e| e.symbol().to_string()).collect();
            let partners: Vec<String> = partners.iter().map(|(u, j)| format!("{u}.{j}")).collect();
            let _ = writeln!(out, "{t} | {} | {} | {}", corners.join(" "), edges.join(" "), partners.join(" "));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    /// Angles around one vertex sum to 2pi.
    Vertex,
    /// Angles of one tile sum to 3pi + pi/3 (area pi/3).
    Excess,
}

/// `sum coefficients[l] * l = rhs_thirds * pi / 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AngleRelation {
    pub coefficients: [u32; 5],
    pub rhs_thirds: u32,
    pub kind: RelationKind,
}

impl AngleRelation {
    pub fn rhs(&self) -> f64 {
        self.rhs_thirds as f64 * PI / 3.0
    }

    /// lhs - rhs at the given assignment.
    pub fn residual(&self, angles: &AngleAssignment) -> f64 {
        let lhs: f64 = self.coefficients.iter().zip(angles.values.iter()).map(|(&c, &x)| c as f64 * x).sum();
        lhs - self.rhs()
    }
}

impl fmt::Display for AngleRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = AngleLabel::ALL
            .iter()
            .zip(self.coefficients)
            .filter(|(_, c)| *c > 0)
            .map(|(l, c)| if c == 1 { l.to_string() } else { format!("{c}{l}") })
            .collect();
        let rhs = match self.rhs_thirds {
            6 => "2π".to_string(),
            r if r % 3 == 0 => format!("{}π", r / 3),
            r => format!("{r}π/3"),
        };
        write!(f, "{} = {}", terms.join(" + "), rhs)
    }
}

/// One equation per distinct vertex type, then the tile excess equation.
pub fn vertex_angle_relations(ct: &CombinatorialTiling) -> Vec<AngleRelation> {
    let mut out: Vec<AngleRelation> = Vec::new();
    for labels in ct.vertex_labels() {
        let mut coefficients = [0; 5];
        for l in labels {
            coefficients[l.index()] += 1;
        }
        let rel = AngleRelation { coefficients, rhs_thirds: 6, kind: RelationKind::Vertex };
        if !out.contains(&rel) {
            out.push(rel);
        }
    }
    let mut coefficients = [0; 5];
    for l in ct.tiles[0].corners {
        coefficients[l.index()] += 1;
    }
    out.push(AngleRelation { coefficients, rhs_thirds: 10, kind: RelationKind::Excess });
    out
}

/// Values of alpha..epsilon; labels a tiling never uses stay at zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleAssignment {
    pub values: [f64; 5],
}

impl AngleAssignment {
    pub fn uniform(x: f64) -> Self {
        AngleAssignment { values: [x; 5] }
    }

    pub fn get(&self, l: AngleLabel) -> f64 {
        self.values[l.index()]
    }

    pub fn max_residual(&self, relations: &[AngleRelation]) -> f64 {
        relations.iter().map(|r| r.residual(self).abs()).fold(0.0, f64::max)
    }

    /// Angle word of a tile in corner order.
    pub fn word(&self, slots: &TileSlots) -> [f64; 5] {
        slots.corners.map(|l| self.get(l))
    }
}

/// Solves the vertex relations with some labels pinned. Fails if the pinned
/// values leave a used label undetermined or contradict the relations.
pub fn solve_angles(ct: &CombinatorialTiling, pinned: &[(AngleLabel, f64)]) -> Result<AngleAssignment, TilingError> {
    let relations = vertex_angle_relations(ct);
    let used: Vec<AngleLabel> = ct.used_labels().into_iter().collect();
    let rows = relations.len() + pinned.len();
    let mut m = DMatrix::zeros(rows, used.len());
    let mut rhs = DVector::zeros(rows);
    for (r, rel) in relations.iter().enumerate() {
        for (c, l) in used.iter().enumerate() {
            m[(r, c)] = rel.coefficients[l.index()] as f64;
        }
        rhs[r] = rel.rhs();
    }
    for (k, &(label, value)) in pinned.iter().enumerate() {
        let Some(c) = used.iter().position(|&l| l == label) else {
            return Err(TilingError::AngleSystem("pinning a label the tiling does not use"));
        };
        m[(relations.len() + k, c)] = 1.0;
        rhs[relations.len() + k] = value;
    }
    let svd = m.clone().svd(true, true);
    if svd.rank(1e-9) < used.len() {
        return Err(TilingError::AngleSystem("underdetermined"));
    }
    let x = svd.solve(&rhs, 1e-12).map_err(|_| TilingError::AngleSystem("singular"))?;
    if (&m * &x - &rhs).amax() > 1e-9 {
        return Err(TilingError::AngleSystem("inconsistent"));
    }
    let mut values = [0.0; 5];
    for (c, l) in used.iter().enumerate() {
        values[l.index()] = x[c];
    }
    Ok(AngleAssignment { values })
}

/// How a tile is congruent to the reference tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Congruence {
    Proper,
    Reflected,
}

impl Congruence {
    fn name(self) -> &'static str {
        match self {
            Congruence::Proper => "proper",
            Congruence::Reflected => "reflected",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub type_id: u8,
    /// Largest |sum of corner angles at a vertex - 2pi|.
    pub max_vertex_angle_residual: f64,
    /// Largest spread between the positions of corners meant to coincide.
    pub max_vertex_gap: f64,
    /// Largest endpoint displacement between two glued edge copies.
    pub max_edge_mismatch: f64,
    /// Largest |length difference| between two glued edge copies.
    pub max_edge_length_mismatch: f64,
    /// Per tile: best alignment residual against tile 0 and its kind.
    pub congruence: Vec<(Congruence, f64)>,
    pub max_congruence_deviation: f64,
    /// Sum of tile areas minus 4pi.
    pub area_deviation: f64,
    pub simple: Vec<bool>,
    pub valid: bool,
}

impl ValidationReport {
    /// Line-oriented `key value` text.
    pub fn to_text(&self) -> String {
        let mut s = String::from("validation-report 1\n");
        let _ = writeln!(s, "type {}", self.type_id);
        let _ = writeln!(s, "valid {}", self.valid);
        let _ = writeln!(s, "max_vertex_angle_residual {:e}", self.max_vertex_angle_residual);
        let _ = writeln!(s, "max_vertex_gap {:e}", self.max_vertex_gap);
        let _ = writeln!(s, "max_edge_mismatch {:e}", self.max_edge_mismatch);
        let _ = writeln!(s, "max_edge_length_mismatch {:e}", self.max_edge_length_mismatch);
        let _ = writeln!(s, "max_congruence_deviation {:e}", self.max_congruence_deviation);
        let _ = writeln!(s, "area_deviation {:e}", self.area_deviation);
        for (t, ((kind, dev), simple)) in self.congruence.iter().zip(&self.simple).enumerate() {
            let _ = writeln!(s, "tile {t} simple {simple} congruence {} {dev:e}", kind.name());
        }
        s
    }
}

/// Best alignment of `tile` onto `reference` over the ten dihedral vertex
/// correspondences; proper and reflected fits are tracked separately.
pub fn congruence_deviation(reference: &SphericalPentagon, tile: &SphericalPentagon) -> (Congruence, f64) {
    let r = reference.vertices();
    let mut best = (Congruence::Proper, f64::INFINITY);
    for shift in 0..5 {
        for reversed in [false, true] {
            let target: Vec<_> = (0..5)
                .map(|k| {
                    let idx = if reversed { (shift + 5 - k) % 5 } else { (shift + k) % 5 };
                    tile.vertices()[idx]
                })
                .collect();
            for proper in [true, false] {
                let (_, dev) = best_orthogonal_fit(r, &target, proper);
                let kind = if proper { Congruence::Proper } else { Congruence::Reflected };
                let tie_to_proper = kind == Congruence::Proper && best.0 == Congruence::Reflected && dev <= best.1 + 1e-12;
                if dev < best.1 || tie_to_proper {
                    best = (kind, dev);
                }
            }
        }
    }
    best
}

/// Checks a geometric realization against its combinatorics. Tile `i`
/// vertex `k` must sit at corner slot `(i, k)` of `ct`.
pub fn validate_realization(ct: &CombinatorialTiling, tiles: &[SphericalPentagon]) -> Result<ValidationReport, TilingError> {
    if tiles.len() != ct.tiles.len() {
        return Err(TilingError::IndexMismatch { expected: ct.tiles.len(), got: tiles.len() });
    }
    let angles: Vec<[f64; 5]> = tiles.iter().map(|t| t.measured_angles()).collect();
    let mut max_vertex_angle_residual: f64 = 0.0;
    let mut max_vertex_gap: f64 = 0.0;
    for cycle in &ct.vertex_cycles {
        let sum: f64 = cycle.iter().map(|&(t, i)| angles[t][i]).sum();
        max_vertex_angle_residual = max_vertex_angle_residual.max((sum - 2.0 * PI).abs());
        for (x, &(t, i)) in cycle.iter().enumerate() {
            for &(u, j) in &cycle[x + 1..] {
                let d = geodesic_distance(&tiles[t].vertices()[i], &tiles[u].vertices()[j]).value();
                max_vertex_gap = max_vertex_gap.max(d);
            }
        }
    }
    let mut max_edge_mismatch: f64 = 0.0;
    let mut max_edge_length_mismatch: f64 = 0.0;
    for (t, partners) in ct.gluings.iter().enumerate() {
        let lengths_t = tiles[t].measured_edges();
        for (i, &(u, j)) in partners.iter().enumerate() {
            let (vt, vu) = (tiles[t].vertices(), tiles[u].vertices());
            let start = geodesic_distance(&vt[i], &vu[(j + 1) % 5]).value();
            let end = geodesic_distance(&vt[(i + 1) % 5], &vu[j]).value();
            max_edge_mismatch = max_edge_mismatch.max(start).max(end);
            let len_u = tiles[u].measured_edges()[j];
            max_edge_length_mismatch = max_edge_length_mismatch.max((lengths_t[i] - len_u).abs());
        }
    }
    let congruence: Vec<(Congruence, f64)> = tiles.iter().map(|t| congruence_deviation(&tiles[0], t)).collect();
    let max_congruence_deviation = congruence.iter().map(|c| c.1).fold(0.0, f64::max);
    let total_area: f64 = angles.iter().map(|a| a.iter().sum::<f64>() - 3.0 * PI).sum();
    let area_deviation = total_area - 4.0 * PI;
    let simple: Vec<bool> = tiles.iter().map(|t| t.is_simple()).collect();
    let valid = [max_vertex_angle_residual, max_vertex_gap, max_edge_mismatch, max_edge_length_mismatch, max_congruence_deviation, area_deviation.abs()]
        .iter()
        .all(|&r| r < VALID_TOL)
        && simple.iter().all(|&s| s);
    Ok(ValidationReport {
        type_id: ct.type_id,
        max_vertex_angle_residual,
        max_vertex_gap,
        max_edge_mismatch,
        max_edge_length_mismatch,
        congruence,
        max_congruence_deviation,
        area_deviation,
        simple,
        valid,
    })
}

/// Orders and rotates geometric tiles so that they line up with `ct`.
///
/// Each geometric tile comes with its corner labels in vertex order. The
/// tile matched to slot 0 is the first one whose labels fit; the rest are
/// found by walking the gluing and matching shared edges within `tol`.
pub fn align_realization(
    ct: &CombinatorialTiling,
    tiles: &[(SphericalPentagon, [AngleLabel; 5])],
    tol: f64,
) -> Result<Vec<SphericalPentagon>, TilingError> {
    if tiles.len() != ct.tiles.len() {
        return Err(TilingError::IndexMismatch { expected: ct.tiles.len(), got: tiles.len() });
    }
    let labels_fit = |g: usize, t: usize, shift: usize| (0..5).all(|k| tiles[g].1[(k + shift) % 5] == ct.tiles[t].corners[k]);
    let mut last_error = TilingError::Alignment("no geometric tile carries the labels of tile 0".into());
    for g0 in 0..tiles.len() {
        for s0 in 0..5 {
            if !labels_fit(g0, 0, s0) {
                continue;
            }
            match align_from(ct, tiles, tol, g0, s0, &labels_fit) {
                Ok(order) => {
                    return Ok(order.iter().map(|&(g, s)| tiles[g].0.rotated(s)).collect());
                }
                Err(e) => last_error = e,
            }
        }
    }
    Err(last_error)
}

fn align_from(
    ct: &CombinatorialTiling,
    tiles: &[(SphericalPentagon, [AngleLabel; 5])],
    tol: f64,
    g0: usize,
    s0: usize,
    labels_fit: &dyn Fn(usize, usize, usize) -> bool,
) -> Result<Vec<(usize, usize)>, TilingError> {
    let mut assigned: Vec<Option<(usize, usize)>> = vec![None; ct.tiles.len()];
    let mut owner: HashMap<usize, usize> = HashMap::new();
    assigned[0] = Some((g0, s0));
    owner.insert(g0, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        let (g, s) = assigned[t].unwrap();
        let v = tiles[g].0.vertices();
        for (i, &(u, j)) in ct.gluings[t].iter().enumerate() {
            let from = &v[(i + s) % 5];
            let to = &v[(i + 1 + s) % 5];
            // the partner walks the same edge backwards
            let found = tiles.iter().enumerate().find_map(|(h, (p, _))| {
                if h == g {
                    return None;
                }
                let w = p.vertices();
                (0..5).find_map(|m| {
                    let hit = geodesic_distance(&w[m], to).value() <= tol && geodesic_distance(&w[(m + 1) % 5], from).value() <= tol;
                    hit.then_some((h, (m + 5 - j) % 5))
                })
            });
            let Some((h, shift)) = found else {
                return Err(TilingError::Alignment(format!("no geometric tile shares edge {t}.{i}")));
            };
            if !labels_fit(h, u, shift) {
                return Err(TilingError::Alignment(format!("corner labels disagree across edge {t}.{i}")));
            }
            match assigned[u] {
                Some(existing) if existing != (h, shift) => {
                    return Err(TilingError::Alignment(format!("tile {u} matched twice")));
                }
                Some(_) => {}
                None => {
                    if owner.insert(h, u).is_some() {
                        return Err(TilingError::Alignment(format!("geometric tile {h} used twice")));
                    }
                    assigned[u] = Some((h, shift));
                    queue.push_back(u);
                }
            }
        }
    }
    assigned
        .into_iter()
        .enumerate()
        .map(|(t, a)| a.ok_or_else(|| TilingError::Alignment(format!("tile {t} unreachable"))))
        .collect()
}
