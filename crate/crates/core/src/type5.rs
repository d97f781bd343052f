//! The two-parameter type 5 family: tile solving, assembly by two 3-fold
//! rotations, symmetry detection and isohedrality.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::pentagon::{walk_raw, AngleWord, Containment, EdgeWord, PentagonError, SphericalPentagon};
use crate::solver::{newton, regular_edge, NEWTON_MAX_ITER};
use crate::sphere_geom::{best_orthogonal_fit, generate_group, geodesic_distance, GeomError, Isometry, UnitVector};
use crate::tilings::{
    align_realization, builtin, validate_realization, AngleAssignment, AngleLabel, CombinatorialTiling, TilingError, ValidationReport,
};

pub const ALPHA: f64 = 2.0 * PI / 3.0;
/// Largest change of beta or gamma between continuation steps.
pub const CONTINUATION_STEP: f64 = 0.05;
pub const CLOSURE_TOL: f64 = 1e-10;
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-7;
pub const OVERLAP_SAMPLES: usize = 10_000;
pub const OVERLAP_BOUNDARY_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 0x5eed_d0de;
pub const AREA_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Type5Error {
    #[error("unrealizable parameters beta = {beta}, gamma = {gamma}: {reason} (closure residual {residual:e})")]
    Unrealizable { beta: f64, gamma: f64, residual: f64, reason: String },
    #[error("rotations generate a group of order {0}, expected 12")]
    GroupOrder(usize),
    #[error("assembled tiles fail validation:\n{0}")]
    Invalid(String),
    #[error("{bad} of {samples} sample points are covered zero or several times")]
    Overlap { bad: usize, samples: usize },
    #[error("symmetry candidates are not closed under composition at tolerance {0:e}")]
    NotAGroup(f64),
    #[error("edge lengths say {lengths:?} but the detected group has order {order}")]
    SymmetryMismatch { lengths: SymmetryClass, order: usize },
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Pentagon(#[from] PentagonError),
}

/// alpha = 2pi/3 and delta = 2pi - beta - gamma are implied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Type5Params {
    pub beta: f64,
    pub gamma: f64,
}

impl Type5Params {
    pub fn new(beta: f64, gamma: f64) -> Self {
        Type5Params { beta, gamma }
    }

    pub fn regular() -> Self {
        Type5Params { beta: ALPHA, gamma: ALPHA }
    }

    pub fn alpha(&self) -> f64 {
        ALPHA
    }

    pub fn delta(&self) -> f64 {
        2.0 * PI - self.beta - self.gamma
    }

    /// beta, gamma, delta all in (0, pi).
    pub fn convex(&self) -> bool {
        [self.beta, self.gamma, self.delta()].iter().all(|&x| x > 0.0 && x < PI)
    }

    pub fn assignment(&self) -> AngleAssignment {
        AngleAssignment { values: [ALPHA, self.beta, self.gamma, self.delta(), 0.0] }
    }
}

fn tile_word(ct: &CombinatorialTiling, params: &Type5Params) -> [f64; 5] {
    params.assignment().word(&ct.tiles()[0])
}

fn closure_lengths(x: &DVector<f64>) -> [f64; 5] {
    // edge word a a c b b
    [x[0], x[0], x[2], x[1], x[1]]
}

/// Solves the tile's edge lengths (a, b, c) by Newton on the closure defect,
/// marching from the regular tile in steps of at most
/// [`CONTINUATION_STEP`].
pub fn solve_pentagon_type5(params: Type5Params) -> Result<SphericalPentagon, Type5Error> {
    let ct = builtin(5)?;
    let unrealizable = |residual: f64, reason: String| Type5Error::Unrealizable { beta: params.beta, gamma: params.gamma, residual, reason };
    let start = Type5Params::regular();
    let span = (params.beta - start.beta).abs().max((params.gamma - start.gamma).abs());
    let steps = (span / CONTINUATION_STEP).ceil().max(1.0) as usize;
    let a0 = regular_edge();
    let mut x = DVector::from_element(3, a0);
    let mut word = tile_word(&ct, &start);
    for k in 1..=steps {
        let t = k as f64 / steps as f64;
        let p = Type5Params::new(start.beta + t * (params.beta - start.beta), start.gamma + t * (params.gamma - start.gamma));
        word = tile_word(&ct, &p);
        let f = |y: &DVector<f64>| {
            let d = walk_raw(&closure_lengths(y), &word).defect;
            DVector::from_vec(vec![d.x, d.y, d.z])
        };
        let out = newton(&f, x.clone(), 1e-14, NEWTON_MAX_ITER).map_err(|e| unrealizable(f64::NAN, e.to_string()))?;
        if out.x.iter().any(|&l| !(l > 0.0 && l < PI)) {
            return Err(unrealizable(out.residual_norm, format!("edge lengths left (0, pi) at step {k}")));
        }
        x = out.x;
    }
    let lengths = closure_lengths(&x);
    let residual = walk_raw(&lengths, &word).closure_residual;
    if residual > CLOSURE_TOL {
        return Err(unrealizable(residual, "Newton did not close the tile".into()));
    }
    let labels = ct.tiles()[0].edges.map(Into::into);
    let edges = EdgeWord::new(lengths, labels).map_err(|e| unrealizable(residual, e.to_string()))?;
    let angles = AngleWord::new(word).map_err(|e| unrealizable(residual, e.to_string()))?;
    let tile = SphericalPentagon::from_words(edges, angles).map_err(|e| unrealizable(residual, e.to_string()))?;
    if !tile.is_simple() {
        return Err(unrealizable(residual, "tile is not simple".into()));
    }
    Ok(tile)
}

/// Counts of a point-location sweep over random points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OverlapReport {
    pub samples: usize,
    /// Points inside no tile and on no boundary, or inside several.
    pub bad: usize,
}

/// Uniform points on the sphere from a seeded generator.
pub fn sample_sphere(n: usize, seed: u64) -> Vec<UnitVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let z: f64 = rng.gen_range(-1.0..=1.0);
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            let r = (1.0 - z * z).max(0.0).sqrt();
            UnitVector::new(r * phi.cos(), r * phi.sin(), z).expect("point on the sphere")
        })
        .collect()
}

/// Every sample must be inside exactly one tile, or on some boundary.
pub fn overlap_check(tiles: &[SphericalPentagon], samples: usize, seed: u64) -> OverlapReport {
    let points = sample_sphere(samples, seed);
    let bad = points
        .par_iter()
        .filter(|q| {
            let mut inside = 0;
            let mut boundary = 0;
            for t in tiles {
                match t.contains(q, OVERLAP_BOUNDARY_TOL) {
                    Containment::Inside => inside += 1,
                    Containment::Boundary => boundary += 1,
                    Containment::Outside => {}
                }
            }
            !((inside == 1 && boundary == 0) || (inside == 0 && boundary > 0))
        })
        .count();
    OverlapReport { samples, bad }
}

#[derive(Clone, Debug)]
pub struct Type5Tiling {
    pub params: Type5Params,
    /// Ordered and rotated to match the type 5 fixture.
    pub tiles: Vec<SphericalPentagon>,
    /// (a, b, c): normal, thick, dashed.
    pub lengths: [f64; 3],
    /// The rotation group generated by the two 3-fold turns.
    pub rotations: Vec<Isometry>,
    pub generators: [Isometry; 2],
    /// Vertices where three alpha corners meet.
    pub dotted_axes: Vec<UnitVector>,
    pub report: ValidationReport,
    pub overlap: OverlapReport,
}

impl Type5Tiling {
    pub fn total_area(&self) -> f64 {
        self.tiles.iter().map(|t| t.area()).sum()
    }
}

/// Builds the tiling from one solved tile using the 3-fold rotations about
/// its two alpha corners, then validates it.
pub fn assemble(p: &SphericalPentagon) -> Result<Type5Tiling, Type5Error> {
    assemble_with_seed(p, DEFAULT_SEED)
}

pub fn assemble_with_seed(p: &SphericalPentagon, seed: u64) -> Result<Type5Tiling, Type5Error> {
    let ct = builtin(5)?;
    let corners = ct.tiles()[0].corners;
    let alpha_corners: Vec<usize> = (0..5).filter(|&i| corners[i] == AngleLabel::Alpha).collect();
    let v = p.vertices();
    let generators = [
        Isometry::rotation_about_axis(&v[alpha_corners[0]], ALPHA),
        Isometry::rotation_about_axis(&v[alpha_corners[1]], ALPHA),
    ];
    let rotations = generate_group(&generators, 1e-9, 60).map_err(|e| match e {
        GeomError::GroupTooLarge(n) => Type5Error::GroupOrder(n),
        other => other.into(),
    })?;
    if rotations.len() != 12 {
        return Err(Type5Error::GroupOrder(rotations.len()));
    }
    let images: Vec<_> = rotations.iter().map(|g| (p.transformed(g), corners)).collect();
    let tiles = align_realization(&ct, &images, 1e-7).map_err(|e| Type5Error::Invalid(e.to_string()))?;
    let report = validate_realization(&ct, &tiles)?;
    let overlap = overlap_check(&tiles, OVERLAP_SAMPLES, seed);
    let e = p.edges().lengths();
    let dotted_axes = ct
        .vertex_cycles()
        .iter()
        .filter(|c| c.iter().all(|&(t, i)| ct.tiles()[t].corners[i] == AngleLabel::Alpha))
        .map(|c| tiles[c[0].0].vertices()[c[0].1])
        .collect();
    let tiling = Type5Tiling {
        params: Type5Params::new(p.angles().values()[2], p.angles().values()[3]),
        tiles,
        lengths: [e[0], e[3], e[2]],
        rotations,
        generators,
        dotted_axes,
        report,
        overlap,
    };
    if !tiling.report.valid {
        return Err(Type5Error::Invalid(tiling.report.to_text()));
    }
    if (tiling.total_area() - 4.0 * PI).abs() > AREA_TOL {
        return Err(Type5Error::Invalid(format!("total area {} differs from 4pi", tiling.total_area())));
    }
    if overlap.bad > 0 {
        return Err(Type5Error::Overlap { bad: overlap.bad, samples: overlap.samples });
    }
    Ok(tiling)
}

/// Solve and assemble in one step.
pub fn build(params: Type5Params) -> Result<Type5Tiling, Type5Error> {
    assemble(&solve_pentagon_type5(params)?)
}

fn same_tile(p: &SphericalPentagon, q: &SphericalPentagon, tol: f64) -> bool {
    p.vertices().iter().all(|x| q.vertices().iter().any(|y| geodesic_distance(x, y).value() <= tol))
}

/// Index of the tile occupying the same place as `p`.
pub fn find_tile(tiles: &[SphericalPentagon], p: &SphericalPentagon, tol: f64) -> Option<usize> {
    tiles.iter().position(|t| same_tile(t, p, tol))
}

/// All isometries (rotations and reflections) mapping the tiling onto
/// itself. Candidates map tile 0 onto each tile under each of the ten
/// vertex correspondences; a candidate is kept if it sends every tile onto
/// a tile within `tol`.
pub fn symmetry_group(tiles: &[SphericalPentagon], tol: f64) -> Result<Vec<Isometry>, Type5Error> {
    let source = tiles[0].vertices();
    let candidates: Vec<(usize, usize, bool)> =
        (0..tiles.len()).flat_map(|j| (0..5).flat_map(move |s| [false, true].map(|r| (j, s, r)))).collect();
    let found: Vec<Isometry> = candidates
        .par_iter()
        .filter_map(|&(j, shift, reversed)| {
            let w = tiles[j].vertices();
            let target: Vec<UnitVector> = (0..5).map(|k| w[if reversed { (shift + 5 - k) % 5 } else { (shift + k) % 5 }]).collect();
            let (g, residual) = best_orthogonal_fit(source, &target, !reversed);
            (residual <= tol && tiles.iter().all(|t| find_tile(tiles, &t.transformed(&g), tol).is_some())).then_some(g)
        })
        .collect();
    let mut group: Vec<Isometry> = Vec::new();
    for g in found {
        if !group.iter().any(|h| h.approx_eq(&g, 1e-6)) {
            group.push(g);
        }
    }
    let closed = group.iter().all(|g| group.iter().all(|h| {
        let gh = g.compose(h);
        group.iter().any(|k| k.approx_eq(&gh, 1e-6))
    }));
    if !closed {
        return Err(Type5Error::NotAGroup(tol));
    }
    Ok(group)
}

/// Whether the orbit of tile 0 under `group` covers every tile.
pub fn is_isohedral_under(tiles: &[SphericalPentagon], group: &[Isometry], tol: f64) -> bool {
    let mut hit = vec![false; tiles.len()];
    for g in group {
        if let Some(k) = find_tile(tiles, &tiles[0].transformed(g), tol) {
            hit[k] = true;
        }
    }
    hit.iter().all(|&h| h)
}

pub fn is_isohedral(t: &Type5Tiling) -> bool {
    match symmetry_group(&t.tiles, DEFAULT_SYMMETRY_TOL) {
        Ok(group) => is_isohedral_under(&t.tiles, &group, DEFAULT_SYMMETRY_TOL),
        Err(_) => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryClass {
    /// Chiral tetrahedral.
    T,
    /// Pyritohedral.
    Th,
    /// Full icosahedral.
    Ih,
}

impl SymmetryClass {
    pub fn order(self) -> usize {
        match self {
            SymmetryClass::T => 12,
            SymmetryClass::Th => 24,
            SymmetryClass::Ih => 120,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::T => "T",
            SymmetryClass::Th => "Th",
            SymmetryClass::Ih => "Ih",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::T, Self::Th, Self::Ih].into_iter().find(|c| c.name() == s)
    }

    /// Expected class from the edge lengths (a, b, c).
    pub fn from_lengths(lengths: [f64; 3], tol: f64) -> Self {
        let [a, b, c] = lengths;
        match ((a - b).abs() <= tol, (b - c).abs() <= tol) {
            (true, true) => SymmetryClass::Ih,
            (true, false) => SymmetryClass::Th,
            _ => SymmetryClass::T,
        }
    }
}

/// Class from the edge lengths, checked against the detected group order.
pub fn classify_symmetry(t: &Type5Tiling, tol: f64) -> Result<SymmetryClass, Type5Error> {
    let class = SymmetryClass::from_lengths(t.lengths, tol);
    let order = symmetry_group(&t.tiles, DEFAULT_SYMMETRY_TOL)?.len();
    if order != class.order() {
        return Err(Type5Error::SymmetryMismatch { lengths: class, order });
    }
    Ok(class)
}
