//! Root finding for the two-equation systems of types 2 and 3, root
//! classification, and the rigidity scans for types 1 and 4.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use thiserror::Error;

use crate::pentagon::{realism_bound_check, sign_law, walk_raw, AngleWord, EdgeLabel, EdgeWord, Lemma3Status, SphericalPentagon};
use crate::sphere_geom::{quad_fourth_edge, ArcLength};
use crate::tilings::{builtin, solve_angles, AngleAssignment, AngleLabel, LengthLabel, TileSlots, TilingError};

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;
pub const NEWTON_DAMPING: f64 = 0.5;
/// Refined roots with a larger residual are discarded.
pub const ROOT_ACCEPT: f64 = 1e-10;
/// Max-norm distance under which two roots are merged.
pub const DEDUP_RADIUS: f64 = 1e-6;
pub const BOUNDARY_TOL: f64 = 1e-6;
pub const DEFAULT_GRID: usize = 400;
/// A tile closes when its walk ends this close to where it started.
pub const CLOSURE_TOL: f64 = 1e-9;
pub const RIGIDITY_SAMPLES: usize = 200;
pub const RIGIDITY_HALF_WIDTH: f64 = 0.5;

const TWO_THIRDS_PI: f64 = 2.0 * PI / 3.0;
const FOUR_THIRDS_PI: f64 = 4.0 * PI / 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("non-finite value at {0:?}")]
    NonFinite(Vec<f64>),
    #[error("type {0} has no two-equation system (expected 2 or 3)")]
    NotTwoEquationType(u8),
    #[error("type {0} has no rigidity scan (expected 1 or 4)")]
    NotRigidityType(u8),
    #[error(transparent)]
    Tiling(#[from] TilingError),
}

/// Root of `f` in `[lo, hi]`; stops once the bracket is narrower than
/// `tol * max(1, |x|)`.
pub fn bisect_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64, SolverError> {
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) {
        return Err(SolverError::NonFinite(vec![lo, hi]));
    }
    if flo.signum() == fhi.signum() {
        return Err(SolverError::NoSignChange { lo, hi, flo, fhi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * mid.abs().max(1.0) || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Central angle of one edge of the equiangular, equilateral pentagon with
/// side `a` and corners 2pi/3, minus 2pi/5. Zero at the regular edge.
pub fn regular_closure_defect(a: f64) -> f64 {
    let (s, c) = (TWO_THIRDS_PI / 2.0).sin_cos();
    (a.cos() * s * s - c * c).clamp(-1.0, 1.0).acos() - 2.0 * PI / 5.0
}

/// Edge of the regular dodecahedral tiling.
pub fn regular_edge() -> f64 {
    bisect_1d(regular_closure_defect, 0.1, 1.2, 1e-15).expect("bracket holds a sign change")
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOutcome {
    pub x: DVector<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    /// Ratio of extreme singular values of the final Jacobian.
    pub condition: f64,
    pub converged: bool,
}

fn jacobian(f: &dyn Fn(&DVector<f64>) -> DVector<f64>, x: &DVector<f64>, m: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(m, x.len());
    for k in 0..x.len() {
        let h = 1e-7 * x[k].abs().max(1.0);
        let (mut xp, mut xm) = (x.clone(), x.clone());
        xp[k] += h;
        xm[k] -= h;
        j.set_column(k, &((f(&xp) - f(&xm)) / (2.0 * h)));
    }
    j
}

fn condition_number(j: &DMatrix<f64>) -> f64 {
    let sv = j.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

/// Damped Gauss-Newton with a central-difference Jacobian. Works for square
/// and overdetermined systems; a step that does not reduce the residual is
/// halved until it does.
pub fn newton(f: &dyn Fn(&DVector<f64>) -> DVector<f64>, x0: DVector<f64>, tol: f64, max_iter: usize) -> Result<NewtonOutcome, SolverError> {
    let mut x = x0;
    let mut fx = f(&x);
    let m = fx.len();
    let mut norm = fx.norm();
    let mut iterations = 0;
    while norm >= tol && iterations < max_iter {
        if !norm.is_finite() {
            return Err(SolverError::NonFinite(x.iter().copied().collect()));
        }
        iterations += 1;
        let j = jacobian(f, &x, m);
        let Ok(step) = j.svd(true, true).solve(&fx, 1e-14) else {
            break;
        };
        let mut scale = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let trial = &x - &step * scale;
            let ft = f(&trial);
            let nt = ft.norm();
            if nt.is_finite() && nt < norm {
                x = trial;
                fx = ft;
                norm = nt;
                improved = true;
                break;
            }
            scale *= NEWTON_DAMPING;
        }
        if !improved {
            break;
        }
    }
    let condition = condition_number(&jacobian(f, &x, m));
    Ok(NewtonOutcome { converged: norm < tol, x, residual_norm: norm, iterations, condition })
}

/// Cosine of the fourth side, via the closed form.
fn quad(a: f64, b: f64, c: f64, phi: f64, psi: f64) -> f64 {
    quad_fourth_edge(a, b, c, phi, psi)
}

/// Type 2 residuals. `r1` is the pole-to-equator distance condition written
/// out already divided by cos(a/2); `r2` is the midpoint condition.
pub fn type2_residuals(a: f64, beta: f64) -> (f64, f64) {
    let (sa, ca) = a.sin_cos();
    let (sh, ch) = (a / 2.0).sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (s4, c4) = FOUR_THIRDS_PI.sin_cos();
    let r1 = ca * ca + 2.0 * sh * (sa * ch * cb + ca * sh * c4) + 2.0 * sh * sh * (sb * s4 - ca * cb * c4);
    let r2 = quad(a / 2.0, a, a / 2.0, FOUR_THIRDS_PI - beta, beta) - (PI / 3.0).cos();
    (r1, r2)
}

/// Type 3 residuals: both paths run over sides (a, a, a/2) and must end on
/// the equator, divided by cos(a/2).
pub fn type3_residuals(a: f64, beta: f64) -> (f64, f64) {
    let h = (a / 2.0).cos();
    let gamma = FOUR_THIRDS_PI - beta;
    let r1 = quad(a, a, a / 2.0, gamma, 2.0 * PI - gamma) / h;
    let r2 = quad(a, a, a / 2.0, beta, 2.0 * PI - beta) / h;
    (r1, r2)
}

pub fn residuals_for(type_id: u8) -> Result<fn(f64, f64) -> (f64, f64), SolverError> {
    match type_id {
        2 => Ok(type2_residuals),
        3 => Ok(type3_residuals),
        t => Err(SolverError::NotTwoEquationType(t)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub a: (f64, f64),
    pub beta: (f64, f64),
}

impl Rect {
    pub fn contains(&self, a: f64, beta: f64, tol: f64) -> bool {
        a >= self.a.0 - tol && a <= self.a.1 + tol && beta >= self.beta.0 - tol && beta <= self.beta.1 + tol
    }
}

/// Region where roots are accepted, plus the (slightly different) region
/// that is sampled for sign changes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain {
    pub accept: Rect,
    pub scan: Rect,
}

impl Domain {
    /// (0, pi) x (0, 4pi/3). The scan stops short of a = 0 and a = pi, where
    /// the residuals degenerate, and runs 2% past both beta edges so that a
    /// root sitting on an edge is crossed by both zero curves.
    pub fn standard() -> Self {
        let margin = 0.02 * FOUR_THIRDS_PI;
        Domain {
            accept: Rect { a: (0.0, PI), beta: (0.0, FOUR_THIRDS_PI) },
            scan: Rect { a: (1e-9, PI - 1e-6), beta: (-margin, FOUR_THIRDS_PI + margin) },
        }
    }

    pub fn exact(rect: Rect) -> Self {
        Domain { accept: rect, scan: rect }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootTag {
    Regular,
    ExcludedBoundary,
    ExcludedUnrealistic,
    Unclassified,
}

impl RootTag {
    pub fn name(self) -> &'static str {
        match self {
            RootTag::Regular => "REGULAR",
            RootTag::ExcludedBoundary => "EXCLUDED_BOUNDARY",
            RootTag::ExcludedUnrealistic => "EXCLUDED_UNREALISTIC",
            RootTag::Unclassified => "UNCLASSIFIED",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Regular, Self::ExcludedBoundary, Self::ExcludedUnrealistic, Self::Unclassified].into_iter().find(|t| t.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootBox2D {
    pub a: ArcLength,
    pub beta: f64,
    pub residual_norm: f64,
    pub condition: f64,
    pub tag: RootTag,
    /// P for the regular root, then Q, R, S by decreasing beta.
    pub label: Option<char>,
}

pub type Point2 = (f64, f64);

/// One marching-squares piece of a zero curve, in (a, beta).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub from: Point2,
    pub to: Point2,
    keys: [EdgeKey; 2],
}

/// Grid edge identity: (vertical?, i, j) of its lower/left node.
type EdgeKey = (bool, usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Scan2D {
    pub grid_n: usize,
    pub domain: Domain,
    pub roots: Vec<RootBox2D>,
    /// Zero polylines of r1 and r2.
    pub curves: [Vec<Vec<Point2>>; 2],
}

/// Sign-scan, curve extraction, seeding and Newton refinement; see
/// [`solve_2d_with_curves`] for the curves.
pub fn solve_2d(f: &(dyn Fn(f64, f64) -> (f64, f64) + Sync), domain: &Domain, grid_n: usize, tol: f64) -> Vec<RootBox2D> {
    solve_2d_with_curves(f, domain, grid_n, tol).roots
}

pub fn solve_2d_with_curves(f: &(dyn Fn(f64, f64) -> (f64, f64) + Sync), domain: &Domain, grid_n: usize, tol: f64) -> Scan2D {
    let n = grid_n.max(2);
    let r = domain.scan;
    let da = (r.a.1 - r.a.0) / n as f64;
    let db = (r.beta.1 - r.beta.0) / n as f64;
    let node = |i: usize, j: usize| (r.a.0 + i as f64 * da, r.beta.0 + j as f64 * db);
    let values: Vec<Vec<(f64, f64)>> = (0..=n)
        .into_par_iter()
        .map(|i| (0..=n).map(|j| { let (a, b) = node(i, j); f(a, b) }).collect())
        .collect();
    let segments: [Vec<Vec<Segment>>; 2] = [0, 1].map(|k| {
        let pick = |i: usize, j: usize| if k == 0 { values[i][j].0 } else { values[i][j].1 };
        (0..n * n).into_par_iter().map(|c| cell_segments(c / n, c % n, &pick, &node)).collect()
    });

    let mut seeds = Vec::new();
    for c in 0..n * n {
        for s1 in &segments[0][c] {
            for s2 in &segments[1][c] {
                if let Some(p) = intersect(s1, s2) {
                    seeds.push(p);
                }
            }
        }
    }
    log::debug!("grid {n}: {} seeds", seeds.len());

    let refined: Vec<RootBox2D> = seeds
        .par_iter()
        .filter_map(|&(a, b)| {
            let g = |x: &DVector<f64>| {
                let (r1, r2) = f(x[0], x[1]);
                DVector::from_vec(vec![r1, r2])
            };
            let out = match newton(&g, DVector::from_vec(vec![a, b]), tol, NEWTON_MAX_ITER) {
                Ok(o) => o,
                Err(e) => {
                    log::debug!("seed ({a}, {b}) discarded: {e}");
                    return None;
                }
            };
            let (ra, rb) = (out.x[0], out.x[1]);
            if out.residual_norm >= ROOT_ACCEPT || !domain.accept.contains(ra, rb, BOUNDARY_TOL) || !(0.0..=PI).contains(&ra) {
                log::debug!("seed ({a}, {b}) discarded: ended at ({ra}, {rb}), residual {:e}", out.residual_norm);
                return None;
            }
            Some(RootBox2D {
                a: ArcLength::new(ra).ok()?,
                beta: rb,
                residual_norm: out.residual_norm,
                condition: out.condition,
                tag: RootTag::Unclassified,
                label: None,
            })
        })
        .collect();

    let mut roots: Vec<RootBox2D> = Vec::new();
    for root in refined {
        match roots.iter_mut().find(|r| (r.a.value() - root.a.value()).abs().max((r.beta - root.beta).abs()) < DEDUP_RADIUS) {
            Some(r) if root.residual_norm < r.residual_norm => *r = root,
            Some(_) => {}
            None => roots.push(root),
        }
    }
    roots.sort_by(|x, y| x.a.value().total_cmp(&y.a.value()).then(x.beta.total_cmp(&y.beta)));
    let curves = [0, 1].map(|k| chain(segments[k].iter().flatten().copied().collect()));
    Scan2D { grid_n: n, domain: *domain, roots, curves }
}

fn cell_segments(i: usize, j: usize, value: &dyn Fn(usize, usize) -> f64, node: &dyn Fn(usize, usize) -> Point2) -> Vec<Segment> {
    let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
    let v = corners.map(|(x, y)| value(x, y));
    if v.iter().any(|x| !x.is_finite()) {
        return Vec::new();
    }
    let pos = v.map(|x| x >= 0.0);
    // edge k joins corner k and corner k + 1
    let keys: [EdgeKey; 4] = [(false, i, j), (true, i + 1, j), (false, i, j + 1), (true, i, j)];
    let crossing = |k: usize| {
        let (p, q) = (corners[k], corners[(k + 1) % 4]);
        // interpolate from the lower/left node so both cells agree exactly
        let (p, q, vp, vq) = if p <= q { (p, q, v[k], v[(k + 1) % 4]) } else { (q, p, v[(k + 1) % 4], v[k]) };
        let t = (vp / (vp - vq)).clamp(0.0, 1.0);
        let (pa, pb) = node(p.0, p.1);
        let (qa, qb) = node(q.0, q.1);
        (pa + t * (qa - pa), pb + t * (qb - pb))
    };
    let crossed: Vec<usize> = (0..4).filter(|&k| pos[k] != pos[(k + 1) % 4]).collect();
    let seg = |e1: usize, e2: usize| Segment { from: crossing(e1), to: crossing(e2), keys: [keys[e1], keys[e2]] };
    match crossed.len() {
        2 => vec![seg(crossed[0], crossed[1])],
        4 => {
            let centre = v.iter().sum::<f64>() >= 0.0;
            // cut off the corners on the other side from the centre
            (0..4).filter(|&k| pos[k] != centre).map(|k| seg((k + 3) % 4, k)).collect()
        }
        _ => Vec::new(),
    }
}

fn intersect(s: &Segment, t: &Segment) -> Option<Point2> {
    let d1 = (s.to.0 - s.from.0, s.to.1 - s.from.1);
    let d2 = (t.to.0 - t.from.0, t.to.1 - t.from.1);
    let den = d1.0 * d2.1 - d1.1 * d2.0;
    if den.abs() < 1e-300 {
        return None;
    }
    let w = (t.from.0 - s.from.0, t.from.1 - s.from.1);
    let u = (w.0 * d2.1 - w.1 * d2.0) / den;
    let v = (w.0 * d1.1 - w.1 * d1.0) / den;
    let eps = 1e-9;
    ((-eps..=1.0 + eps).contains(&u) && (-eps..=1.0 + eps).contains(&v)).then(|| (s.from.0 + u * d1.0, s.from.1 + u * d1.1))
}

/// Joins segments sharing a grid edge into polylines.
fn chain(segments: Vec<Segment>) -> Vec<Vec<Point2>> {
    let mut at: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (n, s) in segments.iter().enumerate() {
        for k in s.keys {
            at.entry(k).or_default().push(n);
        }
    }
    let point = |s: &Segment, k: EdgeKey| if s.keys[0] == k { s.from } else { s.to };
    let other = |s: &Segment, k: EdgeKey| if s.keys[0] == k { s.keys[1] } else { s.keys[0] };
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut line = vec![segments[start].from, segments[start].to];
        for (end, forward) in [(segments[start].keys[1], true), (segments[start].keys[0], false)] {
            let mut key = end;
            loop {
                let next = at[&key].iter().copied().find(|&m| !used[m]);
                let Some(m) = next else { break };
                used[m] = true;
                key = other(&segments[m], key);
                let p = point(&segments[m], key);
                if forward {
                    line.push(p);
                } else {
                    line.insert(0, p);
                }
            }
        }
        lines.push(line);
    }
    lines
}

/// Outcome of closing one tile with some lengths unknown.
#[derive(Clone, Debug)]
pub struct TileRealization {
    pub lengths: [f64; 5],
    pub closure_residual: f64,
    /// Present when the walk closes and the result is a simple pentagon.
    pub pentagon: Option<SphericalPentagon>,
}

/// Closes a tile with the given corner angles. Lengths whose label appears
/// in `known` are fixed; the rest are fitted by least squares on the
/// closure defect, from several starting values.
pub fn realize_tile(slots: &TileSlots, angles: [f64; 5], known: &[(LengthLabel, f64)]) -> TileRealization {
    let mut unknown: Vec<LengthLabel> = slots.edges.iter().copied().filter(|l| !known.iter().any(|k| k.0 == *l)).collect();
    unknown.sort();
    unknown.dedup();
    let lengths_of = |x: &DVector<f64>| {
        slots.edges.map(|l| match known.iter().find(|k| k.0 == l) {
            Some(&(_, v)) => v,
            None => x[unknown.iter().position(|&u| u == l).unwrap()],
        })
    };
    let defect = |x: &DVector<f64>| {
        let d = walk_raw(&lengths_of(x), &angles).defect;
        DVector::from_vec(vec![d.x, d.y, d.z])
    };
    let mut best: Option<([f64; 5], f64)> = None;
    if unknown.is_empty() {
        let lengths = lengths_of(&DVector::zeros(0));
        best = Some((lengths, walk_raw(&lengths, &angles).closure_residual));
    } else {
        for k in 0..9 {
            let guess = 0.3 + 0.3 * k as f64;
            let Ok(out) = newton(&defect, DVector::from_element(unknown.len(), guess), 1e-14, NEWTON_MAX_ITER) else {
                continue;
            };
            let lengths = lengths_of(&out.x);
            if lengths.iter().any(|&l| !(0.0..=PI).contains(&l)) {
                continue;
            }
            let residual = walk_raw(&lengths, &angles).closure_residual;
            if best.is_none_or(|(_, r)| residual < r) {
                best = Some((lengths, residual));
            }
        }
    }
    let Some((lengths, closure_residual)) = best else {
        return TileRealization { lengths: [f64::NAN; 5], closure_residual: f64::INFINITY, pentagon: None };
    };
    let pentagon = (closure_residual < CLOSURE_TOL)
        .then(|| {
            let labels = slots.edges.map(EdgeLabel::from);
            let edges = EdgeWord::new(lengths, labels).ok()?;
            let word = AngleWord::new(angles).ok()?;
            SphericalPentagon::from_words(edges, word).ok()
        })
        .flatten()
        .filter(|p| p.is_simple());
    TileRealization { lengths, closure_residual, pentagon }
}

/// Angles of a type 2 or 3 tiling at a given beta, from the vertex relations.
pub fn angles_at(type_id: u8, beta: f64) -> Result<AngleAssignment, SolverError> {
    let ct = builtin(type_id)?;
    Ok(solve_angles(&ct, &[(AngleLabel::Beta, beta)])?)
}

/// Realizes tile 0 of a type 2 or 3 tiling at a root: `a` is given, the
/// other edge is fitted.
pub fn realize_root(type_id: u8, a: f64, beta: f64) -> Result<TileRealization, SolverError> {
    residuals_for(type_id)?;
    let ct = builtin(type_id)?;
    let angles = angles_at(type_id, beta)?;
    let slots = ct.tiles()[0];
    Ok(realize_tile(&slots, angles.word(&slots), &[(LengthLabel::A, a)]))
}

/// Tags each root and labels them P (regular) and Q, R, S by decreasing
/// beta.
pub fn classify_roots(type_id: u8, roots: &[RootBox2D]) -> Result<Vec<RootBox2D>, SolverError> {
    residuals_for(type_id)?;
    let mut out = Vec::with_capacity(roots.len());
    for root in roots {
        let (a, beta) = (root.a.value(), root.beta);
        let regular = realize_root(type_id, a, beta)?.pentagon.is_some();
        let on_boundary = beta.abs() < BOUNDARY_TOL || (beta - FOUR_THIRDS_PI).abs() < BOUNDARY_TOL;
        let bound_applies = match type_id {
            2 => PI / 3.0 < beta && beta < FOUR_THIRDS_PI,
            _ => true,
        };
        let tag = if regular {
            RootTag::Regular
        } else if on_boundary {
            RootTag::ExcludedBoundary
        } else if bound_applies && !realism_bound_check(root.a) {
            RootTag::ExcludedUnrealistic
        } else {
            RootTag::Unclassified
        };
        out.push(RootBox2D { tag, label: None, ..*root });
    }
    let mut order: Vec<usize> = (0..out.len()).collect();
    order.sort_by(|&x, &y| {
        let rx = out[x].tag != RootTag::Regular;
        let ry = out[y].tag != RootTag::Regular;
        rx.cmp(&ry).then(out[y].beta.total_cmp(&out[x].beta))
    });
    for (n, &k) in order.iter().enumerate() {
        out[k].label = char::from_u32('P' as u32 + n as u32).filter(|_| n < 4);
    }
    Ok(out)
}

/// Roots and zero curves of a type 2 or 3 system, classified.
pub fn solve_type(type_id: u8, grid_n: usize, tol: f64) -> Result<Scan2D, SolverError> {
    let f = residuals_for(type_id)?;
    let mut scan = solve_2d_with_curves(&f, &Domain::standard(), grid_n, tol);
    scan.roots = classify_roots(type_id, &scan.roots)?;
    scan.roots.sort_by_key(|r| r.label.unwrap_or('~'));
    Ok(scan)
}

/// One row of a rigidity scan.
#[derive(Clone, Debug, PartialEq)]
pub struct RigiditySample {
    pub parameter: f64,
    pub angles: AngleAssignment,
    /// beta - gamma and delta - epsilon.
    pub differences: (f64, f64),
    pub law: Lemma3Status,
    /// Closure defect of the best fit; None if the angles are not a
    /// valid word at all.
    pub closure_residual: Option<f64>,
    /// The realized tile's own sign check when the tile closes.
    pub realized_law: Option<Lemma3Status>,
}

impl RigiditySample {
    pub fn feasible(&self) -> bool {
        self.realized_law.is_some()
    }

    pub fn consistent(&self) -> bool {
        self.law == Lemma3Status::Consistent && self.realized_law == Some(Lemma3Status::Consistent)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidityCertificate {
    pub type_id: u8,
    /// Free parameter (epsilon) values where beta - gamma changes sign,
    /// refined by bisection.
    pub sign_changes: Vec<f64>,
    pub forced_angles: [f64; 5],
    pub edge: f64,
    pub samples: Vec<RigiditySample>,
    /// Realization of the forced angles, closed with every edge `edge`.
    pub forced_closure_residual: f64,
}

impl RigidityCertificate {
    /// Exactly one admissible parameter, at 2pi/3, realizing the regular
    /// tile; no sample away from it is both law-consistent and closed.
    pub fn is_unique_regular(&self) -> bool {
        let regular = self.forced_angles.iter().all(|x| (x - TWO_THIRDS_PI).abs() < 1e-9);
        self.sign_changes.len() == 1
            && (self.sign_changes[0] - TWO_THIRDS_PI).abs() < 1e-6
            && regular
            && self.forced_closure_residual < CLOSURE_TOL
            && !self.samples.iter().any(|s| s.consistent())
    }
}

/// Numerical evidence that types 1 and 4 force the regular tiling.
///
/// The vertex relations leave epsilon free. Each sample solves the others
/// from it, checks the sign law on the assigned angles, then tries to
/// close tile 0 with its edge word.
pub fn rigidity(type_id: u8) -> Result<RigidityCertificate, SolverError> {
    if !matches!(type_id, 1 | 4) {
        return Err(SolverError::NotRigidityType(type_id));
    }
    let ct = builtin(type_id)?;
    let slots = ct.tiles()[0];
    let assign = |eps: f64| solve_angles(&ct, &[(AngleLabel::Epsilon, eps)]);
    let diff = |a: &AngleAssignment| {
        let g = |l| a.get(l);
        (g(AngleLabel::Beta) - g(AngleLabel::Gamma), g(AngleLabel::Delta) - g(AngleLabel::Epsilon))
    };
    let width = 2.0 * RIGIDITY_HALF_WIDTH / RIGIDITY_SAMPLES as f64;
    let lo = TWO_THIRDS_PI - RIGIDITY_HALF_WIDTH;
    let parameters: Vec<f64> = (0..RIGIDITY_SAMPLES).map(|k| lo + (k as f64 + 0.5) * width).collect();
    let samples: Vec<RigiditySample> = parameters
        .par_iter()
        .map(|&eps| {
            let angles = assign(eps)?;
            let (bg, de) = diff(&angles);
            let word = angles.word(&slots);
            let valid_word = AngleWord::new(word).is_ok();
            let fit = valid_word.then(|| realize_tile(&slots, word, &[]));
            let realized_law = fit.as_ref().and_then(|f| f.pentagon.as_ref()).map(|p| {
                let a = p.angles().values();
                sign_law(a[1], a[4], a[2], a[3])
            });
            Ok(RigiditySample {
                parameter: eps,
                angles,
                differences: (bg, de),
                law: sign_law(angles.get(AngleLabel::Beta), angles.get(AngleLabel::Gamma), angles.get(AngleLabel::Delta), angles.get(AngleLabel::Epsilon)),
                closure_residual: fit.map(|f| f.closure_residual),
                realized_law,
            })
        })
        .collect::<Result<_, TilingError>>()?;

    let mut sign_changes = Vec::new();
    for pair in samples.windows(2) {
        if pair[0].differences.0.signum() != pair[1].differences.0.signum() {
            let f = |eps: f64| assign(eps).map(|a| diff(&a).0).unwrap_or(f64::NAN);
            sign_changes.push(bisect_1d(f, pair[0].parameter, pair[1].parameter, 1e-14)?);
        }
    }
    let forced = match sign_changes.first() {
        Some(&eps) => assign(eps)?,
        None => AngleAssignment::uniform(f64::NAN),
    };
    let forced_angles = forced.values;
    let edge = regular_edge();
    let forced_closure_residual = walk_raw(&[edge; 5], &forced.word(&slots)).closure_residual;
    Ok(RigidityCertificate { type_id, sign_changes, forced_angles, edge, samples, forced_closure_residual })
}

pub fn rigidity_type1() -> Result<RigidityCertificate, SolverError> {
    rigidity(1)
}

pub fn rigidity_type4() -> Result<RigidityCertificate, SolverError> {
    rigidity(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::a0;
    use crate::sphere_geom::quad_fourth_edge_oracle;
    use proptest::prelude::*;

    #[test]
    fn bisection_examples() {
        assert!((bisect_1d(|x| x - 1.0, 0.0, 2.0, 1e-14).unwrap() - 1.0).abs() < 1e-13);
        assert!((bisect_1d(f64::cos, 1.0, 2.0, 1e-14).unwrap() - PI / 2.0).abs() < 1e-13);
        assert!(matches!(bisect_1d(|x| x * x + 1.0, -1.0, 1.0, 1e-12), Err(SolverError::NoSignChange { .. })));
        assert!((regular_edge() - a0()).abs() < 1e-12);
        assert!((bisect_1d(regular_closure_defect, 0.1, 1.2, 1e-12).unwrap() - 0.729728).abs() < 1e-6);
    }

    #[test]
    fn regular_edge_closes_the_walk() {
        let walk = walk_raw(&[regular_edge(); 5], &[TWO_THIRDS_PI; 5]);
        assert!(walk.closure_residual < 1e-12);
        let short = walk_raw(&[regular_edge() - 0.01; 5], &[TWO_THIRDS_PI; 5]);
        assert!(short.closure_residual > 1e-3);
    }

    #[test]
    fn newton_on_a_linear_system() {
        let f = |x: &DVector<f64>| DVector::from_vec(vec![x[0] - 1.0, x[1] - 1.0]);
        let out = newton(&f, DVector::from_vec(vec![5.0, -3.0]), 1e-12, 50).unwrap();
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-12 && (out.x[1] - 1.0).abs() < 1e-12);
        assert!((out.condition - 1.0).abs() < 1e-6);
    }

    #[test]
    fn solve_2d_finds_a_single_trivial_root() {
        let f = |a: f64, b: f64| (a - 1.0, b - 1.0);
        let d = Domain::exact(Rect { a: (0.0, 3.0), beta: (0.0, 3.0) });
        let roots = solve_2d(&f, &d, 50, 1e-12);
        assert_eq!(roots.len(), 1);
        assert!((roots[0].a.value() - 1.0).abs() < 1e-12 && (roots[0].beta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn curves_of_a_circle_chain_into_one_loop() {
        // the a axis is an arc length, so keep everything in a > 0
        let f = |a: f64, b: f64| ((a - 1.5).powi(2) + b * b - 1.0, a - 1.5 - 0.9 * b);
        let d = Domain::exact(Rect { a: (0.0, 3.0), beta: (-1.5, 1.5) });
        let scan = solve_2d_with_curves(&f, &d, 64, 1e-12);
        assert_eq!(scan.curves[0].len(), 1);
        let line = &scan.curves[0][0];
        assert_eq!(line.first(), line.last());
        assert!(line.iter().all(|(a, b)| ((a - 1.5).hypot(*b) - 1.0).abs() < 1e-2));
        assert_eq!(scan.roots.len(), 2);
    }

    #[test]
    fn regular_point_solves_both_systems() {
        for f in [type2_residuals, type3_residuals] {
            let (r1, r2) = f(a0(), TWO_THIRDS_PI);
            assert!(r1.abs() < 1e-9 && r2.abs() < 1e-9, "{r1} {r2}");
        }
    }

    #[test]
    fn type2_first_residual_touches_zero_on_the_upper_edge() {
        let q = (1.0f64 / 3.0).acos();
        let (r1, r2) = type2_residuals(q, FOUR_THIRDS_PI);
        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12, "{r1} {r2}");
        // a double root of r1 along the edge, a simple one of r2
        assert!(type2_residuals(q - 0.01, FOUR_THIRDS_PI).0 > 0.0);
        assert!(type2_residuals(q + 0.01, FOUR_THIRDS_PI).0 > 0.0);
        let r2_root = bisect_1d(|a| type2_residuals(a, FOUR_THIRDS_PI).1, 0.9, 1.5, 1e-14).unwrap();
        assert!((r2_root - q).abs() < 1e-9);
    }

    #[test]
    fn type3_residuals_swap_under_beta_reflection() {
        for k in 0..20 {
            let a = 0.1 + 0.14 * k as f64;
            let b = 0.05 + 0.2 * k as f64;
            let (r1, r2) = type3_residuals(a, b);
            let (s1, s2) = type3_residuals(a, FOUR_THIRDS_PI - b);
            assert!((r1 - s2).abs() < 1e-12 && (r2 - s1).abs() < 1e-12);
            let (m1, m2) = type3_residuals(a, TWO_THIRDS_PI);
            assert!((m1 - m2).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn residuals_match_frame_walk(a in 0.01f64..PI - 0.01, beta in 0.0f64..FOUR_THIRDS_PI) {
            let h = (a / 2.0).cos();
            let (r1, r2) = type2_residuals(a, beta);
            let w1 = quad_fourth_edge_oracle(a, a, a / 2.0, beta, FOUR_THIRDS_PI) / h;
            let w2 = quad_fourth_edge_oracle(a / 2.0, a, a / 2.0, FOUR_THIRDS_PI - beta, beta) - 0.5;
            prop_assert!((r1 - w1).abs() < 1e-12, "{} vs {}", r1, w1);
            prop_assert!((r2 - w2).abs() < 1e-12);
            let (t1, t2) = type3_residuals(a, beta);
            let gamma = FOUR_THIRDS_PI - beta;
            let v1 = quad_fourth_edge_oracle(a, a, a / 2.0, gamma, 2.0 * PI - gamma) / h;
            let v2 = quad_fourth_edge_oracle(a, a, a / 2.0, beta, 2.0 * PI - beta) / h;
            prop_assert!((t1 - v1).abs() < 1e-12 && (t2 - v2).abs() < 1e-12);
        }
    }

    #[test]
    fn realize_root_at_regular_point() {
        for t in [2, 3] {
            let r = realize_root(t, a0(), TWO_THIRDS_PI).unwrap();
            assert!(r.pentagon.is_some(), "type {t}: residual {}", r.closure_residual);
            assert!(r.lengths.iter().all(|l| (l - a0()).abs() < 1e-9));
        }
    }

    #[test]
    fn star_root_closes_but_is_not_simple() {
        let a = 2.411864997362826;
        let r = realize_root(2, a, TWO_THIRDS_PI).unwrap();
        assert!(r.closure_residual < 1e-9);
        assert!(r.pentagon.is_none());
    }

    #[test]
    fn classification_rules() {
        let root = |a: f64, beta: f64| RootBox2D {
            a: ArcLength::new(a).unwrap(),
            beta,
            residual_norm: 0.0,
            condition: 1.0,
            tag: RootTag::Unclassified,
            label: None,
        };
        let tags = classify_roots(2, &[root(a0(), TWO_THIRDS_PI), root(1.2, FOUR_THIRDS_PI), root(2.5, 1.5), root(0.5, 0.5), root(2.5, 0.5)]).unwrap();
        let got: Vec<RootTag> = tags.iter().map(|r| r.tag).collect();
        assert_eq!(
            got,
            vec![RootTag::Regular, RootTag::ExcludedBoundary, RootTag::ExcludedUnrealistic, RootTag::Unclassified, RootTag::Unclassified]
        );
        assert_eq!(tags[0].label, Some('P'));
        assert_eq!(tags[1].label, Some('Q'));
        // the bound is unconditional for type 3
        assert_eq!(classify_roots(3, &[root(2.5, 0.5)]).unwrap()[0].tag, RootTag::ExcludedUnrealistic);
        assert!(classify_roots(4, &[]).is_err());
    }

    #[test]
    fn rigidity_scans_reject_non_types() {
        assert_eq!(rigidity(2), Err(SolverError::NotRigidityType(2)));
    }
}
