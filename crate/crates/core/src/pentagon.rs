//! Spherical pentagons: realization from edge/angle words, area by angle
//! excess, simplicity, point containment and the two-equal-pairs sign law.

use std::f64::consts::PI;

use nalgebra::Vector3;
use thiserror::Error;

use crate::sphere_geom::{geodesic_distance, ArcLength, Frame, GeomError, Isometry, UnitVector};

/// Agreement required between a pentagon's words and its measured geometry.
pub const WORD_TOL: f64 = 1e-9;

/// Tolerance of the arc–arc intersection predicates.
pub const CROSSING_TOL: f64 = 1e-12;

/// Differences smaller than this count as equal in the sign law.
pub const SIGN_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PentagonError {
    #[error("angle {index} = {value} is outside (0, 2pi)")]
    AngleOutOfRange { index: usize, value: f64 },
    #[error("edge {index} = {value} is outside (0, pi)")]
    EdgeOutOfRange { index: usize, value: f64 },
    #[error("walk does not close (residual {0:e})")]
    NotClosed(f64),
    #[error("measured {what} {index} is {measured}, word says {expected}")]
    WordMismatch {
        what: &'static str,
        index: usize,
        measured: f64,
        expected: f64,
    },
    #[error("degenerate corner at vertex {0}")]
    DegenerateCorner(usize),
    #[error("sign-law precondition fails: edges {first} and {second} differ by {diff:e}")]
    EdgePairMismatch { first: usize, second: usize, diff: f64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Five interior angles in cyclic order, each in (0, 2pi).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleWord([f64; 5]);

impl AngleWord {
    pub fn new(angles: [f64; 5]) -> Result<Self, PentagonError> {
        for (index, &value) in angles.iter().enumerate() {
            if !(value > 0.0 && value < 2.0 * PI) {
                return Err(PentagonError::AngleOutOfRange { index, value });
            }
        }
        Ok(AngleWord(angles))
    }

    pub fn uniform(angle: f64) -> Result<Self, PentagonError> {
        Self::new([angle; 5])
    }

    pub fn values(&self) -> &[f64; 5] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Length class of an edge: the normal (a), thick (b) and dashed (c) edges
/// of the tiling figures, or an unconstrained edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    A,
    B,
    C,
    Free,
}

/// Five edge lengths in cyclic order, edge `i` running from vertex `i` to
/// vertex `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeWord {
    lengths: [f64; 5],
    labels: [EdgeLabel; 5],
}

impl EdgeWord {
    pub fn new(lengths: [f64; 5], labels: [EdgeLabel; 5]) -> Result<Self, PentagonError> {
        for (index, &value) in lengths.iter().enumerate() {
            if !(value > 0.0 && value < PI) {
                return Err(PentagonError::EdgeOutOfRange { index, value });
            }
        }
        Ok(EdgeWord { lengths, labels })
    }

    pub fn uniform(length: f64) -> Result<Self, PentagonError> {
        Self::new([length; 5], [EdgeLabel::A; 5])
    }

    pub fn lengths(&self) -> &[f64; 5] {
        &self.lengths
    }

    pub fn labels(&self) -> &[EdgeLabel; 5] {
        &self.labels
    }
}

/// Result of walking a pentagon from the canonical frame.
#[derive(Clone, Debug)]
pub struct Walk {
    pub vertices: [UnitVector; 5],
    /// Distance between the initial and final frames.
    pub closure_residual: f64,
    /// Signed closure defect `(p.x, p.y, t.y)` of the final frame; vanishes
    /// to first order exactly when the walk closes.
    pub defect: Vector3<f64>,
}

/// Walks edges and left turns (exterior angle pi - interior) starting at
/// (0, 0, 1) heading toward (1, 0, 0).
pub fn walk_polygon(edges: &EdgeWord, angles: &AngleWord) -> Walk {
    walk_raw(&edges.lengths, &angles.0)
}

/// [`walk_polygon`] without range checks, for solvers probing trial values.
pub fn walk_raw(lengths: &[f64; 5], angles: &[f64; 5]) -> Walk {
    let start = Frame::canonical();
    let mut frame = start;
    let mut vertices = [UnitVector::north(); 5];
    for i in 0..5 {
        vertices[i] = frame.point();
        frame.advance(lengths[i]);
        frame.turn_left(PI - angles[(i + 1) % 5]);
    }
    Walk {
        vertices,
        closure_residual: frame.distance(&start),
        defect: Vector3::new(frame.position.x, frame.position.y, frame.heading.y),
    }
}

/// Interior angle at `v` of a counterclockwise polygon: the counterclockwise
/// turn from the direction of `next` to the direction of `prev`, in [0, 2pi).
pub fn interior_angle(prev: &UnitVector, v: &UnitVector, next: &UnitVector) -> Option<f64> {
    let to_next = v.heading_to(next)?;
    let to_prev = v.heading_to(prev)?;
    let s = to_next.cross(&to_prev).dot(v.as_vector());
    let c = to_next.dot(&to_prev);
    Some(s.atan2(c).rem_euclid(2.0 * PI))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// Outcome of the two-equal-pairs sign law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma3Status {
    Consistent,
    Violated,
}

fn sign(x: f64) -> i8 {
    if x.abs() <= SIGN_TOL {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

/// The sign law on bare angles: beta > gamma exactly when delta < epsilon.
pub fn sign_law(beta: f64, gamma: f64, delta: f64, epsilon: f64) -> Lemma3Status {
    if sign(beta - gamma) == -sign(delta - epsilon) {
        Lemma3Status::Consistent
    } else {
        Lemma3Status::Violated
    }
}

/// True iff a tile of area pi/3 can contain the isosceles triangle with
/// legs `a` and apex 2pi/3, i.e. cos a > 1/3.
pub fn realism_bound_check(a: ArcLength) -> bool {
    a.value().cos() > 1.0 / 3.0
}

/// Five counterclockwise vertices together with the words they realize.
#[derive(Clone, Debug)]
pub struct SphericalPentagon {
    vertices: [UnitVector; 5],
    angles: AngleWord,
    edges: EdgeWord,
}

impl SphericalPentagon {
    /// Checks that `vertices` realize both words within [`WORD_TOL`].
    pub fn new(vertices: [UnitVector; 5], angles: AngleWord, edges: EdgeWord) -> Result<Self, PentagonError> {
        let measured_edges = measure_edges(&vertices);
        for (index, (&m, &e)) in measured_edges.iter().zip(edges.lengths.iter()).enumerate() {
            if (m - e).abs() > WORD_TOL {
                return Err(PentagonError::WordMismatch { what: "edge", index, measured: m, expected: e });
            }
        }
        let measured_angles = measure_angles(&vertices)?;
        for (index, (&m, &e)) in measured_angles.iter().zip(angles.0.iter()).enumerate() {
            if angle_gap(m, e) > WORD_TOL {
                return Err(PentagonError::WordMismatch { what: "angle", index, measured: m, expected: e });
            }
        }
        Ok(SphericalPentagon { vertices, angles, edges })
    }

    /// Realizes the words by [`walk_polygon`]; the walk must close within
    /// [`WORD_TOL`].
    pub fn from_words(edges: EdgeWord, angles: AngleWord) -> Result<Self, PentagonError> {
        let walk = walk_polygon(&edges, &angles);
        if walk.closure_residual > WORD_TOL {
            return Err(PentagonError::NotClosed(walk.closure_residual));
        }
        Self::new(walk.vertices, angles, edges)
    }

    /// Reads both words off the vertices.
    pub fn from_vertices(vertices: [UnitVector; 5], labels: [EdgeLabel; 5]) -> Result<Self, PentagonError> {
        let angles = AngleWord::new(measure_angles(&vertices)?)?;
        let edges = EdgeWord::new(measure_edges(&vertices), labels)?;
        Ok(SphericalPentagon { vertices, angles, edges })
    }

    /// Pentagon with the edge-pair hypothesis built in: apex `alpha` between
    /// two sides of length `side`, base angles `beta` and `gamma`, and two
    /// legs of length `leg`. Vertices are ordered (alpha, beta, delta,
    /// epsilon, gamma).
    pub fn with_equal_edge_pairs(side: f64, leg: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self, PentagonError> {
        let apex = UnitVector::north();
        let toward_beta = Vector3::x();
        let toward_gamma = Isometry::rotation_about_axis(&apex, alpha).matrix() * toward_beta;
        let step = |from: &UnitVector, dir: Vector3<f64>, len: f64| {
            let (s, c) = len.sin_cos();
            UnitVector::from_vector(from.as_vector() * c + dir * s)
        };
        let vb = step(&apex, toward_beta, side)?;
        let vg = step(&apex, toward_gamma, side)?;
        let back_b = vb.heading_to(&apex).ok_or(PentagonError::DegenerateCorner(1))?;
        let back_g = vg.heading_to(&apex).ok_or(PentagonError::DegenerateCorner(4))?;
        let vd = step(&vb, Isometry::rotation_about_axis(&vb, -beta).matrix() * back_b, leg)?;
        let ve = step(&vg, Isometry::rotation_about_axis(&vg, gamma).matrix() * back_g, leg)?;
        Self::from_vertices([apex, vb, vd, ve, vg], [EdgeLabel::A, EdgeLabel::B, EdgeLabel::Free, EdgeLabel::B, EdgeLabel::A])
    }

    pub fn vertices(&self) -> &[UnitVector; 5] {
        &self.vertices
    }

    pub fn angles(&self) -> &AngleWord {
        &self.angles
    }

    pub fn edges(&self) -> &EdgeWord {
        &self.edges
    }

    pub fn measured_edges(&self) -> [f64; 5] {
        measure_edges(&self.vertices)
    }

    pub fn measured_angles(&self) -> [f64; 5] {
        measure_angles(&self.vertices).expect("validated at construction")
    }

    /// Angle excess.
    pub fn area(&self) -> f64 {
        self.angles.sum() - 3.0 * PI
    }

    /// Normalized vertex mean.
    pub fn centroid(&self) -> UnitVector {
        let sum: Vector3<f64> = self.vertices.iter().map(|v| v.as_vector()).sum();
        UnitVector::from_vector(sum).unwrap_or_else(|_| self.vertices[0])
    }

    pub fn transformed(&self, g: &Isometry) -> SphericalPentagon {
        let mut vertices = self.vertices;
        for v in vertices.iter_mut() {
            *v = g.apply(v);
        }
        // a reflection reverses the boundary orientation
        if !g.is_proper() {
            vertices.reverse();
            let mut angles = self.angles.0;
            angles.reverse();
            let mut lengths = self.edges.lengths;
            let mut labels = self.edges.labels;
            lengths.reverse();
            labels.reverse();
            // reversal maps edge i (v_i -> v_{i+1}) onto edge 3 - i
            lengths.rotate_left(1);
            labels.rotate_left(1);
            return SphericalPentagon {
                vertices,
                angles: AngleWord(angles),
                edges: EdgeWord { lengths, labels },
            };
        }
        SphericalPentagon { vertices, angles: self.angles, edges: self.edges }
    }

    /// Same pentagon with vertex `shift` moved to index 0.
    pub fn rotated(&self, shift: usize) -> SphericalPentagon {
        let s = shift % 5;
        let mut vertices = self.vertices;
        let mut angles = self.angles.0;
        let mut lengths = self.edges.lengths;
        let mut labels = self.edges.labels;
        vertices.rotate_left(s);
        angles.rotate_left(s);
        lengths.rotate_left(s);
        labels.rotate_left(s);
        SphericalPentagon {
            vertices,
            angles: AngleWord(angles),
            edges: EdgeWord { lengths, labels },
        }
    }

    /// No two non-adjacent edges meet, and adjacent edges share only their
    /// common vertex.
    pub fn is_simple(&self) -> bool {
        let v = &self.vertices;
        for i in 0..5 {
            for j in (i + 1)..5 {
                if geodesic_distance(&v[i], &v[j]).value() <= CROSSING_TOL {
                    return false;
                }
            }
        }
        let angles = self.measured_angles();
        if angles.iter().any(|&a| a <= CROSSING_TOL || a >= 2.0 * PI - CROSSING_TOL) {
            return false;
        }
        for i in 0..5 {
            for j in (i + 2)..5 {
                if i == 0 && j == 4 {
                    continue;
                }
                if arcs_intersect(&v[i], &v[(i + 1) % 5], &v[j], &v[(j + 1) % 5]) {
                    return false;
                }
            }
        }
        true
    }

    /// Point location for pentagons that fit in an open hemisphere (every
    /// tile of a 12-tile tiling does). Points within `boundary_tol` of an
    /// edge are reported as boundary.
    pub fn contains(&self, q: &UnitVector, boundary_tol: f64) -> Containment {
        let v = &self.vertices;
        if (0..5).any(|i| distance_to_arc(q, &v[i], &v[(i + 1) % 5]) <= boundary_tol) {
            return Containment::Boundary;
        }
        let c = self.centroid();
        if v.iter().any(|p| p.dot(&c) <= 0.0) || q.dot(&c) <= 0.0 {
            return Containment::Outside;
        }
        // Gnomonic projection about the centroid maps arcs to segments.
        let e1 = c.heading_to(&v[0]).unwrap_or_else(|| Vector3::x());
        let e2 = c.as_vector().cross(&e1);
        let project = |p: &UnitVector| {
            let w = p.as_vector() / p.dot(&c);
            (w.dot(&e1), w.dot(&e2))
        };
        let (qx, qy) = project(q);
        let poly: Vec<(f64, f64)> = v.iter().map(project).collect();
        let mut inside = false;
        for i in 0..5 {
            let (x1, y1) = poly[i];
            let (x2, y2) = poly[(i + 4) % 5];
            if (y1 > qy) != (y2 > qy) && qx < (x2 - x1) * (qy - y1) / (y2 - y1) + x1 {
                inside = !inside;
            }
        }
        if inside {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }

    /// The sign law with the apex (alpha) at vertex `apex` and the remaining
    /// corners read counterclockwise as beta, delta, epsilon, gamma.
    ///
    /// Requires the two edges at the apex to be equal and the two edges
    /// leaving the base corners (beta-delta, gamma-epsilon) to be equal.
    pub fn lemma3_sign_check(&self, apex: usize) -> Result<Lemma3Status, PentagonError> {
        let at = |k: usize| (apex + k) % 5;
        let e = &self.edges.lengths;
        for (first, second) in [(at(0), at(4)), (at(1), at(3))] {
            let diff = (e[first] - e[second]).abs();
            if diff > WORD_TOL {
                return Err(PentagonError::EdgePairMismatch { first, second, diff });
            }
        }
        let a = &self.angles.0;
        Ok(sign_law(a[at(1)], a[at(4)], a[at(2)], a[at(3)]))
    }
}

fn angle_gap(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn measure_edges(v: &[UnitVector; 5]) -> [f64; 5] {
    std::array::from_fn(|i| geodesic_distance(&v[i], &v[(i + 1) % 5]).value())
}

fn measure_angles(v: &[UnitVector; 5]) -> Result<[f64; 5], PentagonError> {
    let mut out = [0.0; 5];
    for i in 0..5 {
        out[i] = interior_angle(&v[(i + 4) % 5], &v[i], &v[(i + 1) % 5]).ok_or(PentagonError::DegenerateCorner(i))?;
    }
    Ok(out)
}

fn on_arc(c: &Vector3<f64>, p1: &UnitVector, p2: &UnitVector, normal: &Vector3<f64>) -> bool {
    p1.as_vector().cross(c).dot(normal) >= -CROSSING_TOL && c.cross(p2.as_vector()).dot(normal) >= -CROSSING_TOL
}

/// Whether two minor great-circle arcs share a point. Touching counts.
pub fn arcs_intersect(p1: &UnitVector, p2: &UnitVector, q1: &UnitVector, q2: &UnitVector) -> bool {
    let n1 = p1.cross(p2);
    let n2 = q1.cross(q2);
    let (l1, l2) = (n1.norm(), n2.norm());
    if l1 < CROSSING_TOL || l2 < CROSSING_TOL {
        return false;
    }
    let (n1, n2) = (n1 / l1, n2 / l2);
    let line = n1.cross(&n2);
    if line.norm() < CROSSING_TOL {
        // same great circle: overlap iff an endpoint of one lies on the other
        return on_arc(q1.as_vector(), p1, p2, &n1)
            || on_arc(q2.as_vector(), p1, p2, &n1)
            || on_arc(p1.as_vector(), q1, q2, &n2)
            || on_arc(p2.as_vector(), q1, q2, &n2);
    }
    let line = line.normalize();
    [line, -line].iter().any(|c| on_arc(c, p1, p2, &n1) && on_arc(c, q1, q2, &n2))
}

/// Distance from `q` to the minor arc `p1 p2`.
pub fn distance_to_arc(q: &UnitVector, p1: &UnitVector, p2: &UnitVector) -> f64 {
    let ends = geodesic_distance(q, p1).value().min(geodesic_distance(q, p2).value());
    let n = p1.cross(p2);
    let ln = n.norm();
    if ln < 1e-15 {
        return ends;
    }
    let n = n / ln;
    let foot = q.as_vector() - n * n.dot(q.as_vector());
    if foot.norm() < 1e-15 {
        return ends;
    }
    let foot = foot.normalize();
    if on_arc(&foot, p1, p2, &n) && foot.dot(q.as_vector()) > 0.0 {
        n.dot(q.as_vector()).abs().asin().min(ends)
    } else {
        ends
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{a0, fan_area};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const THIRD: f64 = 2.0 * PI / 3.0;

    fn regular() -> SphericalPentagon {
        SphericalPentagon::from_words(EdgeWord::uniform(a0()).unwrap(), AngleWord::uniform(THIRD).unwrap()).unwrap()
    }

    #[test]
    fn regular_word_closes() {
        let w = walk_polygon(&EdgeWord::uniform(a0()).unwrap(), &AngleWord::uniform(THIRD).unwrap());
        assert!(w.closure_residual < 1e-9);
        assert_eq!(w.vertices[0], UnitVector::north());
    }

    #[test]
    fn perturbed_regular_word_does_not_close() {
        let w = walk_polygon(&EdgeWord::uniform(a0() + 0.1).unwrap(), &AngleWord::uniform(THIRD).unwrap());
        assert!(w.closure_residual > 1e-3);
        assert!(matches!(
            SphericalPentagon::from_words(EdgeWord::uniform(a0() + 0.1).unwrap(), AngleWord::uniform(THIRD).unwrap()),
            Err(PentagonError::NotClosed(_))
        ));
    }

    #[test]
    fn planar_limit_has_zero_area() {
        // vanishing edges with the Euclidean angle sum 3pi
        let angles = AngleWord::uniform(3.0 * PI / 5.0).unwrap();
        let w = walk_polygon(&EdgeWord::uniform(1e-7).unwrap(), &angles);
        assert!(w.closure_residual < 1e-6);
        assert_abs_diff_eq!(angles.sum() - 3.0 * PI, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn word_validation() {
        assert!(matches!(AngleWord::new([1.0, 2.0, 0.0, 1.0, 1.0]), Err(PentagonError::AngleOutOfRange { index: 2, .. })));
        assert!(matches!(EdgeWord::uniform(PI), Err(PentagonError::EdgeOutOfRange { index: 0, .. })));
    }

    #[test]
    fn regular_tile_area_and_simplicity() {
        let p = regular();
        assert_abs_diff_eq!(p.area(), PI / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fan_area(p.vertices()), PI / 3.0, epsilon = 1e-10);
        assert!(p.is_simple());
        assert_eq!(p.lemma3_sign_check(0).unwrap(), Lemma3Status::Consistent);
    }

    #[test]
    fn measured_words_reproduce_input() {
        let p = regular();
        for (m, e) in p.measured_edges().iter().zip(p.edges().lengths()) {
            assert!((m - e).abs() < 1e-9);
        }
        for m in p.measured_angles() {
            assert!((m - THIRD).abs() < 1e-9);
        }
    }

    #[test]
    fn swapping_two_vertices_forces_a_crossing() {
        let v = *regular().vertices();
        let swapped = [v[0], v[2], v[1], v[3], v[4]];
        let p = SphericalPentagon::from_vertices(swapped, [EdgeLabel::Free; 5]).unwrap();
        assert!(!p.is_simple());
    }

    #[test]
    fn star_pentagon_is_not_simple() {
        // equal edges 2.4119 with all corners 2pi/3 close up as a pentagram
        let edge = 2.411864997362826;
        let walk = walk_polygon(&EdgeWord::uniform(edge).unwrap(), &AngleWord::uniform(THIRD).unwrap());
        assert!(walk.closure_residual < 1e-8, "{}", walk.closure_residual);
        let p = SphericalPentagon::from_vertices(walk.vertices, [EdgeLabel::A; 5]).unwrap();
        assert!(!p.is_simple());
    }

    #[test]
    fn sign_law_precondition_and_direct_violation() {
        let p = SphericalPentagon::with_equal_edge_pairs(0.7, 0.9, 2.0, 2.2, 1.9).unwrap();
        assert!(p.lemma3_sign_check(0).is_ok());
        assert!(matches!(p.lemma3_sign_check(1), Err(PentagonError::EdgePairMismatch { .. })));
        assert_eq!(sign_law(2.2, 1.9, 2.3, 2.0), Lemma3Status::Violated);
        assert_eq!(sign_law(2.0, 2.0, 2.0, 2.0), Lemma3Status::Consistent);
        assert_eq!(sign_law(2.2, 1.9, 1.8, 2.0), Lemma3Status::Consistent);
    }

    #[test]
    fn equal_pair_construction_puts_angles_where_asked() {
        let p = SphericalPentagon::with_equal_edge_pairs(0.6, 0.8, 1.9, 2.1, 1.7).unwrap();
        let a = p.angles().values();
        assert_abs_diff_eq!(a[0], 1.9, epsilon = 1e-12);
        assert_abs_diff_eq!(a[1], 2.1, epsilon = 1e-12);
        assert_abs_diff_eq!(a[4], 1.7, epsilon = 1e-12);
        let e = p.edges().lengths();
        assert_abs_diff_eq!(e[0], e[4], epsilon = 1e-12);
        assert_abs_diff_eq!(e[1], e[3], epsilon = 1e-12);
    }

    #[test]
    fn sampled_family_with_beta_above_gamma_has_delta_below_epsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 300 {
            let side = rng.gen_range(0.2..1.2);
            let leg = rng.gen_range(0.2..1.2);
            let alpha = rng.gen_range(1.2..2.8);
            let gamma = rng.gen_range(1.2..2.6);
            let beta = gamma + rng.gen_range(0.01..0.4);
            let Ok(p) = SphericalPentagon::with_equal_edge_pairs(side, leg, alpha, beta, gamma) else { continue };
            if !p.is_simple() || p.angles().values().iter().any(|&x| x >= PI) {
                continue;
            }
            let a = p.angles().values();
            assert!(a[2] < a[3], "delta {} epsilon {}", a[2], a[3]);
            checked += 1;
        }
    }

    #[test]
    fn realism_bound() {
        assert!(realism_bound_check(ArcLength::new(a0()).unwrap()));
        assert!(!realism_bound_check(ArcLength::new(1.231).unwrap()));
        assert!(realism_bound_check(ArcLength::new(0.0).unwrap()));
        assert!(realism_bound_check(ArcLength::new(1.2309).unwrap()));
    }

    #[test]
    fn containment_of_regular_tile() {
        let p = regular();
        assert_eq!(p.contains(&p.centroid(), 1e-9), Containment::Inside);
        assert_eq!(p.contains(&p.centroid().antipode(), 1e-9), Containment::Outside);
        assert_eq!(p.contains(&p.vertices()[2], 1e-9), Containment::Boundary);
    }

    #[test]
    fn reflection_keeps_words_consistent() {
        let p = SphericalPentagon::with_equal_edge_pairs(0.6, 0.8, 1.9, 2.1, 1.7).unwrap();
        let mirror = Isometry::reflection(&UnitVector::new(0.3, 1.0, 0.2).unwrap());
        let q = p.transformed(&mirror);
        let rebuilt = SphericalPentagon::new(*q.vertices(), *q.angles(), *q.edges());
        assert!(rebuilt.is_ok(), "{rebuilt:?}");
        assert_abs_diff_eq!(q.area(), p.area(), epsilon = 1e-12);
    }

    #[test]
    fn arc_predicates() {
        let n = UnitVector::north();
        let e = UnitVector::new(1.0, 0.0, 0.0).unwrap();
        let f = UnitVector::new(0.0, 1.0, 0.0).unwrap();
        let g = UnitVector::new(1.0, 1.0, 0.2).unwrap();
        assert!(!arcs_intersect(&n, &e, &f, &g));
        let h = UnitVector::new(1.0, -1.0, 0.5).unwrap();
        let k = UnitVector::new(1.0, 1.0, 0.5).unwrap();
        assert!(arcs_intersect(&n, &e, &h, &k));
        assert_abs_diff_eq!(distance_to_arc(&f, &n, &e), PI / 2.0, epsilon = 1e-15);
        let mid = UnitVector::new(1.0, 0.0, 1.0).unwrap();
        assert!(distance_to_arc(&mid, &n, &e) < 1e-15);
    }

    fn arb_pentagon() -> impl Strategy<Value = SphericalPentagon> {
        (0.2f64..1.0, 0.2f64..1.0, 1.4f64..2.6, 1.4f64..2.6, 1.4f64..2.6).prop_filter_map("non-simple", |(s, l, a, b, g)| {
            let p = SphericalPentagon::with_equal_edge_pairs(s, l, a, b, g).ok()?;
            p.is_simple().then_some(p)
        })
    }

    proptest! {
        #[test]
        fn area_matches_fan_triangulation(p in arb_pentagon()) {
            prop_assert!((p.area() - fan_area(p.vertices())).abs() < 1e-10);
        }

        #[test]
        fn area_is_isometry_invariant(p in arb_pentagon(), x in -1.0f64..1.0, y in -1.0f64..1.0, angle in 0.0f64..6.0) {
            let axis = UnitVector::new(x, y, 0.7).unwrap();
            let g = Isometry::rotation_about_axis(&axis, angle);
            let q = p.transformed(&g);
            let m = SphericalPentagon::from_vertices(*q.vertices(), *q.edges().labels()).unwrap();
            prop_assert!((m.area() - p.area()).abs() < 1e-12);
        }

        #[test]
        fn walking_measured_words_reproduces_them(p in arb_pentagon()) {
            // re-walk the measured words from the canonical frame
            let q = SphericalPentagon::from_words(*p.edges(), *p.angles()).unwrap();
            for (x, y) in q.measured_edges().iter().zip(p.edges().lengths()) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }
}
