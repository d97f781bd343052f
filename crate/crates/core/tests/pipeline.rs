use std::f64::consts::PI;

use dodecatile::solver::{rigidity_type1, rigidity_type4, solve_type, RootTag, NEWTON_TOL};
use dodecatile::tilings::{builtin, validate_realization};
use dodecatile::type5::{build, classify_symmetry, is_isohedral, symmetry_group, SymmetryClass, Type5Params, DEFAULT_SYMMETRY_TOL};

fn a0() -> f64 {
    2.0 * (2.0 / (3f64.sqrt() * (1.0 + 5f64.sqrt()))).asin()
}

#[test]
fn generic_type5_tiling_validates_against_the_fixture() {
    let t = build(Type5Params::new(1.98, 2.21)).unwrap();
    let report = validate_realization(&builtin(5).unwrap(), &t.tiles).unwrap();
    assert!(report.valid, "{}", report.to_text());
    assert!(report.max_vertex_gap < 1e-9);
    for tile in &t.tiles {
        assert!((tile.area() - PI / 3.0).abs() < 1e-9);
    }
    assert!(is_isohedral(&t));
}

#[test]
fn roots_are_stable_under_grid_doubling() {
    for type_id in [2, 3] {
        let coarse = solve_type(type_id, 200, NEWTON_TOL).unwrap();
        let fine = solve_type(type_id, 400, NEWTON_TOL).unwrap();
        assert_eq!(coarse.roots.len(), 4);
        assert_eq!(fine.roots.len(), 4);
        for (c, f) in coarse.roots.iter().zip(&fine.roots) {
            assert_eq!(c.label, f.label);
            assert!((c.a.value() - f.a.value()).abs() < 1e-8);
            assert!((c.beta - f.beta).abs() < 1e-8);
        }
    }
}

#[test]
fn only_q_of_type2_touches_the_domain_edge() {
    for type_id in [2, 3] {
        let scan = solve_type(type_id, 300, NEWTON_TOL).unwrap();
        for r in &scan.roots {
            let edge = r.beta.abs().min((r.beta - 4.0 * PI / 3.0).abs()).min(r.a.value()).min(PI - r.a.value());
            let expect_edge = type_id == 2 && r.label == Some('Q');
            assert_eq!(edge < 1e-6, expect_edge, "type {type_id} root {:?}", r.label);
            assert!(r.condition.is_finite());
        }
        let p = scan.roots.iter().find(|r| r.tag == RootTag::Regular).unwrap();
        assert!((p.a.value() - a0()).abs() < 1e-9);
    }
}

#[test]
fn rigidity_certificates_force_the_regular_tile() {
    for cert in [rigidity_type1().unwrap(), rigidity_type4().unwrap()] {
        assert!(cert.is_unique_regular(), "type {}", cert.type_id);
        assert_eq!(cert.samples.len(), 200);
        assert!((cert.edge - a0()).abs() < 1e-12);
        assert!(cert.samples.iter().all(|s| !s.feasible()));
    }
}

#[test]
fn symmetry_orders_along_the_family() {
    let cases = [((2.0 * PI / 3.0, 2.0 * PI / 3.0), 120, SymmetryClass::Ih), ((2.2, 2.2), 24, SymmetryClass::Th), ((2.2, 1.95), 12, SymmetryClass::T)];
    for ((beta, gamma), order, class) in cases {
        let t = build(Type5Params::new(beta, gamma)).unwrap();
        assert_eq!(symmetry_group(&t.tiles, DEFAULT_SYMMETRY_TOL).unwrap().len(), order);
        assert_eq!(classify_symmetry(&t, 1e-9).unwrap(), class);
    }
}
