//! Finite-N triangulation end to end.

use approx::assert_abs_diff_eq;
use geoflow::curvature_field::{make_constant, make_lambert_hill, make_wave, FnField};
use geoflow::fundamental_solution::{fundamental_solution, sphere_closed_forms, TriangleSpec};
use geoflow::integration::QuadratureConfig;
use geoflow::triangulation::{triangulate, triangulate_detailed, SegmentKind};
use std::f64::consts::FRAC_PI_4;

#[test]
fn hyperbolic_constant_curvature_is_exact() {
    let spec = TriangleSpec::new(0.7, 0.4, 1.1);
    let want = sphere_closed_forms(-2.0, 0.7, 0.4, 1.1);
    let got = triangulate(&make_constant(-2.0), &spec, 21).unwrap().second_order();
    for (g, w) in got.iter().zip(want) {
        assert_abs_diff_eq!(*g, w, epsilon = 1e-12);
    }
}

#[test]
fn wave_field_converges_to_the_limit_formulas() {
    let field = make_wave(1.3, 0.0).unwrap();
    let spec = TriangleSpec::new(0.6, 0.9, FRAC_PI_4).with_base_phi(0.3);
    let limit = fundamental_solution(&field, &spec, &QuadratureConfig::with_tol(1e-12), false).unwrap().second_order();
    let err = |n| {
        let r = triangulate(&field, &spec, n).unwrap().second_order();
        r.iter().zip(limit).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max)
    };
    let (e1, e2, e3) = (err(40), err(80), err(160));
    assert!(e3 < e2 && e2 < e1, "{e1} {e2} {e3}");
    assert!((e1 / e2).log2() > 0.7 && (e2 / e3).log2() > 0.7, "{e1} {e2} {e3}");
}

#[test]
fn base_rotation_commutes_with_field_rotation() {
    let f = FnField::new("tilted", |l: f64, p: f64| 0.5 + l * (p - 0.2).cos());
    let g = FnField::new("tilted0", |l: f64, p: f64| 0.5 + l * p.cos());
    let a = triangulate(&f, &TriangleSpec::new(0.5, 0.8, 0.6).with_base_phi(0.2), 24).unwrap();
    let b = triangulate(&g, &TriangleSpec::new(0.5, 0.8, 0.6), 24).unwrap();
    for (x, y) in a.second_order().iter().zip(b.second_order()) {
        assert_abs_diff_eq!(*x, y, epsilon = 1e-13);
    }
}

#[test]
fn geometry_inventory() {
    let n = 9;
    let t = triangulate_detailed(&make_constant(1.0), &TriangleSpec::new(0.5, 1.0, 0.7), n).unwrap();
    let g = t.geometry();
    let count = |k: SegmentKind| g.segments.iter().filter(|s| s.kind == k).count();
    assert_eq!(count(SegmentKind::Base), n * n);
    assert_eq!(count(SegmentKind::Side), n);
    assert_eq!(count(SegmentKind::Rib), n * (n - 2));
    assert_eq!(count(SegmentKind::Diagonal), n * (n - 1));
    assert_eq!(count(SegmentKind::Top), n * (n - 1));
    assert!(g.checks.iter().all(|c| c.passes()));
    // slices fan out: each slice starts where the previous one's opening angle ends
    let first = g.segments.iter().find(|s| s.slice == 1 && s.kind == SegmentKind::Base).unwrap();
    assert_eq!(first.from.l, 0.0);
}

#[test]
fn invalid_inputs_are_rejected() {
    let f = make_constant(1.0);
    assert!(triangulate(&f, &TriangleSpec::new(-0.5, 1.0, 0.5), 8).is_err());
    assert!(triangulate(&f, &TriangleSpec::new(0.5, 1.0, 2.0), 8).is_err());
    // the hill has a pole at the origin, where the first segment of every slice is sampled
    assert!(triangulate(&make_lambert_hill(), &TriangleSpec::new(0.5, 1.0, 0.5), 8).is_err());
}
