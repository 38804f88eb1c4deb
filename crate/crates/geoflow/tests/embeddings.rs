//! Immersions of central geometries.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use geoflow::curvature_field::{make_lambert_hill, CurvatureField};
use geoflow::embeddings::*;
use geoflow::integration::QuadratureConfig;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::with_tol(1e-13)
}

/// Length of the immersed meridian `r ∈ [0, r1]` by chord sums in `u = √r`.
fn chord_length(cache: &ProfileCache, r1: f64, n: usize) -> f64 {
    let point = |k: usize| {
        let r = r1 * (k as f64 / n as f64).powi(2);
        let p = cache.immerse(r, 0.0).unwrap();
        [p[0], p[2]]
    };
    (1..=n).map(|k| {
        let (a, b) = (point(k - 1), point(k));
        (b[0] - a[0]).hypot(b[1] - a[1])
    }).sum()
}

#[test]
fn meridian_arclength_reproduces_the_relation() {
    let rel = lambert_relation();
    let cache = ProfileCache::new(&rel, 3.0, 4000, &cfg()).unwrap();
    for r1 in [0.5, 1.5, 3.0] {
        let (s1, s2) = (chord_length(&cache, r1, 500), chord_length(&cache, r1, 1000));
        let richardson = (4.0 * s2 - s1) / 3.0;
        assert_abs_diff_eq!(richardson, rel.l_of_r(r1), epsilon = 1e-8);
    }
}

#[test]
fn profile_curvature_matches_the_hill_field() {
    // a surface of revolution with meridian arclength l(r) has K = l″/(r l′³)
    let rel = lambert_relation();
    let hill = make_lambert_hill();
    for r in [0.1, 0.8, 2.5] {
        let k = rel.l_double_prime(r) / (r * rel.l_prime(r).powi(3));
        assert_relative_eq!(k, hill.eval(rel.l_of_r(r), 0.0), max_relative = 1e-12);
    }
}

#[test]
fn chart_circles_have_the_relation_radius() {
    let rel = lambert_relation();
    let l = 1.4;
    let r = rel.r_of_l(l).unwrap();
    let h = profile_from_arclength(&rel, r, &cfg()).unwrap();
    for phi in [0.0, 1.0, 4.0] {
        let p = immerse_fnc(&rel, l, phi, &cfg()).unwrap();
        assert_abs_diff_eq!(p[0].hypot(p[1]), r, epsilon = 1e-12);
        assert_abs_diff_eq!(p[2], h, epsilon = 1e-14);
    }
    assert!(h < 0.0);
}

#[test]
fn profile_is_decreasing_and_concave() {
    let rel = lambert_relation();
    let cache = ProfileCache::new(&rel, 2.0, 300, &cfg()).unwrap();
    let hs: Vec<f64> = (0..=20).map(|k| cache.eval(0.1 * k as f64).unwrap()).collect();
    assert!(hs.windows(2).all(|w| w[1] < w[0]));
    assert!(profile_curvature(&rel, 1.0).unwrap() < 0.0);
    assert_abs_diff_eq!(cache.immerse_fnc(rel.l_of_r(1.0), 0.0).unwrap()[0], 1.0, epsilon = 1e-12);
}
