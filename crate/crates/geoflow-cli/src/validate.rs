//! Built-in validation suites with a JSON summary.

use crate::args::Suite;
use geoflow::curvature_field::{make_constant, GeometryHelpers};
use geoflow::fnc::metric_from_solution;
use geoflow::fundamental_solution::{fundamental_solution, sphere_closed_forms, TriangleSpec};
use geoflow::integration::{layered_integral_j, product_integral_exact, product_integral_numeric, quad, quad_nested2, quad_nested3, QuadratureConfig};
use geoflow::triangulation::triangulate_detailed;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

#[derive(Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(suite: &'static str, name: impl Into<String>, worst: f64, tol: f64) -> Check {
    Check { suite, name: name.into(), passed: worst <= tol, detail: format!("max deviation {worst:.3e} (tolerance {tol:.1e})") }
}

fn failed(suite: &'static str, name: impl Into<String>, err: impl std::fmt::Display) -> Check {
    Check { suite, name: name.into(), passed: false, detail: err.to_string() }
}

fn sphere(out: &mut Vec<Check>) {
    let cfg = QuadratureConfig::default();
    let vals = [0.2, 0.5, 1.0];
    for &a in &vals {
        for &c in &vals {
            for beta in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
                let name = format!("closed forms a={a} c={c} beta={beta:.6}");
                match fundamental_solution(&make_constant(1.0), &TriangleSpec::new(a, c, beta), &cfg, false) {
                    Ok(r) => {
                        let worst = r.second_order().iter().zip(sphere_closed_forms(1.0, a, c, beta)).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
                        out.push(check("sphere", name, worst, 1e-7));
                    }
                    Err(e) => out.push(failed("sphere", name, e)),
                }
            }
        }
    }
}

fn flat(out: &mut Vec<Check>) {
    let cfg = QuadratureConfig::default();
    let spec = TriangleSpec::new(0.5, 1.0, FRAC_PI_3);
    match fundamental_solution(&make_constant(0.0), &spec, &cfg, false) {
        Ok(r) => out.push(check("flat", "limit formulas vanish", r.second_order().iter().fold(0.0f64, |m, v| m.max(v.abs())), 1e-12)),
        Err(e) => out.push(failed("flat", "limit formulas vanish", e)),
    }
    for n in [13, 64] {
        let name = format!("triangulation N={n} is exactly zero");
        match triangulate_detailed(&make_constant(0.0), &spec, n) {
            Ok(t) => {
                let all = t.result.second_order().iter().chain(&t.state.c2).chain(&t.state.beta2).fold(0.0f64, |m, v| m.max(v.abs()));
                out.push(check("flat", name, all, 0.0));
            }
            Err(e) => out.push(failed("flat", name, e)),
        }
    }
}

fn integrals(out: &mut Vec<Check>) {
    let geom = GeometryHelpers { a: 0.6, c: 1.0, beta: 0.8 };
    let dy = move |j: f64| (j * geom.a * geom.a + geom.a * geom.c * geom.beta.cos()) / geom.y(j);
    type Pair = (&'static str, Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>);
    let pairs: Vec<Pair> = vec![
        ("f=1, F=exp(x)", Box::new(|_| 1.0), Box::new(|x: f64| x.exp())),
        ("f=2x, F=exp(x^2)", Box::new(|x| 2.0 * x), Box::new(|x: f64| (x * x).exp())),
        ("F=y(1-x)", Box::new(move |x| -dy(1.0 - x) / geom.y(1.0 - x)), Box::new(move |x| geom.y(1.0 - x))),
    ];
    for (name, f, big_f) in &pairs {
        let exact = match product_integral_exact(big_f, 0.0, 1.0) {
            Ok(v) => v,
            Err(e) => {
                out.push(failed("integrals", *name, e));
                continue;
            }
        };
        let scaled: Vec<f64> = [1_000usize, 10_000, 100_000].iter().map(|&n| (product_integral_numeric(f, 0.0, 1.0, n) - exact).abs() * n as f64).collect();
        let (lo, hi) = scaled.iter().fold((f64::MAX, 0.0f64), |(l, h), v| (l.min(*v), h.max(*v)));
        out.push(Check {
            suite: "integrals",
            name: format!("product integral {name} error is C/N"),
            passed: hi <= 1.2 * lo,
            detail: format!("N·error in [{lo:.4e}, {hi:.4e}]"),
        });
    }
    let cfg = QuadratureConfig::with_tol(1e-12);
    let f = |x: f64| 1.0 / (1.0 + x * x);
    let big_f = |x: f64| x.atan() + 0.3;
    let x = 0.9;
    let brute = [
        quad(f, 0.0, x, &cfg),
        quad_nested2(|a, b| f(a) * f(b), 0.0, x, |a| (0.0, a), &cfg),
        quad_nested3(|a, b, c| f(a) * f(b) * f(c), 0.0, x, |a| (0.0, a), |_, b| (0.0, b), &cfg),
    ];
    for (k, b) in brute.into_iter().enumerate() {
        let name = format!("layered integral iota={}", k + 1);
        match b {
            Ok(v) => out.push(check("integrals", name, (layered_integral_j(big_f, x, k as u32 + 1) - v).abs(), 1e-8)),
            Err(e) => out.push(failed("integrals", name, e)),
        }
    }
}

fn roundtrip(out: &mut Vec<Check>) {
    let cfg = QuadratureConfig::default();
    for c in [0.3f64, 0.7] {
        for (k, want, tol) in [(1.0, c.sin().powi(2), 1e-5), (0.0, c * c, 1e-8)] {
            let name = format!("g_phiphi K={k} c={c}");
            match metric_from_solution(&make_constant(k), (c, 0.0), &cfg) {
                Ok(m) => out.push(check("roundtrip", name, (m.g_phiphi - want).abs(), tol)),
                Err(e) => out.push(failed("roundtrip", name, e)),
            }
        }
    }
}

pub fn run(suite: Suite) -> Summary {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Sphere {
        sphere(&mut checks);
    }
    if all || suite == Suite::Flat {
        flat(&mut checks);
    }
    if all || suite == Suite::Integrals {
        integrals(&mut checks);
    }
    if all || suite == Suite::Roundtrip {
        roundtrip(&mut checks);
    }
    Summary { passed: checks.iter().all(|c| c.passed), checks }
}
