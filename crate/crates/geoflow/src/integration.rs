//! Quadrature, product integrals and layered nested integrals.

use crate::error::{ensure, Error, Result};
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Mutex, OnceLock};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadRule {
    /// Fixed composite Gauss–Legendre rule with `panels` equal panels.
    Composite { order: usize, panels: usize },
    /// Globally adaptive bisection driven by a Gauss–Legendre rule.
    Adaptive { order: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rule: QuadRule,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rule: QuadRule::Adaptive { order: 8 }, abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 2000 }
    }
}

impl QuadratureConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { abs_tol: tol, rel_tol: tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let order = match self.rule {
            QuadRule::Composite { order, panels } => {
                ensure(panels >= 1, || "composite rule needs at least one panel".into())?;
                order
            }
            QuadRule::Adaptive { order } => order,
        };
        ensure(order >= 2, || format!("Gauss–Legendre order must be ≥ 2, got {order}"))?;
        ensure(self.abs_tol > 0.0 && self.rel_tol > 0.0, || "tolerances must be positive".into())
    }
}

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

/// Nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Newton iteration on the Legendre polynomial from the Chebyshev guess.
    fn compute(m: usize) -> Self {
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        for i in 0..m.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=m {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        Self { nodes, weights }
    }
}

/// Cached Gauss–Legendre rule of order `m`.
pub fn gauss_legendre(m: usize) -> &'static GaussRule {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussRule>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
    map.entry(m).or_insert_with(|| Box::leak(Box::new(GaussRule::compute(m))))
}

fn gl_panel<F: FnMut(f64) -> Result<f64>>(f: &mut F, rule: &GaussRule, a: f64, b: f64) -> Result<f64> {
    let (h, m) = (0.5 * (b - a), 0.5 * (a + b));
    let mut s = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let t = m + h * x;
        let v = f(t)?;
        if !v.is_finite() {
            return Err(Error::NonFinite(t));
        }
        s += w * v;
    }
    Ok(s * h)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    halves: (f64, f64),
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn segment<F: FnMut(f64) -> Result<f64>>(f: &mut F, rule: &GaussRule, a: f64, b: f64, whole: f64) -> Result<Segment> {
    let m = 0.5 * (a + b);
    let l = gl_panel(f, rule, a, m)?;
    let r = gl_panel(f, rule, m, b)?;
    Ok(Segment { a, b, value: l + r, error: (l + r - whole).abs(), halves: (l, r) })
}

/// Integrates a fallible integrand; errors raised inside `f` propagate.
pub fn quad_try<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    cfg.validate()?;
    ensure(a.is_finite() && b.is_finite(), || format!("integration limits must be finite: [{a}, {b}]"))?;
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0 });
    }
    if a > b {
        let r = quad_try(f, b, a, cfg)?;
        return Ok(QuadResult { value: -r.value, error: r.error });
    }
    match cfg.rule {
        QuadRule::Composite { order, panels } => {
            let rule = gauss_legendre(order);
            let h = (b - a) / panels as f64;
            let mut fine = 0.0;
            let mut coarse = 0.0;
            for p in 0..panels {
                let (x0, x1) = (a + p as f64 * h, if p + 1 == panels { b } else { a + (p + 1) as f64 * h });
                let s = segment(&mut f, rule, x0, x1, 0.0)?;
                fine += s.value;
                coarse += gl_panel(&mut f, rule, x0, x1)?;
            }
            Ok(QuadResult { value: fine, error: (fine - coarse).abs() })
        }
        QuadRule::Adaptive { order } => {
            let rule = gauss_legendre(order);
            let whole = gl_panel(&mut f, rule, a, b)?;
            let mut heap = BinaryHeap::new();
            heap.push(segment(&mut f, rule, a, b, whole)?);
            let mut splits = 0;
            loop {
                let value: f64 = heap.iter().map(|s| s.value).sum();
                let error: f64 = heap.iter().map(|s| s.error).sum();
                if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
                    return Ok(QuadResult { value, error });
                }
                if splits >= cfg.max_subdivisions {
                    return Err(Error::NoConvergence { value, error, subdivisions: splits });
                }
                let worst = heap.pop().expect("heap is never empty");
                let m = 0.5 * (worst.a + worst.b);
                if m <= worst.a || m >= worst.b {
                    return Err(Error::NoConvergence { value, error, subdivisions: splits });
                }
                heap.push(segment(&mut f, rule, worst.a, m, worst.halves.0)?);
                heap.push(segment(&mut f, rule, m, worst.b, worst.halves.1)?);
                splits += 1;
            }
        }
    }
}

/// `∫ₐᵇ f` within the configured tolerances.
pub fn quad<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(quad_try(|x| Ok(f(x)), a, b, cfg)?.value)
}

/// `∫ₓ₀ˣ¹ ∫_{lo(x)}^{hi(x)} f(x, y) dy dx` by iterated 1-D quadrature.
pub fn quad_nested2<F, L>(f: F, x0: f64, x1: f64, limits: L, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
    L: Fn(f64) -> (f64, f64),
{
    Ok(quad_try(
        |x| {
            let (lo, hi) = limits(x);
            Ok(quad_try(|y| Ok(f(x, y)), lo, hi, cfg)?.value)
        },
        x0,
        x1,
        cfg,
    )?
    .value)
}

/// Three-fold iterated integral; `limits1` gives the middle limits from the
/// outer variable and `limits2` the inner limits from the two outer ones.
pub fn quad_nested3<F, L1, L2>(f: F, x0: f64, x1: f64, limits1: L1, limits2: L2, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> f64,
    L1: Fn(f64) -> (f64, f64),
    L2: Fn(f64, f64) -> (f64, f64),
{
    let r = quad_try(
        |x| {
            let (lo1, hi1) = limits1(x);
            let mid = |y: f64| {
                let (lo2, hi2) = limits2(x, y);
                Ok(quad_try(|z| Ok(f(x, y, z)), lo2, hi2, cfg)?.value)
            };
            Ok(quad_try(mid, lo1, hi1, cfg)?.value)
        },
        x0,
        x1,
        cfg,
    )?;
    Ok(r.value)
}

/// `∏ₙ (1 + f(xₙ)·h)` with left-endpoint samples `xₙ = a + n h`, `h = (b − a)/N`.
pub fn product_integral_numeric<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).fold(1.0, |p, k| p * (1.0 + f(a + k as f64 * h) * h))
}

/// A product primitive `F` with `F′/F = f`.
pub struct PrimitivePair<'a> {
    pub f: Box<dyn Fn(f64) -> f64 + 'a>,
    pub primitive: Box<dyn Fn(f64) -> f64 + 'a>,
}

impl<'a> PrimitivePair<'a> {
    pub fn new(f: impl Fn(f64) -> f64 + 'a, primitive: impl Fn(f64) -> f64 + 'a) -> Self {
        Self { f: Box::new(f), primitive: Box::new(primitive) }
    }

    /// Largest `|F′/F − f|` over `samples` interior points, `F′` by central differences.
    pub fn consistency(&self, a: f64, b: f64, samples: usize) -> f64 {
        let h = 1e-5 * (b - a).abs().max(1e-3);
        (1..=samples)
            .map(|k| {
                let x = a + (b - a) * k as f64 / (samples + 1) as f64;
                let d = ((self.primitive)(x + h) - (self.primitive)(x - h)) / (2.0 * h);
                (d / (self.primitive)(x) - (self.f)(x)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Fundamental theorem of product integration: `F(b)/F(a)`.
pub fn product_integral_exact<F: Fn(f64) -> f64>(primitive: F, a: f64, b: f64) -> Result<f64> {
    let fa = primitive(a);
    if fa == 0.0 || !fa.is_finite() {
        return Err(Error::Domain(format!("product primitive must be finite and nonzero at a = {a}")));
    }
    Ok(primitive(b) / fa)
}

/// n-layered nested integral `Iₙ = Fⁿ/n!` of `f = F′` with `F(0) = 0`.
pub fn nested_power_integral(f_at_x: f64, n: u32) -> f64 {
    f_at_x.powi(n as i32) / factorial(n)
}

/// Layered integral with the lower-limit correction:
/// `Σ_{s=1}^{ι} (−1)^{ι−s}/(ι−s)! · F(0)^{ι−s} · (F(x)ˢ − F(0)ˢ)/s!`.
pub fn layered_integral_j<F: Fn(f64) -> f64>(primitive: F, x: f64, iota: u32) -> f64 {
    let (f0, fx) = (primitive(0.0), primitive(x));
    (1..=iota)
        .map(|s| {
            let sign = if (iota - s).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign / factorial(iota - s) * f0.powi((iota - s) as i32) * (fx.powi(s as i32) - f0.powi(s as i32)) / factorial(s)
        })
        .sum()
}

/// Left side of the alternating-factorial identity used for `J_ι`.
pub fn alternating_factorial_sum(iota: u32) -> f64 {
    (1..=iota)
        .map(|s| {
            let sign = if (iota - s).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign / (factorial(iota - s) * factorial(s))
        })
        .sum()
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |p, k| p * k as f64)
}

/// `|(b−a)/N Σₙ₌₁ᴺ f(a + n(b−a)/N) − ∫ₐᵇ f|` for each N.
pub fn riemann_limit_check<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n_list: &[usize]) -> Result<Vec<f64>> {
    ensure(n_list.windows(2).all(|w| w[0] < w[1]), || "N list must be increasing".into())?;
    let exact = quad(&f, a, b, &QuadratureConfig::with_tol(1e-13))?;
    Ok(n_list
        .iter()
        .map(|&n| {
            let h = (b - a) / n as f64;
            let s: f64 = (1..=n).map(|k| f(a + k as f64 * h)).sum();
            (s * h - exact).abs()
        })
        .collect())
}
