//! Second-order limit formulas for the geodesic triangle `(o, q, p)` and the
//! geodesic sampler built on them.
//!
//! With base line `c = |oq|`, side line `a = |qp|` leaving `q` at direction
//! angle `β` (measured from the outward radial direction), and the curvature
//! field pulled back to `K[i, j]`, the top line `b = |op|`, the top angle `γ`
//! at `p` and the opening angle `α` at `o` are
//! `b = b₀ + b₂`, `γ = γ₀ + γ₂`, `α = α₀ + α₂`, where every second-order term
//! is a linear functional of the field.

use crate::curvature_field::{CurvatureField, GeometryHelpers, IndexField, Rotated};
use crate::error::{ensure, Result};
use crate::integration::{quad_try, QuadratureConfig};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// The triangle at a base point `(c, φ_p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSpec {
    pub a: f64,
    pub c: f64,
    pub beta: f64,
    pub base_phi: f64,
}

impl TriangleSpec {
    pub fn new(a: f64, c: f64, beta: f64) -> Self {
        Self { a, c, beta, base_phi: 0.0 }
    }

    pub fn with_base_phi(mut self, phi: f64) -> Self {
        self.base_phi = phi;
        self
    }

    /// Checks `a, c > 0` and `β ∈ [0, π/2)`; with `allow_unsafe_beta` any `β ∈ [0, 2π)` passes.
    pub fn validate(&self, allow_unsafe_beta: bool) -> Result<()> {
        ensure(self.a.is_finite() && self.a > 0.0, || format!("side line a must be positive, got {}", self.a))?;
        ensure(self.c.is_finite() && self.c > 0.0, || format!("base line c must be positive, got {}", self.c))?;
        ensure(self.base_phi.is_finite(), || "base angle must be finite".into())?;
        if allow_unsafe_beta {
            ensure((0.0..TAU).contains(&self.beta), || format!("β must lie in [0, 2π), got {}", self.beta))
        } else {
            ensure((0.0..FRAC_PI_2).contains(&self.beta), || {
                format!("β must lie in [0, π/2) (pass the unsafe flag for the conjectured range), got {}", self.beta)
            })
        }
    }

    pub fn helpers(&self) -> GeometryHelpers {
        GeometryHelpers { a: self.a, c: self.c, beta: self.beta }
    }
}

/// Zeroth- and second-order coefficients of the top line, top angle and opening angle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FundamentalResult {
    pub b0: f64,
    pub b2: f64,
    pub gamma0: f64,
    pub gamma2: f64,
    pub alpha0: f64,
    pub alpha2: f64,
    /// Quadrature error estimates of `b2`, `gamma2`, `alpha2`.
    pub errors: [f64; 3],
}

impl FundamentalResult {
    pub fn b(&self) -> f64 {
        self.b0 + self.b2
    }
    pub fn gamma(&self) -> f64 {
        self.gamma0 + self.gamma2
    }
    pub fn alpha(&self) -> f64 {
        self.alpha0 + self.alpha2
    }
    pub fn second_order(&self) -> [f64; 3] {
        [self.b2, self.gamma2, self.alpha2]
    }
}

/// Euclidean top line and angles `(b₀, α₀, γ₀)`.
pub fn zeroth_order(spec: &TriangleSpec) -> (f64, f64, f64) {
    let g = spec.helpers();
    let (s, c) = spec.beta.sin_cos();
    let b0 = g.y(1.0);
    // atan2 forms agree with asin(a sinβ/b₀), asin(c sinβ/b₀) for acute angles
    let alpha0 = (spec.a * s).atan2(spec.c + spec.a * c);
    let gamma0 = (spec.c * s).atan2(spec.a + spec.c * c);
    (b0, alpha0, gamma0)
}

/// `∫₀¹ k² K[k, j] dk`.
fn inner_full(idx: &IndexField, j: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(quad_try(|k| Ok(k * k * idx.try_eval(k, j)?), 0.0, 1.0, cfg)?.value)
}

/// `(1/n²)∫₀ⁿ k² K[k, j] dk = n ∫₀¹ u² K[nu, j] du`; the rescaled form has no 0/0 at `n → 0`.
fn inner_scaled(idx: &IndexField, n: f64, j: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(n * quad_try(|u| Ok(u * u * idx.try_eval(n * u, j)?), 0.0, 1.0, cfg)?.value)
}

fn outer(f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let r = quad_try(f, a, b, cfg)?;
    Ok((r.value, r.error))
}

fn b2_with_error(field: &dyn CurvatureField, spec: &TriangleSpec, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let g = spec.helpers();
    let f = g.f();
    if f == 0.0 {
        return Ok((0.0, 0.0));
    }
    let idx = IndexField::new(field, spec.a, spec.c, spec.beta);
    let (v, e) = outer(|n| Ok(n * inner_full(&idx, 1.0 - n, cfg)?), 0.0, 1.0, cfg)?;
    let s = -f * f / g.y(1.0);
    Ok((s * v, (s * e).abs()))
}

fn gamma2_with_error(field: &dyn CurvatureField, spec: &TriangleSpec, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let g = spec.helpers();
    let f = g.f();
    if f == 0.0 {
        return Ok((0.0, 0.0));
    }
    let idx = IndexField::new(field, spec.a, spec.c, spec.beta);
    let w = spec.a * g.z(1.0) / g.y(1.0).powi(2);
    let (v, e) = outer(|n| Ok((1.0 - n * w) * inner_full(&idx, 1.0 - n, cfg)?), 0.0, 1.0, cfg)?;
    Ok((f * v, (f * e).abs()))
}

fn alpha2_with_error(field: &dyn CurvatureField, spec: &TriangleSpec, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let g = spec.helpers();
    let f = g.f();
    if f == 0.0 {
        return Ok((0.0, 0.0));
    }
    let idx = IndexField::new(field, spec.a, spec.c, spec.beta);
    let a = spec.a;
    let (v, e) = outer(
        |j| {
            let t1 = quad_try(|n| inner_scaled(&idx, n, j, cfg), 0.0, 1.0, cfg)?.value;
            let (y, z) = (g.y(j), g.z(j));
            let (y2, y4) = (y * y, y.powi(4));
            let (w0, w1) = (a * z / y2, (f * f - a * a * z * z) / y4);
            let t2 = quad_try(|n| Ok((w0 + n * w1) * inner_full(&idx, j - n, cfg)?), 0.0, j, cfg)?.value;
            Ok(t1 + t2)
        },
        0.0,
        1.0,
        cfg,
    )?;
    Ok((f * v, (f * e).abs()))
}

/// `b₂ = −f²/y(1) ∫₀¹ n ∫₀¹ k² K[k, 1−n] dk dn`.
pub fn top_line_b2(field: &dyn CurvatureField, spec: &TriangleSpec, cfg: &QuadratureConfig) -> Result<f64> {
    spec.validate(false)?;
    let rotated = Rotated { inner: field, phi_p: spec.base_phi, mirrored: false };
    Ok(b2_with_error(&rotated, spec, cfg)?.0)
}

/// `γ₂ = f ∫₀¹ (1 − n a z(1)/y²(1)) ∫₀¹ k² K[k, 1−n] dk dn`.
pub fn top_angle_gamma2(field: &dyn CurvatureField, spec: &TriangleSpec, cfg: &QuadratureConfig) -> Result<f64> {
    spec.validate(false)?;
    let rotated = Rotated { inner: field, phi_p: spec.base_phi, mirrored: false };
    Ok(gamma2_with_error(&rotated, spec, cfg)?.0)
}

/// `α₂ = f ∫₀¹ { ∫₀¹ n⁻² ∫₀ⁿ k² K[k,j] dk dn + ∫₀ʲ [a z/y² + n (f² − a²z²)/y⁴] ∫₀¹ k² K[k, j−n] dk dn } dj`.
pub fn opening_angle_alpha2(field: &dyn CurvatureField, spec: &TriangleSpec, cfg: &QuadratureConfig) -> Result<f64> {
    spec.validate(false)?;
    let rotated = Rotated { inner: field, phi_p: spec.base_phi, mirrored: false };
    Ok(alpha2_with_error(&rotated, spec, cfg)?.0)
}

fn solve_unchecked(field: &dyn CurvatureField, spec: &TriangleSpec, cfg: &QuadratureConfig) -> Result<FundamentalResult> {
    let rotated = Rotated { inner: field, phi_p: spec.base_phi, mirrored: false };
    let (b0, alpha0, gamma0) = zeroth_order(spec);
    let (b2, eb) = b2_with_error(&rotated, spec, cfg)?;
    let (gamma2, eg) = gamma2_with_error(&rotated, spec, cfg)?;
    let (alpha2, ea) = alpha2_with_error(&rotated, spec, cfg)?;
    Ok(FundamentalResult { b0, b2, gamma0, gamma2, alpha0, alpha2, errors: [eb, eg, ea] })
}

/// All three limit formulas for the triangle at `(c, spec.base_phi)`.
///
/// The field is rotated so that the base point sits on `φ = 0`.
pub fn fundamental_solution(
    field: &dyn CurvatureField,
    spec: &TriangleSpec,
    cfg: &QuadratureConfig,
    allow_unsafe_beta: bool,
) -> Result<FundamentalResult> {
    spec.validate(allow_unsafe_beta)?;
    solve_unchecked(field, spec, cfg)
}

/// Point `(l, φ)` reached from `p = (l_p, φ_p)` after arclength `λ` in direction `β`.
///
/// `β` is measured from the outward radial direction, counter-clockwise.
/// Only `β ∈ [0, π/2]` is covered by the derivation; the sampler rejects other
/// directions unless `allow_unsafe_beta` is set. Directions in `(π, 2π)` are
/// handled by mirroring the field about the base ray, and a negative `λ` is
/// the opposite direction.
pub fn geodesic_sample(
    field: &dyn CurvatureField,
    p: (f64, f64),
    beta: f64,
    lambda: f64,
    cfg: &QuadratureConfig,
    allow_unsafe_beta: bool,
) -> Result<(f64, f64)> {
    let (l_p, phi_p) = p;
    ensure(l_p.is_finite() && l_p >= 0.0, || format!("base distance must be non-negative, got {l_p}"))?;
    ensure(beta.is_finite() && lambda.is_finite(), || "direction and arclength must be finite".into())?;
    let (mut beta, mut lambda) = (beta, lambda);
    if lambda < 0.0 {
        lambda = -lambda;
        beta += PI;
    }
    beta = beta.rem_euclid(TAU);
    if !allow_unsafe_beta {
        ensure(beta <= FRAC_PI_2, || format!("direction β = {beta} is outside [0, π/2]; pass the unsafe flag for the conjectured range"))?;
    }
    if lambda == 0.0 {
        return Ok((l_p, phi_p));
    }
    if l_p == 0.0 {
        return Ok((lambda, (phi_p + beta).rem_euclid(TAU)));
    }
    let mirrored = beta > PI;
    let b = if mirrored { TAU - beta } else { beta };
    let spec = TriangleSpec { a: lambda, c: l_p, beta: b, base_phi: 0.0 };
    let rotated = Rotated { inner: field, phi_p, mirrored };
    let r = solve_unchecked(&rotated, &spec, cfg)?;
    let dphi = if mirrored { -r.alpha() } else { r.alpha() };
    Ok((r.b(), phi_p + dphi))
}

/// Closed-form `(b₂, γ₂, α₂)` for constant curvature `k`.
pub fn sphere_closed_forms(k: f64, a: f64, c: f64, beta: f64) -> [f64; 3] {
    let y = (a * a + c * c + 2.0 * a * c * beta.cos()).sqrt();
    let (s, cb) = beta.sin_cos();
    [
        -k * a * a * c * c * s * s / (6.0 * y),
        k * a * c * s * (a * a + 2.0 * c * c + 3.0 * a * c * cb) / (6.0 * y * y),
        k * a * c * s * (2.0 * a * a + c * c + 3.0 * a * c * cb) / (6.0 * y * y),
    ]
}
