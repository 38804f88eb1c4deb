//! Faithful normal charts.
//!
//! Directions at the origin are unit vectors parametrized by `φ` and the tilt
//! angles `θ₁ … θ_{n−2}`; a point is labelled by the direction and arclength of
//! the geodesic reaching it. This module holds the angular machinery, the
//! parameters of the geodesic plane through a rotated triangle, and the
//! reconstruction of the (diagonal) metric from the geodesic flow.

use crate::curvature_field::CurvatureField;
use crate::curved_trig::{cos_k, sin_k};
use crate::error::{ensure, Error, Result};
use crate::fundamental_solution::geodesic_sample;
use crate::integration::QuadratureConfig;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// `(φ, θ₁, …, θ_{n−2})` with `φ ∈ [0, 2π)` and `θ_k ∈ (−π/2, π/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularParams {
    pub phi: f64,
    pub thetas: Vec<f64>,
}

impl AngularParams {
    pub fn new(phi: f64, thetas: Vec<f64>) -> Self {
        Self { phi, thetas }
    }

    pub fn dim(&self) -> usize {
        self.thetas.len() + 2
    }
}

/// A unit vector in `ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionVector {
    pub components: Vec<f64>,
}

impl DirectionVector {
    /// Normalizes `v`; fails for the zero vector.
    pub fn from_vec(v: Vec<f64>) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        ensure(norm > 0.0 && norm.is_finite(), || "direction vector must be non-zero and finite".into())?;
        Ok(Self { components: v.into_iter().map(|x| x / norm).collect() })
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.components.iter().zip(&other.components).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// `Ω(φ, θ₁, …) = (cos φ, cos θ_{n−2}⋯cos θ₁ sin φ, sin θ₁ sin φ, sin θ₂ cos θ₁ sin φ, …)`.
pub fn omega(params: &AngularParams) -> DirectionVector {
    let n = params.dim();
    let (s, c) = params.phi.sin_cos();
    let mut v = vec![0.0; n];
    v[0] = c;
    let mut tail = s; // Π_{k<m} cos θ_k · sin φ
    for (m, th) in params.thetas.iter().enumerate() {
        v[m + 2] = th.sin() * tail;
        tail *= th.cos();
    }
    v[1] = tail;
    DirectionVector { components: v }
}

/// Inverse of [`omega`] by backward recursion through the tilt angles.
///
/// Where a tilt is undetermined (the remaining components vanish) it is set to 0.
pub fn omega_inverse(dir: &DirectionVector) -> Result<AngularParams> {
    let v = &dir.components;
    let n = v.len();
    ensure(n >= 2, || format!("direction vectors need dimension ≥ 2, got {n}"))?;
    ensure((dir.norm() - 1.0).abs() < 1e-10, || format!("not a unit vector (|Ω| = {})", dir.norm()))?;
    let mut thetas = vec![0.0; n - 2];
    let mut tail = v[1];
    for m in (0..n - 2).rev() {
        let opp = v[m + 2];
        if tail == 0.0 && opp == 0.0 {
            continue;
        }
        // cos θ > 0, so the partial product keeps the sign of `tail`
        let sgn = if tail < 0.0 { -1.0 } else { 1.0 };
        thetas[m] = (sgn * opp).atan2(tail.abs());
        tail = sgn * tail.hypot(opp);
    }
    let phi = tail.atan2(v[0]).rem_euclid(TAU);
    Ok(AngularParams { phi, thetas })
}

/// Great-circle distance `acos(u·v) ∈ [0, π]`.
pub fn angle_between(u: &DirectionVector, v: &DirectionVector) -> f64 {
    u.dot(v).clamp(-1.0, 1.0).acos()
}

fn rot_x(t: f64, v: [f64; 3]) -> [f64; 3] {
    let (s, c) = t.sin_cos();
    [v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]]
}

fn rot_z(t: f64, v: [f64; 3]) -> [f64; 3] {
    let (s, c) = t.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]]
}

/// Direction angles `(φ, θ)` of the triangle rotated from the origin
/// direction to `Ω_p`, with opening angle `α₁` and tilt `α₂`:
/// `Ω = R_x(θ_p) R_z(φ_p) Ω(α₁, α₂)`.
///
/// With `Cosa₂ = cos α₁ cos φ_p − sin α₁ sin φ_p cos α₂` and
/// `C̃osa₂ = cos α₁ sin φ_p + sin α₁ cos φ_p cos α₂`,
/// `cos φ = Cosa₂` and `tan θ = (sin θ_p C̃osa₂ + cos θ_p sin α₁ sin α₂)/(cos θ_p C̃osa₂ − sin θ_p sin α₁ sin α₂)`.
/// Quadrants are taken from the two-argument arctangent so that the result
/// lies in `φ ∈ [0, 2π)`, `θ ∈ (−π/2, π/2]`.
pub fn solve_angles_3d(omega_p: &DirectionVector, alpha1: f64, alpha2: f64) -> Result<(f64, f64)> {
    ensure(omega_p.components.len() == 3, || "solve_angles_3d needs a direction on S²".into())?;
    let p = omega_inverse(omega_p)?;
    let (phi_p, theta_p) = (p.phi, p.thetas[0]);
    let cosa = alpha1.cos() * phi_p.cos() - alpha1.sin() * phi_p.sin() * alpha2.cos();
    let cosa_t = alpha1.cos() * phi_p.sin() + alpha1.sin() * phi_p.cos() * alpha2.cos();
    let tilt = alpha1.sin() * alpha2.sin();
    let (st, ct) = theta_p.sin_cos();
    let num = st * cosa_t + ct * tilt;
    let den = ct * cosa_t - st * tilt;
    if num == 0.0 && den == 0.0 {
        // on the axis: θ is free
        return Ok((if cosa >= 0.0 { 0.0 } else { PI }, 0.0));
    }
    // (den, num) = sin φ (cos θ, sin θ); choose sin φ with the sign that keeps cos θ ≥ 0
    let sgn = if den < 0.0 || (den == 0.0 && num < 0.0) { -1.0 } else { 1.0 };
    let sin_phi = sgn * den.hypot(num);
    let mut theta = (sgn * num).atan2(sgn * den);
    if theta <= -FRAC_PI_2 {
        theta += PI;
    }
    Ok((sin_phi.atan2(cosa).rem_euclid(TAU), theta))
}

/// Direction labels `(β₁, β₂)` of a tangent direction `dir` at `Ω_p`, after
/// rotating it back to the origin direction: `Ω(β₁, β₂) = R_z(φ_p)⁻¹ R_x(θ_p)⁻¹ dir`.
pub fn direction_labels(omega_p: &DirectionVector, dir: [f64; 3]) -> Result<(f64, f64)> {
    let p = omega_inverse(omega_p)?;
    ensure(p.thetas.len() == 1, || "direction labels need a direction on S²".into())?;
    let v = rot_z(-p.phi, rot_x(-p.thetas[0], dir));
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    ensure(n > 0.0, || "zero tangent direction".into())?;
    Ok(((v[0] / n).clamp(-1.0, 1.0).acos(), v[2].atan2(v[1])))
}

/// Labels of a geodesic plane through the origin: `U = R_z(φ_K) R_x(θ_K) U₀`
/// with `U₀` the `x₁x₂`-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneParams {
    /// `φ_K ∈ [0, π)`
    pub phi_k: f64,
    /// `θ_K ∈ (−π/2, π/2]`
    pub theta_k: f64,
    /// Signed arc from the plane's base direction `Ω(φ_K, 0)` to `Ω_p`.
    pub tau: f64,
}

impl PlaneParams {
    /// Unit normal of the plane.
    pub fn normal(&self) -> [f64; 3] {
        rot_z(self.phi_k, rot_x(self.theta_k, [0.0, 0.0, 1.0]))
    }

    /// Orthonormal in-plane basis `(u₀, u₁)`, `u₀ = Ω(φ_K, 0)`.
    pub fn basis(&self) -> ([f64; 3], [f64; 3]) {
        (rot_z(self.phi_k, [1.0, 0.0, 0.0]), rot_z(self.phi_k, rot_x(self.theta_k, [0.0, 1.0, 0.0])))
    }

    /// In-plane polar angle of a direction lying in the plane.
    pub fn in_plane_angle(&self, v: &[f64]) -> f64 {
        let (u0, u1) = self.basis();
        let d = |u: [f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        d(u1).atan2(d(u0))
    }
}

/// Plane labels from the plane's unit normal, folded into the half-ranges.
fn plane_from_normal(mut n: [f64; 3]) -> (f64, f64) {
    if n[2] < 0.0 {
        n = [-n[0], -n[1], -n[2]];
    }
    if n[0].hypot(n[1]) < 1e-15 {
        return (0.0, 0.0);
    }
    let mut phi = n[0].atan2(-n[1]);
    let mut theta = n[0].hypot(n[1]).atan2(n[2]);
    if phi < 0.0 {
        phi += PI;
        theta = -theta;
    }
    if phi >= PI {
        phi -= PI;
        theta = -theta;
    }
    (phi, theta)
}

/// Parameters of the geodesic plane containing the geodesic that leaves
/// `Ω_p = Ω(φ_p, θ_p)` in the direction with tilt `α₂` (the plane through the
/// origin direction tilted by `α₂ − θ_p`, then rotated to `Ω_p`).
///
/// The labels are read off the plane normal
/// `n = R_x(θ_p) R_z(φ_p) R_x(α₂ − θ_p) e₃`; `τ` uses the signed arcsine
/// `sign(θ_p α₂) asin(sin θ_p sin φ_K / sin(α₂ − θ_p))`.
pub fn curvature_plane(phi_p: f64, theta_p: f64, alpha2: f64) -> PlaneParams {
    let t = alpha2 - theta_p;
    let (sf, cf) = phi_p.sin_cos();
    let (st, ct) = theta_p.sin_cos();
    let (s, c) = t.sin_cos();
    let n = [sf * s, -ct * cf * s - st * c, -st * cf * s + ct * c];
    let (phi_k, theta_k) = plane_from_normal(n);
    let tau = if s.abs() < 1e-300 {
        0.0
    } else {
        (theta_p * alpha2).signum() * (st * phi_k.sin() / s).clamp(-1.0, 1.0).asin()
    };
    PlaneParams { phi_k, theta_k, tau }
}

/// The piecewise solution `A sin²φ_K + B sin 2φ_K = C` with
/// `A = sin²θ_p/sin²(α₂−θ_p) + sin²φ_p (cos²θ_p + 1) − 1`, `B = ½ sin 2φ_p cos θ_p`,
/// `C = sin²φ_p`, choosing the root by the sign of `B`, and
/// `θ_K = asin(sin φ_p sin(α₂−θ_p)/sin φ_K)`.
///
/// The quadratic loses the orientation of `θ_K` (it is squared away), so
/// this agrees with [`curvature_plane`] on part of the domain only; it is kept
/// for comparison.
pub fn curvature_plane_piecewise(phi_p: f64, theta_p: f64, alpha2: f64) -> (f64, f64) {
    let t = alpha2 - theta_p;
    let a = theta_p.sin().powi(2) / t.sin().powi(2) + phi_p.sin().powi(2) * (theta_p.cos().powi(2) + 1.0) - 1.0;
    let b = 0.5 * (2.0 * phi_p).sin() * theta_p.cos();
    let c = phi_p.sin().powi(2);
    let d = (b * b + (a - c) * c).max(0.0).sqrt();
    let phi_k = if b >= 0.0 { (c / (b + d)).atan() } else { (c / (b - d)).atan() + PI };
    let theta_k = if phi_k.sin() == 0.0 { 0.0 } else { (phi_p.sin() * t.sin() / phi_k.sin()).clamp(-1.0, 1.0).asin() };
    (phi_k, theta_k)
}

/// Diagonal metric in faithful normal coordinates (`g_ll = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricDiag {
    pub g_ll: f64,
    pub g_phiphi: f64,
    pub g_thetatheta: Option<f64>,
}

/// How `g_φφ` is obtained from the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricMethod {
    /// Spread of the neighbouring radial geodesics, marched with exact
    /// constant-curvature steps and Richardson-extrapolated.
    #[default]
    StepField,
    /// `(1 − l̇²)/φ̇²` from central differences of the second-order geodesic
    /// sampler at `λ = 0` in the direction `β = π/2`.
    SecondOrderFd,
}

const MARCH_STEPS: usize = 256;

/// Geodesic spread `r(l)` along the radial geodesic at angle `phi`:
/// `r″ = −K r`, `r(0) = 0`, `r′(0) = 1`, integrated with constant-curvature
/// transfer steps at the midpoint curvature.
pub fn radial_spread(field: &dyn CurvatureField, l: f64, phi: f64) -> Result<f64> {
    ensure(l.is_finite() && l >= 0.0, || format!("distance must be non-negative, got {l}"))?;
    if l == 0.0 {
        return Ok(0.0);
    }
    let march = |steps: usize| -> Result<f64> {
        let h = l / steps as f64;
        let (mut r, mut dr) = (0.0, 1.0);
        for k in 0..steps {
            let kk = field.try_eval((k as f64 + 0.5) * h, phi)?;
            let (c, s) = (cos_k(kk, h), sin_k(kk, h));
            (r, dr) = (c * r + s * dr, -kk * s * r + c * dr);
        }
        Ok(r)
    };
    let coarse = march(MARCH_STEPS)?;
    let fine = march(2 * MARCH_STEPS)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn fd_derivative(f: impl Fn(f64) -> Result<f64>, h: f64) -> Result<f64> {
    let d = |h: f64| -> Result<f64> { Ok((f(h)? - f(-h)?) / (2.0 * h)) };
    Ok((4.0 * d(h / 2.0)? - d(h)?) / 3.0)
}

fn flow_derivatives(field: &dyn CurvatureField, p: (f64, f64), cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let h = 1e-4 * p.0.max(1.0);
    let l_dot = fd_derivative(|lam| Ok(geodesic_sample(field, p, FRAC_PI_2, lam, cfg, true)?.0), h)?;
    let phi_dot = fd_derivative(|lam| Ok(geodesic_sample(field, p, FRAC_PI_2, lam, cfg, true)?.1), h)?;
    Ok((l_dot, phi_dot))
}

/// `g_φφ` at `p = (l_p, φ_p)` with the default [`MetricMethod::StepField`].
pub fn metric_from_solution(field: &dyn CurvatureField, p: (f64, f64), cfg: &QuadratureConfig) -> Result<MetricDiag> {
    metric_from_solution_with(field, p, cfg, MetricMethod::default())
}

pub fn metric_from_solution_with(
    field: &dyn CurvatureField,
    p: (f64, f64),
    cfg: &QuadratureConfig,
    method: MetricMethod,
) -> Result<MetricDiag> {
    let (l_p, phi_p) = p;
    ensure(l_p.is_finite() && l_p > 0.0, || format!("the metric needs l_p > 0, got {l_p}"))?;
    let g = match method {
        MetricMethod::StepField => radial_spread(field, l_p, phi_p)?.powi(2),
        MetricMethod::SecondOrderFd => {
            let (l_dot, phi_dot) = flow_derivatives(field, p, cfg)?;
            if phi_dot.abs() < 1e-12 {
                return Err(Error::Degenerate(format!("φ̇ = {phi_dot:e} vanishes at the base point")));
            }
            (1.0 - l_dot * l_dot) / (phi_dot * phi_dot)
        }
    };
    Ok(MetricDiag { g_ll: 1.0, g_phiphi: g, g_thetatheta: None })
}

/// `l̇` of the `φ`-coordinate geodesic at `p`; the `g_lφ` cross term is
/// proportional to it and vanishes in a faithful normal chart.
pub fn cross_term(field: &dyn CurvatureField, p: (f64, f64), cfg: &QuadratureConfig) -> Result<f64> {
    Ok(flow_derivatives(field, p, cfg)?.0)
}

/// `K = −r″/r` with `r = √g_φφ`, second derivative by central differences
/// with one Richardson level.
pub fn gauss_from_metric(g_phiphi: impl Fn(f64) -> Result<f64>, l: f64) -> Result<f64> {
    let r = |x: f64| -> Result<f64> {
        let g = g_phiphi(x)?;
        ensure(g >= 0.0, || format!("negative metric component {g} at l = {x}"))?;
        Ok(g.sqrt())
    };
    let r0 = r(l)?;
    ensure(r0 > 1e-8, || format!("r = {r0:e} too small at l = {l}"))?;
    let h = 1e-3 * l.abs().max(1.0);
    ensure(l - h > 0.0, || format!("l = {l} too close to the origin for the difference stencil"))?;
    let d2 = |h: f64| -> Result<f64> { Ok((r(l + h)? - 2.0 * r0 + r(l - h)?) / (h * h)) };
    let rpp = (4.0 * d2(h / 2.0)? - d2(h)?) / 3.0;
    Ok(-rpp / r0)
}

/// Curvature of a 3-D geometry given per geodesic plane through the origin:
/// `K(l, ψ; U)` with `ψ` the in-plane polar angle.
pub trait PlaneCurvature: Send + Sync {
    fn eval(&self, l: f64, psi: f64, plane: &PlaneParams) -> f64;

    fn name(&self) -> String {
        "plane-field".into()
    }
}

/// Constant curvature on every plane (the unit 3-sphere for `k = 1`).
#[derive(Debug, Clone, Copy)]
pub struct UniformPlanes(pub f64);

impl PlaneCurvature for UniformPlanes {
    fn eval(&self, _l: f64, _psi: f64, _plane: &PlaneParams) -> f64 {
        self.0
    }
}

/// `K = cos²φ_K cos²(2θ_K)`: constant on each plane but different across planes.
#[derive(Debug, Clone, Copy)]
pub struct PlaneDependent;

impl PlaneCurvature for PlaneDependent {
    fn eval(&self, _l: f64, _psi: f64, plane: &PlaneParams) -> f64 {
        plane.phi_k.cos().powi(2) * (2.0 * plane.theta_k).cos().powi(2)
    }
    fn name(&self) -> String {
        "plane-dependent".into()
    }
}

/// The restriction of a [`PlaneCurvature`] to one plane.
pub struct PlaneRestriction<'a> {
    pub field: &'a dyn PlaneCurvature,
    pub plane: PlaneParams,
}

impl CurvatureField for PlaneRestriction<'_> {
    fn eval(&self, l: f64, psi: f64) -> f64 {
        self.field.eval(l, psi, &self.plane)
    }
    fn name(&self) -> String {
        self.field.name()
    }
}

/// `g_φφ` and `g_θθ` at `p = (l_p, φ_p, θ_p)`.
///
/// The `φ`-coordinate geodesic lies in the plane with tilt `α₂ = θ_p`, the
/// `θ`-coordinate geodesic in the one with `α₂ = θ_p + π/2`; in each plane the
/// 2-D metric is reconstructed and `g_θθ` picks up the `sin²φ_p` of the
/// direction sphere.
pub fn metric_3d(
    field: &dyn PlaneCurvature,
    p: (f64, f64, f64),
    cfg: &QuadratureConfig,
    method: MetricMethod,
) -> Result<MetricDiag> {
    let (l_p, phi_p, theta_p) = p;
    let omega_p = omega(&AngularParams::new(phi_p, vec![theta_p]));
    let component = |alpha2: f64| -> Result<f64> {
        let plane = curvature_plane(phi_p, theta_p, alpha2);
        let psi = plane.in_plane_angle(&omega_p.components);
        let restricted = PlaneRestriction { field, plane };
        Ok(metric_from_solution_with(&restricted, (l_p, psi), cfg, method)?.g_phiphi)
    };
    let g_pp = component(theta_p)?;
    let g_tt = component(theta_p + FRAC_PI_2)? * phi_p.sin().powi(2);
    Ok(MetricDiag { g_ll: 1.0, g_phiphi: g_pp, g_thetatheta: Some(g_tt) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature_field::{make_constant, make_lambert_hill};
    use approx::assert_abs_diff_eq;

    fn dir(v: &[f64]) -> DirectionVector {
        DirectionVector::from_vec(v.to_vec()).unwrap()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&AngularParams::new(0.0, vec![0.0, 0.0])).components, vec![1.0, 0.0, 0.0, 0.0]);
        let v = omega(&AngularParams::new(FRAC_PI_2, vec![0.0])).components;
        assert_abs_diff_eq!(v[0], 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(v[1], 1.0);
        assert_eq!(v[2], 0.0);
    }

    #[test]
    fn inverse_round_trip() {
        let p = AngularParams::new(4.0, vec![0.3, -1.2, 0.7]);
        let q = omega_inverse(&omega(&p)).unwrap();
        assert_abs_diff_eq!(p.phi, q.phi, epsilon = 1e-12);
        for (a, b) in p.thetas.iter().zip(&q.thetas) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        let two = omega_inverse(&dir(&[-1.0, -1.0])).unwrap();
        assert_abs_diff_eq!(two.phi, 1.25 * PI, epsilon = 1e-15);
    }

    #[test]
    fn angles() {
        let u = omega(&AngularParams::new(0.4, vec![0.0]));
        let v = omega(&AngularParams::new(1.5, vec![0.0]));
        assert_abs_diff_eq!(angle_between(&u, &v), 1.1, epsilon = 1e-14);
        assert_eq!(angle_between(&u, &u), 0.0);
        assert_abs_diff_eq!(angle_between(&dir(&[1.0, 0.0, 0.0]), &dir(&[0.0, 0.0, 1.0])), FRAC_PI_2);
    }

    #[test]
    fn solve_angles_trivial_cases() {
        let p = omega(&AngularParams::new(1.1, vec![0.4]));
        let (phi, theta) = solve_angles_3d(&p, 0.0, 0.9).unwrap();
        assert_abs_diff_eq!(phi, 1.1, epsilon = 1e-14);
        assert_abs_diff_eq!(theta, 0.4, epsilon = 1e-14);
        let o = dir(&[1.0, 0.0, 0.0]);
        let (phi, theta) = solve_angles_3d(&o, 0.8, -0.6).unwrap();
        assert_abs_diff_eq!(phi, 0.8, epsilon = 1e-14);
        assert_abs_diff_eq!(theta, -0.6, epsilon = 1e-14);
    }

    #[test]
    fn coordinate_direction_labels() {
        let (phi, theta) = (0.9_f64, 0.35_f64);
        let p = omega(&AngularParams::new(phi, vec![theta]));
        let d_phi = [-phi.sin(), theta.cos() * phi.cos(), theta.sin() * phi.cos()];
        let (b1, b2) = direction_labels(&p, d_phi).unwrap();
        assert_abs_diff_eq!(b1, FRAC_PI_2, epsilon = 1e-14);
        assert_abs_diff_eq!(b2, 0.0, epsilon = 1e-14);
        let d_theta = [0.0, -theta.sin(), theta.cos()];
        let (b1, b2) = direction_labels(&p, d_theta).unwrap();
        assert_abs_diff_eq!(b1, FRAC_PI_2, epsilon = 1e-14);
        assert_abs_diff_eq!(b2, FRAC_PI_2, epsilon = 1e-14);
    }

    #[test]
    fn plane_table() {
        let p = curvature_plane(0.0, 0.0, 0.0);
        assert_eq!((p.phi_k, p.theta_k), (0.0, 0.0));
        let p = curvature_plane(0.0, 0.0, FRAC_PI_2);
        assert_abs_diff_eq!(p.phi_k, 0.0);
        assert_abs_diff_eq!(p.theta_k, FRAC_PI_2, epsilon = 1e-15);
        let p = curvature_plane(0.0, 0.0, PI / 4.0);
        assert_abs_diff_eq!(p.phi_k, 0.0);
        assert_abs_diff_eq!(p.theta_k, PI / 4.0, epsilon = 1e-15);
        let p = curvature_plane(0.0, 0.0, -PI / 4.0);
        assert_abs_diff_eq!(p.phi_k, 0.0);
        assert_abs_diff_eq!(p.theta_k, -PI / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn plane_contains_the_base_direction() {
        let (phi_p, theta_p) = (2.2, -0.4);
        let plane = curvature_plane(phi_p, theta_p, 0.3);
        let v = omega(&AngularParams::new(phi_p, vec![theta_p])).components;
        let n = plane.normal();
        assert_abs_diff_eq!(n[0] * v[0] + n[1] * v[1] + n[2] * v[2], 0.0, epsilon = 1e-14);
        assert!((0.0..PI).contains(&plane.phi_k));
        // τ is the arc from Ω(φ_K, 0) to Ω_p up to the supplement
        let arc = (plane.phi_k.cos() * v[0] + plane.phi_k.sin() * v[1]).acos();
        assert!((plane.tau.abs() - arc).abs() < 1e-9 || (plane.tau.abs() - (PI - arc)).abs() < 1e-9);
    }

    #[test]
    fn piecewise_form_agrees_where_the_orientation_is_positive() {
        let (phi_p, theta_p, a2) = (0.7, 0.2, 0.9);
        let (pk, tk) = curvature_plane_piecewise(phi_p, theta_p, a2);
        let p = curvature_plane(phi_p, theta_p, a2);
        assert_abs_diff_eq!(pk, p.phi_k, epsilon = 1e-12);
        assert_abs_diff_eq!(tk, p.theta_k, epsilon = 1e-12);
    }

    #[test]
    fn metric_of_sphere_and_plane() {
        let cfg = QuadratureConfig::default();
        for c in [0.3, 0.7] {
            let g = metric_from_solution(&make_constant(1.0), (c, 0.2), &cfg).unwrap();
            assert_abs_diff_eq!(g.g_phiphi, c.sin().powi(2), epsilon = 1e-10);
            let g = metric_from_solution(&make_constant(0.0), (c, 0.2), &cfg).unwrap();
            assert_abs_diff_eq!(g.g_phiphi, c * c, epsilon = 1e-12);
        }
    }

    #[test]
    fn second_order_metric_is_second_order_accurate() {
        let cfg = QuadratureConfig::default();
        let c: f64 = 0.3;
        let g = metric_from_solution_with(&make_constant(1.0), (c, 0.0), &cfg, MetricMethod::SecondOrderFd).unwrap();
        // the second-order flow gives c²/(1 + c²/6)², off from sin²c at sixth order
        assert_abs_diff_eq!(g.g_phiphi, (c / (1.0 + c * c / 6.0)).powi(2), epsilon = 1e-6);
        assert!((g.g_phiphi - c.sin().powi(2)).abs() < 1e-4);
    }

    #[test]
    fn gauss_probe() {
        assert_abs_diff_eq!(gauss_from_metric(|l| Ok(l.sin().powi(2)), 0.7).unwrap(), 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(gauss_from_metric(|l| Ok(l * l), 0.7).unwrap(), 0.0, epsilon = 1e-6);
        assert!(gauss_from_metric(|_| Ok(0.0), 0.7).is_err());
    }

    #[test]
    fn lambert_metric_matches_the_radius_function() {
        let f = make_lambert_hill();
        let g = metric_from_solution(&f, (0.5, 0.0), &QuadratureConfig::default()).unwrap();
        let w = crate::curvature_field::lambert_w0(0.5 / std::f64::consts::E).unwrap();
        let r = 0.5 / w - std::f64::consts::E;
        assert_abs_diff_eq!(g.g_phiphi, r * r, epsilon = 1e-8);
    }

    #[test]
    fn three_sphere_metric() {
        let cfg = QuadratureConfig::default();
        let (c, phi_p, theta_p) = (0.6_f64, 1.0_f64, 0.3);
        let m = metric_3d(&UniformPlanes(1.0), (c, phi_p, theta_p), &cfg, MetricMethod::StepField).unwrap();
        assert_abs_diff_eq!(m.g_phiphi, c.sin().powi(2), epsilon = 1e-10);
        assert_abs_diff_eq!(m.g_thetatheta.unwrap(), (c.sin() * phi_p.sin()).powi(2), epsilon = 1e-10);
    }

    #[test]
    fn plane_dependent_field_at_the_origin_direction() {
        let cfg = QuadratureConfig::default();
        let c: f64 = 0.5;
        let m = metric_3d(&PlaneDependent, (c, 0.0, 0.0), &cfg, MetricMethod::StepField).unwrap();
        assert_abs_diff_eq!(m.g_phiphi, c.sin().powi(2), epsilon = 1e-10);
        assert_eq!(m.g_thetatheta, Some(0.0));
        let p = curvature_plane(0.0, 0.0, PI / 4.0);
        assert_abs_diff_eq!(PlaneDependent.eval(0.1, 0.0, &p), 0.0, epsilon = 1e-15);
    }
}
