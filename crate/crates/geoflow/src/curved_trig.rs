//! Constant-curvature trigonometry.
//!
//! The exact laws are written with the curvature-scaled functions
//! `cos_K a = cos(√K a)` and `sin_K a = sin(√K a)/√K` (hyperbolic for K < 0),
//! which are analytic in K and reduce to `1` and `a` in the flat limit.
//! The expansions treat every length and angle as a power series in a global
//! scale ε and return the coefficients of the resulting side and angle.

use crate::error::{ensure, Error, Result};
use std::f64::consts::PI;

/// Below this value of `|K|·a²` the Taylor branch is used.
pub const FLAT_SWITCH: f64 = 1e-6;

/// Overshoot of an inverse trig argument that is silently clamped.
pub const CLAMP_TOL: f64 = 1e-12;

/// Which solution of `sin α = s` the caller wants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `asin s ∈ [0, π/2]`
    Principal,
    /// `π − asin s`
    Side,
}

/// `cos(√K a)`, `cosh(√|K| a)` or the Taylor series near the flat limit.
pub fn cos_k(k: f64, a: f64) -> f64 {
    let x = k * a * a;
    if x.abs() < FLAT_SWITCH {
        // Σ (−x)ⁿ/(2n)!
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..6 {
            term *= -x / ((2 * n - 1) * (2 * n)) as f64;
            sum += term;
        }
        sum
    } else if k > 0.0 {
        (k.sqrt() * a).cos()
    } else {
        ((-k).sqrt() * a).cosh()
    }
}

/// `sin(√K a)/√K`, `sinh(√|K| a)/√|K|` or the Taylor series near the flat limit.
pub fn sin_k(k: f64, a: f64) -> f64 {
    let x = k * a * a;
    if x.abs() < FLAT_SWITCH {
        let mut term = a;
        let mut sum = a;
        for n in 1..6 {
            term *= -x / ((2 * n) * (2 * n + 1)) as f64;
            sum += term;
        }
        sum
    } else if k > 0.0 {
        let s = k.sqrt();
        (s * a).sin() / s
    } else {
        let s = (-k).sqrt();
        (s * a).sinh() / s
    }
}

/// Inverse of [`sin_k`] on its monotone branch.
fn asin_k(k: f64, s: f64) -> Result<f64> {
    let x = k * s * s;
    if x.abs() < FLAT_SWITCH {
        // asin(t)/t = 1 + t²/6 + 3t⁴/40 + 5t⁶/112 + 35t⁸/1152, with t² = K s²
        return Ok(s * (1.0 + x * (1.0 / 6.0 + x * (3.0 / 40.0 + x * (5.0 / 112.0 + x * 35.0 / 1152.0)))));
    }
    if k > 0.0 {
        let r = k.sqrt();
        let mut t = r * s;
        if t > 1.0 {
            if t - 1.0 > CLAMP_TOL {
                return Err(Error::Domain(format!("sine argument {t} exceeds 1")));
            }
            t = 1.0;
        }
        Ok(t.asin() / r)
    } else {
        let r = (-k).sqrt();
        Ok((r * s).asinh() / r)
    }
}

fn check_sides(k: f64, a: f64, b: f64) -> Result<()> {
    ensure(k.is_finite(), || format!("curvature must be finite, got {k}"))?;
    ensure(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0, || {
        format!("side lengths must be finite and non-negative, got a = {a}, b = {b}")
    })?;
    if k > 0.0 {
        let lim = PI / k.sqrt() * (1.0 + CLAMP_TOL);
        if a > lim || b > lim {
            return Err(Error::Domain(format!(
                "sides must not exceed π/√K = {} on the sphere (a = {a}, b = {b})",
                PI / k.sqrt()
            )));
        }
    }
    Ok(())
}

/// Side opposite the angle `gamma` enclosed by sides `a` and `b` on the
/// surface of constant curvature `k`.
///
/// Evaluated in haversine form, `sin_K²(c/2) = sin_K²((a−b)/2) + sin_K a · sin_K b · sin²(γ/2)`,
/// which is uniform in the sign of K and free of the `acos` cancellation
/// near degenerate or flat triangles.
pub fn law_c(k: f64, gamma: f64, a: f64, b: f64) -> Result<f64> {
    check_sides(k, a, b)?;
    ensure(gamma.is_finite(), || "angle must be finite".into())?;
    let hd = sin_k(k, 0.5 * (a - b));
    let hg = (0.5 * gamma).sin();
    let h = hd * hd + sin_k(k, a) * sin_k(k, b) * hg * hg;
    let h = if h < 0.0 {
        if h < -CLAMP_TOL {
            return Err(Error::Domain(format!("negative haversine {h}")));
        }
        0.0
    } else {
        h
    };
    Ok(2.0 * asin_k(k, h.sqrt())?)
}

/// Angle opposite side `a` in the triangle with sides `a`, `b` enclosing `gamma`.
pub fn law_sc(k: f64, gamma: f64, a: f64, b: f64, branch: Branch) -> Result<f64> {
    let sg = gamma.sin();
    ensure(sg.abs() > 1e-14, || format!("the sine law needs γ ∉ πZ, got γ = {gamma}"))?;
    let c = law_c(k, gamma, a, b)?;
    let sc = sin_k(k, c);
    if sc.abs() < 1e-300 {
        return Err(Error::Degenerate("opposite side has vanishing sine".into()));
    }
    let mut ratio = sin_k(k, a) * sg / sc;
    if ratio.abs() > 1.0 {
        if ratio.abs() - 1.0 > 1e-10 {
            return Err(Error::Domain(format!("sine-law ratio {ratio} exceeds 1")));
        }
        ratio = ratio.signum();
    }
    let s = ratio.asin();
    Ok(match branch {
        Branch::Principal => s,
        Branch::Side => PI - s,
    })
}

/// Power-series inputs `a = Σ aₙεⁿ`, `b = Σ bₙεⁿ`, `γ = γ₀ + γ₁ε + γ₂ε²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionInputs {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub gamma0: f64,
    pub gamma: [f64; 2],
    pub k: f64,
}

impl ExpansionInputs {
    /// Pure first-order sides and a constant angle.
    pub fn first_order(k: f64, gamma0: f64, a1: f64, b1: f64) -> Self {
        Self { a: [a1, 0.0, 0.0], b: [b1, 0.0, 0.0], gamma0, gamma: [0.0, 0.0], k }
    }

    fn validate(&self) -> Result<()> {
        ensure(self.gamma0 > 0.0 && self.gamma0 < PI, || {
            format!("γ₀ must lie in (0, π), got {}", self.gamma0)
        })?;
        ensure(self.a[0] > 0.0 && self.b[0] > 0.0, || {
            format!("leading sides must be positive, got a₁ = {}, b₁ = {}", self.a[0], self.b[0])
        })?;
        let all = self.a.iter().chain(&self.b).chain(&self.gamma).chain([&self.k]);
        ensure(all.into_iter().all(|v| v.is_finite()), || "non-finite expansion input".into())
    }
}

/// Coefficients of the expanded side and angle plus the intermediate substitutes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionResult {
    /// `[c₁, c₂, c₃]`
    pub c: [f64; 3],
    /// `[α₀, α₁, α₂]`
    pub alpha: [f64; 3],
    pub y: f64,
    pub x: f64,
    pub z: f64,
    /// `[S₀, S₁, S₂]`, the expansion of `sin α`.
    pub s: [f64; 3],
}

struct Subs {
    y: f64,
    x: f64,
    z: f64,
}

fn substitutes(inp: &ExpansionInputs) -> Result<Subs> {
    inp.validate()?;
    let [a1, a2, a3] = inp.a;
    let [b1, b2, b3] = inp.b;
    let [g1, g2] = inp.gamma;
    let (s, c) = inp.gamma0.sin_cos();
    let y2 = a1 * a1 + b1 * b1 - 2.0 * a1 * b1 * c;
    let scale = a1.max(b1);
    if y2 <= (1e-14 * scale).powi(2) {
        return Err(Error::Degenerate(format!("leading opposite side vanishes (y² = {y2:e})")));
    }
    let y = y2.sqrt();
    let x = -(b1 * b2 + a1 * a2 - (a1 * b2 + a2 * b1) * c + a1 * b1 * g1 * s);
    let z = inp.k / 24.0
        * (a1.powi(4) + 6.0 * a1 * a1 * b1 * b1 + b1.powi(4) - 4.0 * (a1.powi(3) * b1 + a1 * b1.powi(3)) * c)
        - 0.5 * (a2 * a2 + 2.0 * a1 * a3 + 2.0 * b1 * b3 + b2 * b2)
        + (a1 * b3 + a2 * b2 + a3 * b1 - 0.5 * a1 * b1 * g1 * g1) * c
        - ((a1 * b2 + a2 * b1) * g1 + a1 * b1 * g2) * s;
    Ok(Subs { y, x, z })
}

fn c_coeffs(k: f64, s: &Subs) -> [f64; 3] {
    let (y, x, z) = (s.y, s.x, s.z);
    let y2 = y * y;
    [y, -x / y, y * (k * y2 / 24.0 - z / y2 - x * x / (2.0 * y2 * y2))]
}

fn sc_coeffs(inp: &ExpansionInputs, s: &Subs) -> Result<([f64; 3], [f64; 3])> {
    let [a1, a2, a3] = inp.a;
    let [g1, g2] = inp.gamma;
    let (sg, cg) = inp.gamma0.sin_cos();
    let (y, x, z) = (s.y, s.x, s.z);
    let y2 = y * y;
    let k = inp.k;
    let s0 = a1 * sg / y;
    let s1 = ((a2 + a1 * x / y2) * sg + a1 * g1 * cg) / y;
    let s2 = (k / 6.0 * (0.75 * a1 * y2 - a1.powi(3)) * sg
        + (a1 * g2 + (a2 + a1 * x / y2) * g1) * cg
        + (a3 + a2 * x / y2 + a1 * (z / y2 + 1.5 * x * x / (y2 * y2) - 0.5 * g1 * g1)) * sg)
        / y;
    let q = 1.0 - s0 * s0;
    if q <= 1e-14 {
        return Err(Error::Branch(format!("sin α₀ = {s0} sits at the turning point")));
    }
    let rq = q.sqrt();
    let alpha = [s0.asin(), s1 / rq, s2 / rq + s0 * s1 * s1 / (2.0 * q * rq)];
    Ok((alpha, [s0, s1, s2]))
}

/// Coefficients `[c₁, c₂, c₃]` of the side opposite γ.
pub fn c_expand(inp: &ExpansionInputs) -> Result<[f64; 3]> {
    Ok(c_coeffs(inp.k, &substitutes(inp)?))
}

/// Coefficients `[α₀, α₁, α₂]` of the angle opposite side `a` (principal branch).
pub fn sc_expand(inp: &ExpansionInputs) -> Result<[f64; 3]> {
    let s = substitutes(inp)?;
    Ok(sc_coeffs(inp, &s)?.0)
}

/// Both expansions together with the diagnostics.
pub fn expand(inp: &ExpansionInputs) -> Result<ExpansionResult> {
    let s = substitutes(inp)?;
    let c = c_coeffs(inp.k, &s);
    let (alpha, sv) = sc_coeffs(inp, &s)?;
    Ok(ExpansionResult { c, alpha, y: s.y, x: s.x, z: s.z, s: sv })
}

/// Evaluates `Σ cₙ εⁿ⁺ᵒᶠᶠˢᵉᵗ`; use `offset = 1` for side coefficients and 0 for angles.
pub fn eval_series(coeffs: &[f64], eps: f64, offset: i32) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * eps.powi(n as i32 + offset))
        .sum()
}

/// Partial sum of the arcsine series with `n_terms` terms.
pub fn asin_series(y: f64, n_terms: usize) -> f64 {
    let y2 = y * y;
    let mut coef = 1.0; // (2k)!/(4ᵏ k!²)
    let mut pow = y;
    let mut sum = 0.0;
    for k in 0..n_terms {
        sum += coef * pow / (2 * k + 1) as f64;
        coef *= (2 * k + 1) as f64 / (2 * k + 2) as f64;
        pow *= y2;
    }
    sum
}
