//! Rotation-symmetric immersions into 3-space.
//!
//! A central geometry is described by the arclength `l(r)` of its radial
//! geodesics as a function of the circumferential radius `r`. Any relation with
//! `l(0) = 0` and `l′ ≥ 1` is realised by the surface of revolution
//! `(r cos φ, r sin φ, h(r))` with `h(r) = −∫₀ʳ √(l′² − 1) dρ`.

use crate::curvature_field::lambert_w0;
use crate::error::{ensure, Error, Result};
use crate::integration::{quad_try, QuadratureConfig};
use std::f64::consts::E;

/// Arclength of the radial geodesics against circumferential radius.
pub trait ArclengthRelation: Send + Sync {
    fn l_of_r(&self, r: f64) -> f64;
    fn l_prime(&self, r: f64) -> f64;
    fn l_double_prime(&self, r: f64) -> f64;
    fn r_of_l(&self, l: f64) -> Result<f64>;

    /// `l′ − 1`; override when it can be computed without cancellation.
    fn l_prime_minus_one(&self, r: f64) -> f64 {
        self.l_prime(r) - 1.0
    }

    fn name(&self) -> String {
        "custom".into()
    }
}

/// The flat plane, `l = r`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Flat;

impl ArclengthRelation for Flat {
    fn l_of_r(&self, r: f64) -> f64 {
        r
    }
    fn l_prime(&self, _r: f64) -> f64 {
        1.0
    }
    fn l_double_prime(&self, _r: f64) -> f64 {
        0.0
    }
    fn r_of_l(&self, l: f64) -> Result<f64> {
        Ok(l)
    }
    fn name(&self) -> String {
        "flat".into()
    }
}

/// `l(r) = (e+r) ln(e+r) − e − r`, the hill whose curvature is
/// [`crate::curvature_field::LambertHill`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Lambert;

impl ArclengthRelation for Lambert {
    fn l_of_r(&self, r: f64) -> f64 {
        // (e+r)(1 + ln1p(r/e)) − e − r = (e+r) ln1p(r/e)
        (E + r) * (r / E).ln_1p()
    }
    fn l_prime(&self, r: f64) -> f64 {
        (E + r).ln()
    }
    fn l_double_prime(&self, r: f64) -> f64 {
        1.0 / (E + r)
    }
    fn l_prime_minus_one(&self, r: f64) -> f64 {
        (r / E).ln_1p()
    }
    /// `r = l/W₀(l/e) − e = e·(e^{W₀(l/e)} − 1)`
    fn r_of_l(&self, l: f64) -> Result<f64> {
        ensure(l >= 0.0, || format!("arclength must be non-negative, got {l}"))?;
        Ok(E * lambert_w0(l / E)?.exp_m1())
    }
    fn name(&self) -> String {
        "lambert".into()
    }
}

pub fn lambert_relation() -> Lambert {
    Lambert
}

/// `√(l′² − 1)` at `r`, or an error where `l′ < 1`.
fn slope(rel: &dyn ArclengthRelation, r: f64) -> Result<f64> {
    let m = rel.l_prime_minus_one(r);
    if m < -1e-14 {
        return Err(Error::Domain(format!("l′({r}) = {} < 1 cannot be immersed", 1.0 + m)));
    }
    let m = m.max(0.0);
    Ok((m * (m + 2.0)).sqrt())
}

/// `h′(r) = −√(l′² − 1)`
pub fn profile_slope(rel: &dyn ArclengthRelation, r: f64) -> Result<f64> {
    Ok(-slope(rel, r)?)
}

/// `h″(r) = −l′ l″/√(l′² − 1)`; infinite where `l′ = 1`.
pub fn profile_curvature(rel: &dyn ArclengthRelation, r: f64) -> Result<f64> {
    let s = slope(rel, r)?;
    let num = rel.l_prime(r) * rel.l_double_prime(r);
    Ok(if s == 0.0 { if num == 0.0 { 0.0 } else { f64::NEG_INFINITY } } else { -num / s })
}

/// `h(r) = −∫₀ʳ √(l′(ρ)² − 1) dρ`, integrated in `u = √ρ` so that the
/// square-root behaviour at a point with `l′ = 1` becomes smooth.
pub fn profile_from_arclength(rel: &dyn ArclengthRelation, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    ensure(r.is_finite() && r >= 0.0, || format!("radius must be non-negative, got {r}"))?;
    profile_between(rel, 0.0, r.sqrt(), cfg)
}

fn profile_between(rel: &dyn ArclengthRelation, u0: f64, u1: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(-quad_try(|u| Ok(2.0 * u * slope(rel, u * u)?), u0, u1, cfg)?.value)
}

/// Point `(r cos φ, r sin φ, h(r))` of the immersion.
pub fn immerse(rel: &dyn ArclengthRelation, r: f64, phi: f64, cfg: &QuadratureConfig) -> Result<[f64; 3]> {
    let h = profile_from_arclength(rel, r, cfg)?;
    Ok([r * phi.cos(), r * phi.sin(), h])
}

/// Immersion of the chart point `(l, φ)`.
pub fn immerse_fnc(rel: &dyn ArclengthRelation, l: f64, phi: f64, cfg: &QuadratureConfig) -> Result<[f64; 3]> {
    immerse(rel, rel.r_of_l(l)?, phi, cfg)
}

/// Tabulated profile on `r ∈ [0, r_max]` for dense sampling.
///
/// Nodes are uniform in `u = √(r/r_max)`; between them `H(u) = h(r_max u²)`
/// is interpolated by cubic Hermite polynomials using the exact slope.
pub struct ProfileCache<'a> {
    rel: &'a dyn ArclengthRelation,
    r_max: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl<'a> ProfileCache<'a> {
    pub fn new(rel: &'a dyn ArclengthRelation, r_max: f64, nodes: usize, cfg: &QuadratureConfig) -> Result<Self> {
        ensure(r_max.is_finite() && r_max > 0.0, || format!("r_max must be positive, got {r_max}"))?;
        ensure(nodes >= 2, || "a profile cache needs at least two nodes".into())?;
        let s = r_max.sqrt();
        let mut values = vec![0.0; nodes];
        let mut slopes = vec![0.0; nodes];
        for k in 0..nodes {
            let u = k as f64 / (nodes - 1) as f64;
            if k > 0 {
                let u_prev = (k - 1) as f64 / (nodes - 1) as f64;
                values[k] = values[k - 1] + profile_between(rel, u_prev * s, u * s, cfg)?;
            }
            // dH/du = h′(r) · 2 r_max u
            slopes[k] = -slope(rel, r_max * u * u)? * 2.0 * r_max * u;
        }
        Ok(Self { rel, r_max, values, slopes })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn relation(&self) -> &dyn ArclengthRelation {
        self.rel
    }

    /// Interpolated `h(r)`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        ensure((0.0..=self.r_max).contains(&r), || format!("r = {r} outside the cached range [0, {}]", self.r_max))?;
        let m = self.values.len() - 1;
        let u = (r / self.r_max).sqrt();
        let k = ((u * m as f64).floor() as usize).min(m - 1);
        let du = 1.0 / m as f64;
        let t = (u - k as f64 * du) / du;
        let (t2, t3) = (t * t, t * t * t);
        Ok((2.0 * t3 - 3.0 * t2 + 1.0) * self.values[k]
            + (t3 - 2.0 * t2 + t) * du * self.slopes[k]
            + (-2.0 * t3 + 3.0 * t2) * self.values[k + 1]
            + (t3 - t2) * du * self.slopes[k + 1])
    }

    pub fn immerse(&self, r: f64, phi: f64) -> Result<[f64; 3]> {
        Ok([r * phi.cos(), r * phi.sin(), self.eval(r)?])
    }

    pub fn immerse_fnc(&self, l: f64, phi: f64) -> Result<[f64; 3]> {
        self.immerse(self.rel.r_of_l(l)?, phi)
    }
}
