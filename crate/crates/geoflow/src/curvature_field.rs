//! Gaussian curvature fields in faithful normal coordinates `(l, φ)`.

use crate::error::{ensure, Error, Result};
use std::f64::consts::{E, PI};
use std::sync::Arc;

/// Default lower bound of `l` for fields with a pole at the origin.
pub const DEFAULT_MIN_L: f64 = 1e-8;

/// A scalar curvature field `K(l, φ)`.
pub trait CurvatureField: Send + Sync {
    /// Raw evaluation; may return a non-finite value at a pole.
    fn eval(&self, l: f64, phi: f64) -> f64;

    /// Smallest admissible `l`; evaluation below it is a domain error.
    fn min_l(&self) -> f64 {
        0.0
    }

    /// Whether the field ignores `φ`.
    fn is_central(&self) -> bool {
        false
    }

    fn name(&self) -> String {
        "custom".into()
    }

    /// Checked evaluation.
    fn try_eval(&self, l: f64, phi: f64) -> Result<f64> {
        if l.is_nan() || l < self.min_l() {
            return Err(Error::Domain(format!(
                "{} field evaluated at l = {l} below its minimum {}",
                self.name(),
                self.min_l()
            )));
        }
        let k = self.eval(l, phi);
        if k.is_finite() {
            Ok(k)
        } else {
            Err(Error::Domain(format!("{} field is not finite at l = {l}", self.name())))
        }
    }
}

impl<T: CurvatureField + ?Sized> CurvatureField for &T {
    fn eval(&self, l: f64, phi: f64) -> f64 {
        (**self).eval(l, phi)
    }
    fn min_l(&self) -> f64 {
        (**self).min_l()
    }
    fn is_central(&self) -> bool {
        (**self).is_central()
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

impl<T: CurvatureField + ?Sized> CurvatureField for Arc<T> {
    fn eval(&self, l: f64, phi: f64) -> f64 {
        (**self).eval(l, phi)
    }
    fn min_l(&self) -> f64 {
        (**self).min_l()
    }
    fn is_central(&self) -> bool {
        (**self).is_central()
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl CurvatureField for Constant {
    fn eval(&self, _l: f64, _phi: f64) -> f64 {
        self.0
    }
    fn is_central(&self) -> bool {
        true
    }
    fn name(&self) -> String {
        format!("constant({})", self.0)
    }
}

/// `K = 1/l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseL;

impl CurvatureField for InverseL {
    fn eval(&self, l: f64, _phi: f64) -> f64 {
        1.0 / l
    }
    fn min_l(&self) -> f64 {
        DEFAULT_MIN_L
    }
    fn is_central(&self) -> bool {
        true
    }
    fn name(&self) -> String {
        "inverse_l".into()
    }
}

/// Outward-travelling circular wave `κ/(l + ½)·(1 + sin(2πl − ωt))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wave {
    pub kappa: f64,
    pub omega_t: f64,
}

impl CurvatureField for Wave {
    fn eval(&self, l: f64, _phi: f64) -> f64 {
        self.kappa / (l + 0.5) * (1.0 + (2.0 * PI * l - self.omega_t).sin())
    }
    fn is_central(&self) -> bool {
        true
    }
    fn name(&self) -> String {
        format!("wave(kappa={}, omega_t={})", self.kappa, self.omega_t)
    }
}

/// Curvature of the rotation-symmetric hill with arclength relation
/// `l(r) = (e+r)ln(e+r) − e − r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambertHill;

impl CurvatureField for LambertHill {
    fn eval(&self, l: f64, _phi: f64) -> f64 {
        if l <= 0.0 {
            return f64::INFINITY;
        }
        // W²/(l(1+W)³(l − eW)) with l − eW = eW·(eᵂ − 1), which avoids the cancellation at small l
        let w = lambert_w0(l / E).unwrap_or(f64::NAN);
        w / (l * E * (1.0 + w).powi(3) * w.exp_m1())
    }
    fn min_l(&self) -> f64 {
        DEFAULT_MIN_L
    }
    fn is_central(&self) -> bool {
        true
    }
    fn name(&self) -> String {
        "lambert_hill".into()
    }
}

/// A field given by a closure.
pub struct FnField<F> {
    f: F,
    min_l: f64,
    central: bool,
    name: String,
}

impl<F: Fn(f64, f64) -> f64 + Send + Sync> FnField<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self { f, min_l: 0.0, central: false, name: name.into() }
    }
    pub fn with_min_l(mut self, min_l: f64) -> Self {
        self.min_l = min_l;
        self
    }
    pub fn central(mut self) -> Self {
        self.central = true;
        self
    }
}

impl<F: Fn(f64, f64) -> f64 + Send + Sync> CurvatureField for FnField<F> {
    fn eval(&self, l: f64, phi: f64) -> f64 {
        (self.f)(l, phi)
    }
    fn min_l(&self) -> f64 {
        self.min_l
    }
    fn is_central(&self) -> bool {
        self.central
    }
    fn name(&self) -> String {
        self.name.clone()
    }
}

/// `K(l, φ_p + s·φ)` with `s = ±1`: rotates the chart so the base point lies
/// on `φ = 0`, optionally mirroring it.
pub struct Rotated<F> {
    pub inner: F,
    pub phi_p: f64,
    pub mirrored: bool,
}

impl<F: CurvatureField> CurvatureField for Rotated<F> {
    fn eval(&self, l: f64, phi: f64) -> f64 {
        let phi = if self.mirrored { self.phi_p - phi } else { self.phi_p + phi };
        self.inner.eval(l, phi)
    }
    fn min_l(&self) -> f64 {
        self.inner.min_l()
    }
    fn is_central(&self) -> bool {
        self.inner.is_central()
    }
    fn name(&self) -> String {
        self.inner.name()
    }
}

pub fn make_constant(k0: f64) -> Constant {
    Constant(k0)
}

pub fn make_inverse_l() -> InverseL {
    InverseL
}

pub fn make_wave(kappa: f64, omega_t: f64) -> Result<Wave> {
    ensure(kappa > 0.0, || format!("wave amplitude κ must be positive, got {kappa}"))?;
    Ok(Wave { kappa, omega_t })
}

pub fn make_lambert_hill() -> LambertHill {
    LambertHill
}

/// Triangle helpers `y(j)`, `z(j)` and `f = a c sin β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryHelpers {
    pub a: f64,
    pub c: f64,
    pub beta: f64,
}

impl GeometryHelpers {
    /// Distance from the origin to the point `j` along the side line.
    pub fn y(&self, j: f64) -> f64 {
        let (a, c) = (self.a, self.c);
        (j * j * a * a + c * c + 2.0 * j * a * c * self.beta.cos()).max(0.0).sqrt()
    }
    pub fn z(&self, j: f64) -> f64 {
        j * self.a + self.c * self.beta.cos()
    }
    pub fn f(&self) -> f64 {
        self.a * self.c * self.beta.sin()
    }
    /// Polar angle at the origin of the point `j` along the side line.
    pub fn angle(&self, j: f64) -> f64 {
        // equals asin(j a sinβ / y(j)) whenever the angle is acute
        (j * self.a * self.beta.sin()).atan2(self.c + j * self.a * self.beta.cos())
    }
}

/// The curvature field pulled back to the unit square: `K[i, j] = K(i·y(j), ∠(j))`.
pub struct IndexField<'a> {
    pub field: &'a dyn CurvatureField,
    pub geom: GeometryHelpers,
}

impl<'a> IndexField<'a> {
    pub fn new(field: &'a dyn CurvatureField, a: f64, c: f64, beta: f64) -> Self {
        Self { field, geom: GeometryHelpers { a, c, beta } }
    }
    pub fn eval(&self, i: f64, j: f64) -> f64 {
        self.field.eval(i * self.geom.y(j), self.geom.angle(j))
    }
    pub fn try_eval(&self, i: f64, j: f64) -> Result<f64> {
        self.field.try_eval(i * self.geom.y(j), self.geom.angle(j))
    }
}

/// Principal branch of the Lambert W function.
pub fn lambert_w0(x: f64) -> Result<f64> {
    const BRANCH: f64 = -1.0 / E;
    if x.is_nan() || x < BRANCH - 1e-15 {
        return Err(Error::Domain(format!("Lambert W₀ needs x ≥ −1/e, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= BRANCH {
        return Ok(-1.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = if x < -0.25 {
        // series about the branch point
        let p = (2.0 * (E * x + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        let l = x.ln_1p();
        l * (1.0 - (1.0 + l).ln() / (2.0 + l))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        let dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= dw;
        if dw.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w.max(-1.0))
}
