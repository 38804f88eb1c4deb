//! Geodesic flow bundles of 2-D Riemannian manifolds computed directly from a
//! Gaussian curvature field.
//!
//! The crate is organised bottom-up:
//!
//! * [`curved_trig`] — constant-curvature cosine/sine laws and their series
//!   expansions in a global scale parameter.
//! * [`curvature_field`] — curvature fields in faithful normal coordinates and
//!   the reparametrised index field `K[i, j]`.
//! * [`integration`] — adaptive Gauss–Legendre quadrature, product integrals
//!   and layered nested integrals.
//! * [`fundamental_solution`] — second-order limit formulas for the top line,
//!   top angle and opening angle, and the geodesic sampler built on them.
//! * [`triangulation`] — the finite-N step-field triangulation that verifies
//!   the limit formulas.
//! * [`fnc`] — direction-sphere parametrisation, curvature-plane labels and
//!   metric reconstruction in faithful normal charts.
//! * [`embeddings`] — rotation-symmetric immersions of central geometries.

pub mod curvature_field;
pub mod curved_trig;
pub mod embeddings;
pub mod error;
pub mod fnc;
pub mod fundamental_solution;
pub mod integration;
pub mod triangulation;

pub use error::{Error, Result};
