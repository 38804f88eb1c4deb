//! Finite-N spherical triangulation.
//!
//! The triangle `(o, q, p)` is cut into N slices `Σ_j` fanning out from `o`;
//! slice `j` has N constant-curvature segments sampled at their lower-left
//! edges. Each slice is solved at second order in `ε = 1/N`
//! ([`slice::slice_second_order`]), the slices are chained by the cross-slice
//! recursion ([`cross::cross_slice`]), and the result converges to the limit
//! formulas of [`crate::fundamental_solution`] at rate `O(1/N)`.

// index loops mirror the recurrences over i and j
#![allow(clippy::needless_range_loop)]

pub mod cross;
pub mod geometry;
pub mod slice;
pub mod substitutes;
pub mod template;

pub use cross::{cross_slice, CrossSliceState, GeneralizedCoefficients};
pub use geometry::{slice_geometry, ClosureCheck, Segment, SegmentKind, SliceGeometry, Vertex};
pub use slice::{recursion_params, rib_lines, slice_second_order, RecursionParams, SliceResult};
pub use substitutes::{substitutes, Substitutes};
pub use template::{delta_residual, SliceTemplate};

use crate::curvature_field::CurvatureField;
use crate::error::Result;
use crate::fundamental_solution::{zeroth_order, FundamentalResult, TriangleSpec};
use rayon::prelude::*;

/// Curvature samples `K_{ij} = K((i−1)c₀ʲε, φ_base + ᾱ^{j−1})`, `i ∈ 1..=N`.
pub fn sample_slice(field: &dyn CurvatureField, spec: &TriangleSpec, n: usize, j: usize) -> Result<Vec<f64>> {
    let s = substitutes(n, j, spec.a, spec.c, spec.beta)?;
    let phi = spec.base_phi + s.alpha_bar;
    let eps = 1.0 / n as f64;
    (1..=n).map(|i| field.try_eval((i - 1) as f64 * s.c0 * eps, phi)).collect()
}

/// Everything computed by a triangulation run.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub n: usize,
    pub spec: TriangleSpec,
    pub result: FundamentalResult,
    pub slices: Vec<SliceResult>,
    pub state: CrossSliceState,
}

impl Triangulation {
    /// Plot geometry of all slices.
    pub fn geometry(&self) -> SliceGeometry {
        let mut g = SliceGeometry::default();
        for s in &self.slices {
            let sg = slice_geometry(s, self.spec.base_phi);
            g.segments.extend(sg.segments);
            g.checks.extend(sg.checks);
        }
        g
    }
}

/// Finite-N triangulation with all intermediate results. The slices are
/// solved in parallel; the cross-slice fold is sequential.
pub fn triangulate_detailed(field: &dyn CurvatureField, spec: &TriangleSpec, n: usize) -> Result<Triangulation> {
    spec.validate(false)?;
    let slices = (1..=n)
        .into_par_iter()
        .map(|j| {
            let ks = sample_slice(field, spec, n, j)?;
            slice_second_order(n, j, spec.a, spec.c, spec.beta, &ks)
        })
        .collect::<Result<Vec<_>>>()?;
    let state = cross_slice(n, &slices)?;
    let eps2 = (1.0 / n as f64).powi(2);
    let (b0, alpha0, gamma0) = zeroth_order(spec);
    let result = FundamentalResult {
        b0,
        b2: state.c2[n + 1] * eps2,
        gamma0,
        gamma2: state.beta2[n + 1] * eps2,
        alpha0,
        alpha2: state.alpha2 * eps2,
        errors: [0.0; 3],
    };
    Ok(Triangulation { n, spec: *spec, result, slices, state })
}

/// Finite-N second-order top line, top angle and opening angle.
pub fn triangulate(field: &dyn CurvatureField, spec: &TriangleSpec, n: usize) -> Result<FundamentalResult> {
    Ok(triangulate_detailed(field, spec, n)?.result)
}
