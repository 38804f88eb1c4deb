//! Plot geometry of a triangulated slice and its closure check.
//!
//! Points are developed in the slice's local plane (ε-units, origin `o`,
//! base ray along the x-axis). The rib endpoints `t_i` come from the rib
//! lengths; the same vertices are reached a second time by walking the top
//! line from `o` at the opening angle with the top-line pieces. Both routes
//! agree at zeroth order; their second-order mismatch is bounded by the size
//! of the second-order terms involved.

use super::slice::SliceResult;

/// A point in faithful normal coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub l: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Base,
    Side,
    Rib,
    Diagonal,
    Top,
}

impl SegmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::Base => "base",
            SegmentKind::Side => "side",
            SegmentKind::Rib => "rib",
            SegmentKind::Diagonal => "diagonal",
            SegmentKind::Top => "top",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub slice: usize,
    pub index: usize,
    pub kind: SegmentKind,
    pub from: Vertex,
    pub to: Vertex,
}

/// Distance between the two constructions of top-line vertex `vertex`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureCheck {
    pub slice: usize,
    pub vertex: usize,
    pub mismatch: f64,
    pub bound: f64,
}

impl ClosureCheck {
    pub fn passes(&self) -> bool {
        self.mismatch <= self.bound * (1.0 + 1e-6) + 1e-12
    }
}

#[derive(Debug, Clone, Default)]
pub struct SliceGeometry {
    pub segments: Vec<Segment>,
    pub checks: Vec<ClosureCheck>,
}

type P = [f64; 2];

fn to_fnc(p: P, n: usize, phi0: f64) -> Vertex {
    Vertex { l: p[0].hypot(p[1]) / n as f64, phi: phi0 + p[1].atan2(p[0]) }
}

/// Segments and closure checks of one slice; `base_phi` is the polar angle of
/// the triangle's base line.
pub fn slice_geometry(s: &SliceResult, base_phi: f64) -> SliceGeometry {
    let n = s.n;
    let eps2 = (1.0 / n as f64).powi(2);
    let c0 = s.c0;
    let x = n as f64 * c0 + s.a * s.beta0.cos();
    let e1 = s.a * s.beta0.sin();
    let y = x.hypot(e1);
    let phi0 = base_phi + s.alpha_bar;
    let q = |i: usize| -> P { [i as f64 * c0, 0.0] };
    let apex: P = [x, e1];
    // rib endpoints; t_N is the apex
    let t = |i: usize| -> P {
        if i == n {
            apex
        } else {
            [i as f64 * c0, i as f64 * c0 * e1 / x + s.rib[i] * eps2]
        }
    };
    let mut g = SliceGeometry::default();
    let mut push = |index: usize, kind: SegmentKind, a: P, b: P| {
        g.segments.push(Segment { slice: s.j, index, kind, from: to_fnc(a, n, phi0), to: to_fnc(b, n, phi0) });
    };
    for i in 1..=n {
        push(i, SegmentKind::Base, q(i - 1), q(i));
    }
    push(n, SegmentKind::Side, q(n), apex);
    for i in 2..n {
        push(i, SegmentKind::Rib, q(i), t(i));
    }
    for i in 2..=n {
        push(i, SegmentKind::Diagonal, q(i - 1), t(i));
    }

    // top-line assembly: o → t_2 → … → t_N along the opening angle
    let alpha = s.alpha0 + s.alpha2_interior * eps2;
    let u = [alpha.cos(), alpha.sin()];
    // zeroth-order horizontal extent of top piece i: 2c₀, then c₀, and X₁ for the last
    let dx = |i: usize| match i {
        1 => 2.0 * c0,
        i if i == n - 1 => c0 + s.a * s.beta0.cos(),
        _ => c0,
    };
    let piece = |i: usize| dx(i) * y / x + s.top[i] * eps2;
    let mut cur: P = [0.0, 0.0];
    let mut acc_b3 = 0.0;
    for i in 1..n {
        let next = [cur[0] + piece(i) * u[0], cur[1] + piece(i) * u[1]];
        push(i, SegmentKind::Top, cur, next);
        acc_b3 += s.top[i].abs();
        let target = t(i + 1);
        let r0 = target[0] * y / x;
        let rib3 = if i + 1 < n { s.rib[i + 1].abs() } else { 0.0 };
        let bound = eps2 * (acc_b3 + s.alpha2_interior.abs() * r0 + rib3);
        let mismatch = (next[0] - target[0]).hypot(next[1] - target[1]);
        g.checks.push(ClosureCheck { slice: s.j, vertex: i + 1, mismatch, bound });
        cur = next;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::slice::first_slice;

    #[test]
    fn flat_slice_closes_exactly() {
        let s = first_slice(10, 0.5, 1.0, 0.8, &[0.0; 10]).unwrap();
        let g = slice_geometry(&s, 0.0);
        assert!(g.checks.iter().all(|c| c.mismatch < 1e-12));
        assert_eq!(g.segments.iter().filter(|s| s.kind == SegmentKind::Top).count(), 9);
    }

    #[test]
    fn curved_slice_within_bound() {
        let s = first_slice(13, 5.0, 3.0, std::f64::consts::FRAC_PI_6, &[1.0; 13]).unwrap();
        let g = slice_geometry(&s, 0.0);
        assert!(g.checks.iter().all(ClosureCheck::passes));
        // the apex is on the side line
        let side = g.segments.iter().find(|s| s.kind == SegmentKind::Side).unwrap();
        let last_top = g.segments.iter().rfind(|s| s.kind == SegmentKind::Top).unwrap();
        let m = g.checks.last().unwrap();
        assert!((side.to.l - last_top.to.l).abs() <= m.bound, "{:?} {} {}", m, side.to.l, last_top.to.l);
    }
}
