//! Second-order solution of a single slice.
//!
//! A slice is the thin triangle with base `N c` (N segments), side `a` at
//! direction `β` and apex `(X, e¹)`, all in units of `ε = 1/N`. Its segments
//! `Δ_i` carry constant curvature `K_i`; the rib lines `a^i` erected at the
//! base vertices `q_i` split every segment into a right triangle and an upper
//! triangle. The third-order rib coefficients `a₃^i` follow from the
//! straightness of the top line and are given here in solved form.

use super::substitutes::substitutes;
use crate::error::{ensure, Result};

/// Curvature-independent recursion parameters and the curvature sums `C^{ij}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionParams {
    /// `b^i = (i+1)/i`, index `i` (entry 0 unused)
    pub b: Vec<f64>,
    /// `A^i = i/(i+1) = 1/b^i`
    pub a: Vec<f64>,
    /// `D^{ij} = e^{ij}/(i+1)`
    pub d: Vec<f64>,
    /// `C^{ij}` for `i ∈ 1..=N−2`
    pub c: Vec<f64>,
}

/// Interior solution and argument-correction coefficients of one slice.
///
/// Second-order quantities are coefficients of `ε²`; multiply by `1/N²` for
/// the physical correction.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceResult {
    pub n: usize,
    pub j: usize,
    pub a: f64,
    /// Slice base `c₀ʲ`, direction `β₀ʲ` and polar offset `ᾱ₀^{j−1}` of its base ray.
    pub c0: f64,
    pub beta0: f64,
    pub alpha_bar: f64,
    /// Curvature of segment `i` at index `i − 1`.
    pub k_samples: Vec<f64>,
    pub b2_interior: f64,
    pub gamma2_interior: f64,
    pub alpha2_interior: f64,
    pub coeff_b_c: f64,
    pub coeff_b_beta: f64,
    pub coeff_gamma_c: f64,
    pub coeff_gamma_beta: f64,
    pub coeff_alpha_c: f64,
    pub coeff_alpha_beta: f64,
    /// `a₃^i` at index `i` for `i ∈ 2..=N−1`; other entries are 0.
    pub rib: Vec<f64>,
    /// Top-line pieces `b₃^i` at index `i` for `i ∈ 1..=N−1`.
    pub top: Vec<f64>,
    /// `C^{ij}` at index `i` for `i ∈ 1..=N−2`.
    pub c_params: Vec<f64>,
    /// Zeroth-order top line (physical length), opening and top angle.
    pub b0: f64,
    pub alpha0: f64,
    pub gamma0: f64,
}

/// Geometry of a slice in ε-units.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Local {
    pub n: usize,
    pub a: f64,
    pub c: f64,
    pub beta: f64,
    pub x: f64,
    pub y: f64,
    pub e1: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Local {
    pub fn new(n: usize, a: f64, c: f64, beta: f64) -> Self {
        let nf = n as f64;
        let (s, cb) = beta.sin_cos();
        Self {
            n,
            a,
            c,
            beta,
            x: nf * c + a * cb,
            y: (a * a + nf * nf * c * c + 2.0 * nf * a * c * cb).sqrt(),
            e1: a * s,
            x1: c + a * cb,
            y1: (a * a + c * c + 2.0 * a * c * cb).sqrt(),
        }
    }

    fn e(&self, i: usize) -> f64 {
        i as f64 * self.e1
    }

    /// `(k_N^i)² = X² + (e^i)²`
    fn k2(&self, i: usize) -> f64 {
        self.x * self.x + self.e(i).powi(2)
    }

    /// Zeroth-order rib `a₁^i = i c e¹/X`.
    #[cfg(test)]
    pub fn rib1(&self, i: usize) -> f64 {
        i as f64 * self.c * self.e1 / self.x
    }

    /// Curvature term `𝒦^{ij}` of the `C` sums.
    fn kc(&self, ks: &[f64], i: usize) -> f64 {
        let (x2, y2, e2) = (self.x * self.x, self.y * self.y, self.e1 * self.e1);
        let fi = i as f64;
        ks[i - 1] * (2.0 * fi * x2 + fi * (3.0 + x2 / self.k2(i)) * y2 + (1.0 + fi * (fi * fi - 1.0) * x2 / self.k2(i)) * e2)
    }

    /// `C^i`, explicit sums.
    pub fn c_params(&self, ks: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut c = vec![0.0; n - 1];
        let c1 = ks[0] * (self.x * self.x + 2.0 * self.y * self.y);
        c[1] = c1;
        let mut acc = 0.0; // Σ_{k=2}^{i} k 𝒦^k
        for i in 2..=n - 2 {
            acc += i as f64 * self.kc(ks, i);
            c[i] = (2.0 * c1 + acc) / (i + 1) as f64;
        }
        c
    }

    /// `C^i = A^i (C^{i−1} + 𝒦^i)`, the direct recursion.
    #[cfg(test)]
    pub fn c_params_direct(&self, ks: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut c = vec![0.0; n - 1];
        c[1] = ks[0] * (self.x * self.x + 2.0 * self.y * self.y);
        for i in 2..=n - 2 {
            c[i] = i as f64 / (i + 1) as f64 * (c[i - 1] + self.kc(ks, i));
        }
        c
    }

    fn ka(&self, ks: &[f64], c: &[f64], i: usize) -> f64 {
        let (x2, e2) = (self.x * self.x, self.e1 * self.e1);
        let fi = i as f64;
        let xa = ((5.0 - 1.0 / fi) * x2 + fi * fi * (fi + 3.0) * e2 * e2 / x2 + (5.0 * fi * fi + 3.0) * e2) / self.k2(i);
        let za = 1.0 + 2.0 * (fi + 1.0) * e2 / x2;
        c[i - 1] / x2 + fi * ks[i - 1] * xa + (fi + 1.0) * ks[i] * za
    }

    /// Last rib `a₃^{N−1}` (the boundary segment next to the side line).
    fn rib_last(&self, ks: &[f64], c: &[f64]) -> f64 {
        let n = self.n;
        let nf = n as f64;
        let (a, cc, x, y, e1, x1) = (self.a, self.c, self.x, self.y, self.e1, self.x1);
        let cb = self.beta.cos();
        let (x2, y2) = (x * x, y * y);
        let k2 = self.k2(n - 1);
        let chi = (nf - 1.0) * e1 / x * (a * a + nf * cc * cc + (nf + 1.0) * a * cc * cb + x1 / x * y2)
            + (y2 * (k2 + x2) / (k2 * x2) + (nf - 2.0) / k2 * (x2 / (nf - 1.0) + (2.0 * nf - 1.0) * e1 * e1)) * cc * self.e(n - 1);
        let zeta = e1 / x1 * (2.0 * a * a + nf * cc * cc + (2.0 * nf + 1.0) * a * cc * cb);
        (nf - 1.0) * cc * cc * x1 / (6.0 * x * ((nf - 1.0) * cc + x1))
            * (cc * e1 / x2 * c[n - 2] + ks[n - 2] * chi + ks[n - 1] * zeta)
    }

    /// `a₃^i` from the explicit suffix sums.
    pub fn ribs(&self, ks: &[f64], c: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut r = vec![0.0; n];
        r[n - 1] = self.rib_last(ks, c);
        let pre = self.c.powi(3) * self.e1 / (6.0 * self.x);
        let mut tail = 0.0; // Σ_{m=i}^{N−2} 𝒦_a^m/(m+1)
        for i in (2..=n - 2).rev() {
            tail += self.ka(ks, c, i) / (i + 1) as f64;
            r[i] = pre * i as f64 * tail + i as f64 / (n - 1) as f64 * r[n - 1];
        }
        r
    }

    /// `a₃^i = A^i (c³e¹𝒦_a^i/(6X) + a₃^{i+1})`, the direct recursion.
    #[cfg(test)]
    pub fn ribs_direct(&self, ks: &[f64], c: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut r = vec![0.0; n];
        r[n - 1] = self.rib_last(ks, c);
        let pre = self.c.powi(3) * self.e1 / (6.0 * self.x);
        for i in (2..=n - 2).rev() {
            r[i] = i as f64 / (i + 1) as f64 * (pre * self.ka(ks, c, i) + r[i + 1]);
        }
        r
    }

    /// Top-line pieces `b₃^i`.
    fn tops(&self, ks: &[f64], c: &[f64], rib: &[f64]) -> Vec<f64> {
        let n = self.n;
        let nf = n as f64;
        let (cc, x, y, e1, x1) = (self.c, self.x, self.y, self.e1, self.x1);
        let (x2, e2) = (x * x, e1 * e1);
        let c3e = cc.powi(3) * e1 / x;
        let mut b = vec![0.0; n];
        b[1] = -e1 / y * (c3e * (ks[0] / 3.0 + ks[1]) - rib[2]);
        for i in 2..=n - 2 {
            let fi = i as f64;
            let ei1 = self.e(i + 1);
            let xb = fi + 5.0 + (fi - 1.0) / fi + (fi + 3.0) * e2 / x2;
            let zb = (fi + 2.0 + e1 * ei1 / x2) * (1.0 + ei1 * ei1 / self.k2(i + 1))
                + ((fi + 1.0).powi(2) * x2 + (2.0 * fi + 1.0) * e1 * ei1) / (fi * self.k2(i + 1));
            let kb = c[i - 1] / x2 + fi * ks[i - 1] * xb + (fi + 1.0) * ks[i] * zb;
            b[i] = -e1 / ((fi + 1.0) * y) * (c3e / 6.0 * fi * kb - rib[i + 1]);
        }
        b[n - 1] = -cc * cc * e2 / (6.0 * y) * ((nf - 1.0).powi(2) * ks[n - 2] * x1 / x + (2.0 * nf - 1.0) * ks[n - 1])
            - e1 * rib[n - 1] / y;
        b
    }

    pub fn solve(&self, j: usize, ks: &[f64], c0_scale: (f64, f64, f64)) -> SliceResult {
        let n = self.n;
        let nf = n as f64;
        let (a, cc, x, y, e1, x1, y1) = (self.a, self.c, self.x, self.y, self.e1, self.x1, self.y1);
        let (x2, y2, e2) = (x * x, y * y, e1 * e1);
        let c = self.c_params(ks);
        let rib = self.ribs(ks, &c);
        let top = self.tops(ks, &c, &rib);
        let b2 = top.iter().sum::<f64>() / nf;
        let alpha2 = x2 / (2.0 * y2)
            * (cc * cc * e1 / (3.0 * x) * (ks[0] * (3.0 + 4.0 * e2 / x2) + ks[1] * self.k2(2) / x2) + rib[2] / cc);
        let en1 = self.e(n - 1);
        let alpha_hat = 1.0 / (x1 * y2)
            * (cc * en1 / 6.0
                * (ks[n - 2] * x1 / x * (x1 * y2 - cc * en1 * e1)
                    + ks[n - 1] * cc * e2 * ((nf * cc * cc - a * a) / (y1 * y1) - 1.0))
                + x2 * rib[n - 1]);
        let gamma_n = ks[n - 1] / 6.0 * cc * e1 * (y1 * y1 + cc * x1) / (y1 * y1);
        let z = a + nf * cc * self.beta.cos();
        SliceResult {
            n,
            j,
            a,
            c0: cc,
            beta0: self.beta,
            alpha_bar: c0_scale.0,
            k_samples: ks.to_vec(),
            b2_interior: b2,
            gamma2_interior: alpha_hat + gamma_n,
            alpha2_interior: alpha2,
            coeff_b_c: x / y,
            coeff_b_beta: -cc * e1 / y,
            coeff_gamma_c: nf * e1 / y2,
            coeff_gamma_beta: nf * cc * x / y2,
            coeff_alpha_c: -nf * e1 / y2,
            coeff_alpha_beta: a * z / y2,
            rib,
            top,
            c_params: c,
            b0: y / nf,
            alpha0: e1.atan2(x),
            gamma0: (nf * cc * self.beta.sin()).atan2(a + nf * cc * self.beta.cos()),
        }
    }
}

fn check_samples(n: usize, ks: &[f64]) -> Result<()> {
    ensure(ks.len() == n, || format!("expected {n} curvature samples, got {}", ks.len()))?;
    ensure(ks.iter().all(|k| k.is_finite()), || "curvature samples must be finite".into())
}

fn local_for(n: usize, j: usize, a: f64, c: f64, beta: f64) -> Result<(Local, f64)> {
    let s = substitutes(n, j, a, c, beta)?;
    Ok((Local::new(n, a, s.c0, s.beta0), s.alpha_bar))
}

/// Recursion parameters `b^i`, `A^i`, `D^{ij}` and the curvature sums `C^{ij}` of slice `j`.
pub fn recursion_params(n: usize, j: usize, a: f64, c: f64, beta: f64, k_samples: &[f64]) -> Result<RecursionParams> {
    check_samples(n, k_samples)?;
    let (loc, _) = local_for(n, j, a, c, beta)?;
    let b = (0..n).map(|i| if i == 0 { 0.0 } else { (i + 1) as f64 / i as f64 }).collect();
    let am = (0..n).map(|i| i as f64 / (i + 1) as f64).collect();
    let d = (0..n).map(|i| loc.e(i) / (i + 1) as f64).collect();
    Ok(RecursionParams { b, a: am, d, c: loc.c_params(k_samples) })
}

/// Third-order rib coefficients `a₃^{ij}`, `i ∈ 2..=N−1` (entries 0 and 1 are 0).
pub fn rib_lines(n: usize, j: usize, a: f64, c: f64, beta: f64, k_samples: &[f64]) -> Result<Vec<f64>> {
    check_samples(n, k_samples)?;
    let (loc, _) = local_for(n, j, a, c, beta)?;
    Ok(loc.ribs(k_samples, &loc.c_params(k_samples)))
}

/// Interior solution of slice `j` of the triangle `(a, c, β)`.
pub fn slice_second_order(n: usize, j: usize, a: f64, c: f64, beta: f64, k_samples: &[f64]) -> Result<SliceResult> {
    check_samples(n, k_samples)?;
    let (loc, alpha_bar) = local_for(n, j, a, c, beta)?;
    Ok(loc.solve(j, k_samples, (alpha_bar, 0.0, 0.0)))
}

/// Solution of a fresh first slice with the given local parameters.
pub fn first_slice(n: usize, a: f64, c: f64, beta: f64, k_samples: &[f64]) -> Result<SliceResult> {
    slice_second_order(n, 1, a, c, beta, k_samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn samples(n: usize) -> Vec<f64> {
        (0..n).map(|i| 1.0 + 0.3 * (i as f64).sin()).collect()
    }

    #[test]
    fn recursion_parameter_values() {
        let p = recursion_params(10, 1, 0.5, 1.0, 1.0, &samples(10)).unwrap();
        assert_eq!(p.b[2], 1.5);
        assert_abs_diff_eq!(p.b[5], 1.2, epsilon = 1e-15);
        for i in 1..8 {
            assert_abs_diff_eq!(p.b[i + 1], 2.0 - 1.0 / p.b[i], epsilon = 1e-15);
            assert_abs_diff_eq!(p.a[i] * p.b[i], 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn explicit_sums_match_direct_recursions() {
        let ks = samples(14);
        let loc = Local::new(14, 0.6, 1.1, 0.8);
        let c = loc.c_params(&ks);
        let cd = loc.c_params_direct(&ks);
        for i in 1..c.len() {
            assert_abs_diff_eq!(c[i], cd[i], epsilon = 1e-12 * c[i].abs().max(1.0));
        }
        let r = loc.ribs(&ks, &c);
        let rd = loc.ribs_direct(&ks, &c);
        for i in 2..14 {
            assert_abs_diff_eq!(r[i], rd[i], epsilon = 1e-13 * r[i].abs().max(1.0));
        }
    }

    #[test]
    fn zeroth_order_rib() {
        let loc = Local::new(4, 1.0, 1.0, FRAC_PI_2);
        assert_abs_diff_eq!(loc.rib1(1), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn flat_slice_is_zero() {
        let s = slice_second_order(9, 3, 0.4, 1.0, 0.7, &[0.0; 9]).unwrap();
        assert!(s.rib.iter().all(|&v| v == 0.0));
        assert_eq!((s.b2_interior, s.gamma2_interior, s.alpha2_interior), (0.0, 0.0, 0.0));
    }

    #[test]
    fn printed_gamma_beta_coefficient() {
        let (n, a, c, beta) = (12, 0.5, 1.0, 1.0);
        for j in [1, 5, 12] {
            let s = slice_second_order(n, j, a, c, beta, &samples(n)).unwrap();
            let sub = substitutes(n, j, a, c, beta).unwrap();
            assert_abs_diff_eq!(s.coeff_gamma_beta, n as f64 * sub.c0 * sub.x_n / sub.y_n.powi(2), epsilon = 1e-14);
        }
    }

    #[test]
    fn sample_count_checked() {
        assert!(slice_second_order(8, 1, 0.5, 1.0, 0.3, &[1.0; 7]).is_err());
    }
}
