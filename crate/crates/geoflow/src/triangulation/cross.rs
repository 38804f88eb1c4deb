//! Recursion across slices.
//!
//! Slice `j` receives second-order corrections `c₂ʲ`, `β₂ʲ` of its base line
//! and direction angle from the slices below and passes on
//! `c₂^{j+1} = b̊^j + b^{j,c} c₂ʲ + b^{j,β} β₂ʲ`,
//! `β₂^{j+1} = γ̊^j + γ^{j,c} c₂ʲ + γ^{j,β} β₂ʲ`.
//! Unrolled, the chain is packed into the substitutes `O, Q, V, W`.

use super::slice::SliceResult;
use super::substitutes::{y_big, z_big};
use crate::error::{ensure, Result};
use std::collections::HashMap;

/// Argument-correction coefficients of slice `j` written in global
/// quantities. `lambda` is an extra term in the `b^{j,c}` numerator that
/// the engine keeps at zero; it is exposed so the unrolled forms can be
/// checked for a general coefficient family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedCoefficients {
    pub n: usize,
    pub a: f64,
    pub c: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl GeneralizedCoefficients {
    pub fn new(n: usize, a: f64, c: f64, beta: f64) -> Self {
        Self { n, a, c, beta, lambda: 0.0 }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    fn y(&self, j: usize) -> f64 {
        y_big(self.n, j as f64, self.a, self.c, self.beta)
    }

    fn e1(&self) -> f64 {
        self.a * self.beta.sin()
    }

    /// `f_N = N c e¹`
    pub fn f(&self) -> f64 {
        self.n as f64 * self.c * self.e1()
    }

    /// `p̂ʲ = 1 − aZʲ/(Yʲ)² + Λ/((Yʲ)² Lʲ)`
    pub fn p_hat(&self, j: usize) -> f64 {
        let y2 = self.y(j).powi(2);
        let az = self.a * z_big(self.n, j as f64, self.a, self.c, self.beta);
        1.0 - az / y2 + self.lambda / (y2 * (y2 - az))
    }

    pub fn b_c(&self, j: usize) -> f64 {
        self.y(j) / self.y(j - 1) * self.p_hat(j)
    }

    pub fn b_beta(&self, j: usize) -> f64 {
        -self.c * self.e1() / self.y(j)
    }

    pub fn gamma_c(&self, j: usize) -> f64 {
        let nf = self.n as f64;
        nf * nf * self.c * self.e1() / (self.y(j).powi(2) * self.y(j - 1))
    }

    pub fn gamma_beta(&self, j: usize) -> f64 {
        1.0 - self.a * z_big(self.n, j as f64, self.a, self.c, self.beta) / self.y(j).powi(2)
    }

    pub fn alpha_c(&self, j: usize) -> f64 {
        -self.gamma_c(j)
    }

    pub fn alpha_beta(&self, j: usize) -> f64 {
        1.0 - self.gamma_beta(j)
    }
}

/// `O_n, Q_n, V_n, W_n` for `n ∈ 0..=n_max` as seen from slice `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Substitutes4 {
    pub o: Vec<f64>,
    pub q: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

/// Direct recursion `O_{n+1} = O_n b^{j−n,c} + Q_n γ^{j−n,c}`, etc.
pub fn oqvw_direct(g: &GeneralizedCoefficients, j: usize, n_max: usize) -> Result<Substitutes4> {
    ensure(n_max < j, || format!("n = {n_max} reaches below the first slice from j = {j}"))?;
    let mut s = Substitutes4 { o: vec![1.0], q: vec![0.0], v: vec![0.0], w: vec![1.0] };
    for n in 0..n_max {
        let k = j - n;
        let (bc, bb, gc, gb) = (g.b_c(k), g.b_beta(k), g.gamma_c(k), g.gamma_beta(k));
        let (o, q, v, w) = (s.o[n], s.q[n], s.v[n], s.w[n]);
        s.o.push(o * bc + q * gc);
        s.q.push(o * bb + q * gb);
        s.v.push(v * bc + w * gc);
        s.w.push(v * bb + w * gb);
    }
    Ok(s)
}

/// Explicit operator-nest forms of the substitutes:
///
/// `O_m = (Yʲ/Y^{j−m}) P̂₀^{m−1} − (f²/Y^{j−m}) Σ_{m₁=1}^{m−1} P̂_{m₁+1}^{m−1}/(Y^{j−m₁})² Σ_{m₂=0}^{m₁−1} P_{m₂+1}^{m₁−1}/Y^{j−m₂} O_{m₂}`,
/// `Q_m = −c e¹ Σ_{m'=0}^{m−1} P_{m'+1}^{m−1}/Y^{j−m'} O_{m'}`,
/// `V_n = (N f/Y^{j−n}) Σ_{m=0}^{n−1} P̂_{m+1}^{n−1}/(Y^{j−m})² W_m`,
/// `W_n = P₀^{n−1} − c e¹ Σ_{m=1}^{n−1} P_{m+1}^{n−1}/Y^{j−m} V_m`,
///
/// with `P_m^n = Π_{l=m}^n γ^{j−l,β}` and `P̂_m^n = Π_{l=m}^n p̂^{j−l}`.
pub fn oqvw_explicit(g: &GeneralizedCoefficients, j: usize, n_max: usize) -> Result<Substitutes4> {
    ensure(n_max < j, || format!("n = {n_max} reaches below the first slice from j = {j}"))?;
    let y = |m: usize| g.y(j - m);
    let mut memo_p: HashMap<(usize, usize), f64> = HashMap::new();
    let mut memo_ph: HashMap<(usize, usize), f64> = HashMap::new();
    let mut p = |lo: usize, hi: usize| *memo_p.entry((lo, hi)).or_insert_with(|| (lo..=hi).map(|l| g.gamma_beta(j - l)).product());
    let mut ph = |lo: usize, hi: usize| *memo_ph.entry((lo, hi)).or_insert_with(|| (lo..=hi).map(|l| g.p_hat(j - l)).product());
    let ce = g.c * g.e1();
    let f = g.f();
    let nf = g.n as f64;

    let mut o = vec![1.0];
    let mut q = vec![0.0];
    for m in 1..=n_max {
        let mut nest = 0.0;
        for m1 in 1..m {
            let inner: f64 = (0..m1).map(|m2| p(m2 + 1, m1 - 1) / y(m2) * o[m2]).sum();
            nest += ph(m1 + 1, m - 1) / y(m1).powi(2) * inner;
        }
        o.push(y(0) / y(m) * ph(0, m - 1) - f * f / y(m) * nest);
        let qm: f64 = (0..m).map(|k| p(k + 1, m - 1) / y(k) * o[k]).sum();
        q.push(-ce * qm);
    }
    let mut v = vec![0.0];
    let mut w = vec![1.0];
    for n in 1..=n_max {
        let vn: f64 = (0..n).map(|m| ph(m + 1, n - 1) / y(m).powi(2) * w[m]).sum();
        v.push(nf * f / y(n) * vn);
        let wn: f64 = (1..n).map(|m| p(m + 1, n - 1) / y(m) * v[m]).sum();
        w.push(p(0, n - 1) - ce * wn);
    }
    Ok(Substitutes4 { o, q, v, w })
}

/// Accumulated second-order arguments: `c2[j]`, `beta2[j]` for `j ∈ 1..=N+1`
/// (index 0 unused; `c2[1] = beta2[1] = 0`), plus the summed opening angle.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSliceState {
    pub c2: Vec<f64>,
    pub beta2: Vec<f64>,
    pub alpha2: f64,
}

/// Sequential fold over the slices with their local coefficients.
pub fn cross_slice(n: usize, slices: &[SliceResult]) -> Result<CrossSliceState> {
    ensure(slices.len() == n, || format!("expected {n} slice results, got {}", slices.len()))?;
    let mut c2 = vec![0.0; n + 2];
    let mut beta2 = vec![0.0; n + 2];
    let mut alpha2 = 0.0;
    for (idx, s) in slices.iter().enumerate() {
        let j = idx + 1;
        ensure(s.j == j, || format!("slice results out of order at position {j}"))?;
        alpha2 += s.alpha2_interior + s.coeff_alpha_c * c2[j] + s.coeff_alpha_beta * beta2[j];
        c2[j + 1] = s.b2_interior + s.coeff_b_c * c2[j] + s.coeff_b_beta * beta2[j];
        beta2[j + 1] = s.gamma2_interior + s.coeff_gamma_c * c2[j] + s.coeff_gamma_beta * beta2[j];
    }
    Ok(CrossSliceState { c2, beta2, alpha2 })
}

/// `c₂^{j+1}` and `β₂^{j+1}` as the unrolled sums
/// `b̊ʲ + Σ_{n=1}^{j−1} (O_n b̊^{j−n} + Q_n γ̊^{j−n})` and its `V, W` analogue.
pub fn unrolled(g: &GeneralizedCoefficients, slices: &[SliceResult], j: usize) -> Result<(f64, f64)> {
    ensure(j >= 1 && j <= slices.len(), || format!("slice index {j} out of range"))?;
    let s = oqvw_explicit(g, j, j - 1)?;
    let src = |k: usize| (slices[k - 1].b2_interior, slices[k - 1].gamma2_interior);
    let (mut c, mut b) = src(j);
    for n in 1..j {
        let (bs, gs) = src(j - n);
        c += s.o[n] * bs + s.q[n] * gs;
        b += s.v[n] * bs + s.w[n] * gs;
    }
    Ok((c, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::slice::slice_second_order;
    use approx::assert_abs_diff_eq;

    #[test]
    fn local_and_global_coefficients_agree() {
        let (n, a, c, beta) = (10, 0.4, 1.2, 0.9);
        let g = GeneralizedCoefficients::new(n, a, c, beta);
        for j in 1..=n {
            let s = slice_second_order(n, j, a, c, beta, &[1.0; 10]).unwrap();
            assert_abs_diff_eq!(g.b_c(j), s.coeff_b_c, epsilon = 1e-13);
            assert_abs_diff_eq!(g.b_beta(j), s.coeff_b_beta, epsilon = 1e-13);
            assert_abs_diff_eq!(g.gamma_c(j), s.coeff_gamma_c, epsilon = 1e-13);
            assert_abs_diff_eq!(g.gamma_beta(j), s.coeff_gamma_beta, epsilon = 1e-13);
            assert_abs_diff_eq!(g.alpha_c(j), s.coeff_alpha_c, epsilon = 1e-13);
            assert_abs_diff_eq!(g.alpha_beta(j), s.coeff_alpha_beta, epsilon = 1e-13);
        }
    }

    #[test]
    fn explicit_substitutes_match_direct_recursion() {
        for lambda in [0.0, 0.37] {
            let g = GeneralizedCoefficients::new(12, 0.45, 1.1, 0.7).with_lambda(lambda);
            let d = oqvw_direct(&g, 12, 6).unwrap();
            let e = oqvw_explicit(&g, 12, 6).unwrap();
            for n in 0..=6 {
                assert_abs_diff_eq!(d.o[n], e.o[n], epsilon = 1e-13);
                assert_abs_diff_eq!(d.q[n], e.q[n], epsilon = 1e-13);
                assert_abs_diff_eq!(d.v[n], e.v[n], epsilon = 1e-13);
                assert_abs_diff_eq!(d.w[n], e.w[n], epsilon = 1e-13);
            }
            assert_eq!((d.o[0], d.w[0]), (1.0, 1.0));
            assert_abs_diff_eq!(d.o[1], g.b_c(12), epsilon = 1e-15);
            assert_abs_diff_eq!(d.q[1], g.b_beta(12), epsilon = 1e-15);
        }
    }

    #[test]
    fn fold_matches_unrolled_sums() {
        let (n, a, c, beta) = (8, 0.5, 1.0, 1.0);
        let ks: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
        let slices: Vec<_> = (1..=n).map(|j| slice_second_order(n, j, a, c, beta, &ks).unwrap()).collect();
        let st = cross_slice(n, &slices).unwrap();
        assert_eq!(st.c2[2], slices[0].b2_interior);
        assert_eq!(st.beta2[2], slices[0].gamma2_interior);
        let g = GeneralizedCoefficients::new(n, a, c, beta);
        for j in 1..=n {
            let (cu, bu) = unrolled(&g, &slices, j).unwrap();
            assert_abs_diff_eq!(cu, st.c2[j + 1], epsilon = 1e-12);
            assert_abs_diff_eq!(bu, st.beta2[j + 1], epsilon = 1e-12);
        }
    }
}
