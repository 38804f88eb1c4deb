//! Finite-N substitutes of the triangulation.
//!
//! The triangle is measured in units of `ε = 1/N`: the base line consists of N
//! segments of length `c`, the side line of N pieces of length `a`. Slice `j`
//! is the thin triangle `(o, p_{j−1}, p_j)`; its own base line
//! `c₀ʲ = Y_N^{j−1}/N` and direction angle `β₀ʲ` make it congruent to a
//! "first slice" with those parameters.

use crate::error::{ensure, Result};

/// All substitutes of slice `j` in a triangulation with N slices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Substitutes {
    pub n: usize,
    pub j: usize,
    /// `X_N^j = N c₀ʲ + a cos β₀ʲ`
    pub x_n: f64,
    /// `Y_N^j = √(j²a² + N²c² + 2jNac cos β)`
    pub y_n: f64,
    /// `Z_N^j = j a + N c cos β`
    pub z_n: f64,
    /// `Y_N^{j−1}`
    pub y_prev: f64,
    /// `e^{1j} = a sin β₀ʲ`; `e^{ij} = i e^{1j}`
    pub e1: f64,
    pub x_1: f64,
    pub y_1: f64,
    /// `I_N = Σ_{i=2}^{N−2} 1/(i+1)`
    pub i_n: f64,
    /// `f_N = N c e¹` with the original `e¹ = a sin β`
    pub f_n: f64,
    /// `Λ_N = N I_N c² (e¹)²`
    pub lambda_n: f64,
    /// `L_N^j = (Y_N^j)² − a Z_N^j`
    pub l_n: f64,
    /// Slice base `c₀ʲ`, direction `β₀ʲ` and the slice's polar offset `ᾱ₀^{j−1}`.
    pub c0: f64,
    pub beta0: f64,
    pub alpha_bar: f64,
}

impl Substitutes {
    pub fn e(&self, i: usize) -> f64 {
        i as f64 * self.e1
    }

    /// `k_N^{ij} = √((X_N^j)² + (e^{ij})²)`
    pub fn k_n(&self, i: usize) -> f64 {
        self.x_n.hypot(self.e(i))
    }
}

/// `Y_N^m` for any integer offset `m` along the side line.
pub fn y_big(n: usize, m: f64, a: f64, c: f64, beta: f64) -> f64 {
    let nf = n as f64;
    (m * m * a * a + nf * nf * c * c + 2.0 * m * nf * a * c * beta.cos()).sqrt()
}

pub fn z_big(n: usize, m: f64, a: f64, c: f64, beta: f64) -> f64 {
    m * a + n as f64 * c * beta.cos()
}

/// `I_N`, a shifted harmonic sum equal to `ψ(N) + γ_E − 3/2`.
pub fn harmonic_i(n: usize) -> f64 {
    (2..=n.saturating_sub(2)).map(|i| 1.0 / (i + 1) as f64).sum()
}

pub fn substitutes(n: usize, j: usize, a: f64, c: f64, beta: f64) -> Result<Substitutes> {
    ensure(n > 3, || format!("the triangulation needs N > 3, got {n}"))?;
    ensure((1..=n).contains(&j), || format!("slice index must lie in 1..={n}, got {j}"))?;
    ensure(a > 0.0 && c > 0.0, || format!("a and c must be positive, got a = {a}, c = {c}"))?;
    let nf = n as f64;
    let jf = j as f64;
    let y_prev = y_big(n, jf - 1.0, a, c, beta);
    let y_n = y_big(n, jf, a, c, beta);
    let z_n = z_big(n, jf, a, c, beta);
    let z_prev = z_big(n, jf - 1.0, a, c, beta);
    let c0 = y_prev / nf;
    // angle at p_{j−1} between the continued ray o→p_{j−1} and the side line
    let beta0 = (nf * c * beta.sin()).atan2(z_prev);
    let alpha_bar = ((jf - 1.0) * a * beta.sin()).atan2(nf * c + (jf - 1.0) * a * beta.cos());
    let e1 = a * beta0.sin();
    let x_n = nf * c0 + a * beta0.cos();
    let x_1 = (y_prev * y_prev + nf * a * z_prev) / (nf * y_prev);
    let y_1 = y_big(n, nf + jf - 1.0, a, c, beta) / nf;
    let i_n = harmonic_i(n);
    let e_orig = a * beta.sin();
    Ok(Substitutes {
        n,
        j,
        x_n,
        y_n,
        z_n,
        y_prev,
        e1,
        x_1,
        y_1,
        i_n,
        f_n: nf * c * e_orig,
        lambda_n: nf * i_n * c * c * e_orig * e_orig,
        l_n: y_n * y_n - a * z_n,
        c0,
        beta0,
        alpha_bar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn first_slice_examples() {
        let s = substitutes(4, 1, 1.0, 1.0, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(s.y_n, 17f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(s.c0, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.beta0, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.i_n, 1.0 / 3.0);
        assert_abs_diff_eq!(s.k_n(1), s.y_n, epsilon = 1e-14);
        assert!(substitutes(3, 1, 1.0, 1.0, 0.3).is_err());
        assert!(substitutes(8, 9, 1.0, 1.0, 0.3).is_err());
    }

    #[test]
    fn generalized_relations() {
        let (n, a, c, beta) = (9, 0.7, 1.3, 1.1);
        for j in 1..=n {
            let s = substitutes(n, j, a, c, beta).unwrap();
            // local slice quantities agree with the generalized global forms
            assert_abs_diff_eq!(s.x_n * s.y_prev, s.y_n * s.y_n - a * s.z_n, epsilon = 1e-12);
            assert_abs_diff_eq!(s.k_n(1), s.y_n, epsilon = 1e-12);
            let local_y = (a * a + (n as f64 * s.c0).powi(2) + 2.0 * n as f64 * a * s.c0 * s.beta0.cos()).sqrt();
            assert_abs_diff_eq!(local_y, s.y_n, epsilon = 1e-12);
            assert_abs_diff_eq!(s.x_1, s.c0 + a * s.beta0.cos(), epsilon = 1e-12);
            let local_y1 = (a * a + s.c0 * s.c0 + 2.0 * a * s.c0 * s.beta0.cos()).sqrt();
            assert_abs_diff_eq!(s.y_1, local_y1, epsilon = 1e-12);
            assert_abs_diff_eq!(s.e1, n as f64 * a * c * beta.sin() / s.y_prev, epsilon = 1e-12);
        }
        assert!(substitutes(n, 1, a, c, beta).unwrap().alpha_bar == 0.0);
        let last = substitutes(n, n, a, c, beta).unwrap();
        let b0 = (a * a + c * c + 2.0 * a * c * beta.cos()).sqrt();
        // p_{N−1} + last side piece reaches the apex
        assert!(last.alpha_bar < (a * beta.sin() / b0).asin());
        let _ = PI;
    }
}
