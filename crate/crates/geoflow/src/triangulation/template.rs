//! Assembly of a slice from constant-curvature expansions.
//!
//! Every small triangle of a slice is expanded with [`c_expand`] /
//! [`sc_expand`]; the unknown rib coefficients `a₃^i` are fixed by requiring
//! that the three angles at each interior top-line vertex add to `π` at second
//! order (the δ-equation). This is an independent path to the solved forms in
//! [`super::slice`] and backs [`delta_residual`].

use super::slice::SliceResult;
use crate::curved_trig::{c_expand, sc_expand, ExpansionInputs};
use crate::error::{ensure, Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};

/// Length jet `(l₁, l₃)`: `l = l₁ε + l₃ε³`.
type Len = (f64, f64);
/// Angle jet `(a₀, a₂)`: `α = a₀ + a₂ε²`.
type Ang = (f64, f64);

fn inputs(k: f64, g: Ang, a: Len, b: Len) -> ExpansionInputs {
    ExpansionInputs { a: [a.0, 0.0, a.1], b: [b.0, 0.0, b.1], gamma0: g.0, gamma: [0.0, g.1], k }
}

fn side_c(k: f64, g: Ang, a: Len, b: Len) -> Result<Len> {
    let c = c_expand(&inputs(k, g, a, b))?;
    Ok((c[0], c[2]))
}

fn angle(k: f64, g: Ang, a: Len, b: Len) -> Result<Ang> {
    let s = sc_expand(&inputs(k, g, a, b))?;
    Ok((s[0], s[2]))
}

fn supplement(t: Ang) -> Ang {
    (PI - t.0, -t.1)
}

/// Slice geometry fed to the template: local parameters, curvature samples
/// and the incoming second-order arguments `c₂`, `β₂`.
#[derive(Debug, Clone)]
pub struct SliceTemplate {
    pub n: usize,
    pub a: f64,
    pub c: f64,
    pub beta: f64,
    pub k_samples: Vec<f64>,
    pub c2: f64,
    pub beta2: f64,
}

/// Assembled second-order outputs and the δ-residuals (index `i ∈ 2..=N−1`).
#[derive(Debug, Clone)]
pub struct TemplateEval {
    pub b2: f64,
    pub gamma2: f64,
    pub alpha2: f64,
    pub b0: f64,
    pub gamma0: f64,
    pub alpha0: f64,
    pub residual: Vec<f64>,
    /// Zeroth-order angle sums minus π at the same vertices.
    pub residual0: Vec<f64>,
    pub top: Vec<f64>,
}

impl SliceTemplate {
    pub fn from_result(s: &SliceResult) -> Self {
        Self { n: s.n, a: s.a, c: s.c0, beta: s.beta0, k_samples: s.k_samples.clone(), c2: 0.0, beta2: 0.0 }
    }

    fn k(&self, i: usize) -> f64 {
        self.k_samples[i - 1]
    }

    /// Assembles the slice for the given rib coefficients (`rib[i]`, `i ∈ 2..=N−1`).
    pub fn eval(&self, rib: &[f64]) -> Result<TemplateEval> {
        let n = self.n;
        ensure(n > 3 && self.k_samples.len() == n && rib.len() >= n, || "inconsistent slice template".into())?;
        let x = n as f64 * self.c + self.a * self.beta.cos();
        let e1 = self.a * self.beta.sin();
        let cs: Len = (self.c, self.c2);
        let side: Len = (self.a, 0.0);
        let ribs: Vec<Len> = (0..n).map(|i| (self.c * i as f64 * e1 / x, rib[i])).collect();
        let mut d = vec![(0.0, 0.0); n];
        let mut al = vec![(0.0, 0.0); n];
        let mut gll = vec![(0.0, 0.0); n];
        // segment N: the side piece, base piece and the last diagonal
        let g = (PI - self.beta, -self.beta2);
        d[n - 1] = side_c(self.k(n), g, side, cs)?;
        al[n - 1] = angle(self.k(n), g, side, cs)?;
        let g_n = angle(self.k(n), g, cs, side)?;
        // right triangles at the base
        for i in 2..n {
            let g = (FRAC_PI_2, 0.0);
            d[i - 1] = side_c(self.k(i), g, ribs[i], cs)?;
            al[i - 1] = angle(self.k(i), g, ribs[i], cs)?;
            gll[i] = angle(self.k(i), g, cs, ribs[i])?;
        }
        // upper triangles
        let mut top = vec![(0.0, 0.0); n];
        let mut ah = vec![(0.0, 0.0); n];
        let mut de = vec![(0.0, 0.0); n];
        for i in 2..n {
            let g = (FRAC_PI_2 - al[i].0, -al[i].1);
            top[i] = side_c(self.k(i), g, ribs[i], d[i])?;
            ah[i] = angle(self.k(i), g, ribs[i], d[i])?;
            de[i] = supplement(angle(self.k(i), g, d[i], ribs[i])?);
        }
        let g = (PI - al[1].0, -al[1].1);
        top[1] = side_c(self.k(1), g, cs, d[1])?;
        ah[1] = angle(self.k(1), g, cs, d[1])?;
        let alpha = angle(self.k(1), g, d[1], cs)?;
        let mut residual = vec![0.0; n];
        let mut residual0 = vec![0.0; n];
        for i in 2..n {
            residual[i] = ah[i - 1].1 + gll[i].1 + de[i].1;
            residual0[i] = ah[i - 1].0 + gll[i].0 + de[i].0 - PI;
        }
        let eps = 1.0 / n as f64;
        Ok(TemplateEval {
            b2: top[1..].iter().map(|t| t.1).sum::<f64>() * eps,
            b0: top[1..].iter().map(|t| t.0).sum::<f64>() * eps,
            gamma2: ah[n - 1].1 + g_n.1,
            gamma0: ah[n - 1].0 + g_n.0,
            alpha2: alpha.1,
            alpha0: alpha.0,
            residual,
            residual0,
            top: top.iter().map(|t| t.1).collect(),
        })
    }

    /// Solves the δ-equations for the rib coefficients. The residuals are
    /// affine in the ribs, so the system is built by probing and solved densely.
    pub fn solve(&self) -> Result<(Vec<f64>, TemplateEval)> {
        let n = self.n;
        let zero = vec![0.0; n];
        let r0 = self.eval(&zero)?.residual;
        let m = n - 2;
        let mut mat = vec![vec![0.0; m + 1]; m];
        for col in 0..m {
            let mut probe = zero.clone();
            probe[col + 2] = 1.0;
            let r = self.eval(&probe)?.residual;
            for row in 0..m {
                mat[row][col] = r[row + 2] - r0[row + 2];
            }
        }
        for row in 0..m {
            mat[row][m] = -r0[row + 2];
        }
        let sol = gauss_solve(mat)?;
        let mut rib = zero;
        rib[2..].copy_from_slice(&sol);
        let out = self.eval(&rib)?;
        Ok((rib, out))
    }
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn gauss_solve(mut m: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap_or(col);
        if m[piv][col].abs() < 1e-300 {
            return Err(Error::Degenerate("singular δ-system".into()));
        }
        m.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..=n {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (m[row][n] - s) / m[row][row];
    }
    Ok(x)
}

/// Second-order δ-residual at vertex `i` of a computed slice: the difference
/// of the two expressions for the angle δ once the slice's `a₃^i` are inserted.
pub fn delta_residual(n: usize, j: usize, i: usize, state: &SliceResult) -> Result<f64> {
    ensure(state.n == n && state.j == j, || format!("state belongs to slice {} of N = {}", state.j, state.n))?;
    ensure((2..n).contains(&i), || format!("vertex index must lie in 2..={}, got {i}", n - 1))?;
    Ok(SliceTemplate::from_result(state).eval(&state.rib)?.residual[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::slice::{first_slice, slice_second_order};
    use approx::assert_abs_diff_eq;

    #[test]
    fn solved_forms_agree_with_assembly() {
        let n = 9;
        let ks: Vec<f64> = (0..n).map(|i| 0.6 + 0.15 * i as f64).collect();
        let s = first_slice(n, 0.5, 1.0, PI / 3.0, &ks).unwrap();
        let (rib, ev) = SliceTemplate::from_result(&s).solve().unwrap();
        for i in 2..n {
            assert_abs_diff_eq!(rib[i], s.rib[i], epsilon = 1e-11);
        }
        for i in 1..n {
            assert_abs_diff_eq!(ev.top[i], s.top[i], epsilon = 1e-11);
        }
        assert_abs_diff_eq!(ev.b2, s.b2_interior, epsilon = 1e-11);
        assert_abs_diff_eq!(ev.gamma2, s.gamma2_interior, epsilon = 1e-11);
        assert_abs_diff_eq!(ev.alpha2, s.alpha2_interior, epsilon = 1e-11);
        assert!(ev.residual0.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn argument_coefficients_agree_with_assembly() {
        let (n, a, c, beta) = (9, 0.5, 1.3, PI / 3.3);
        let s = first_slice(n, a, c, beta, &[0.0; 9]).unwrap();
        let mut t = SliceTemplate::from_result(&s);
        t.c2 = 1.0;
        let oc = t.solve().unwrap().1;
        t.c2 = 0.0;
        t.beta2 = 1.0;
        let ob = t.solve().unwrap().1;
        assert_abs_diff_eq!(oc.gamma2, s.coeff_gamma_c, epsilon = 1e-12);
        assert_abs_diff_eq!(ob.gamma2, s.coeff_gamma_beta, epsilon = 1e-12);
        assert_abs_diff_eq!(ob.b2, s.coeff_b_beta, epsilon = 1e-12);
        assert_abs_diff_eq!(oc.b2, s.coeff_b_c, epsilon = 1e-12);
        assert_abs_diff_eq!(oc.alpha2, s.coeff_alpha_c, epsilon = 1e-12);
        assert_abs_diff_eq!(ob.alpha2, s.coeff_alpha_beta, epsilon = 1e-12);
    }

    #[test]
    fn residuals_vanish_and_detect_perturbations() {
        let n = 11;
        let ks: Vec<f64> = (0..n).map(|i| 1.0 + 0.2 * (i as f64).cos()).collect();
        let mut s = slice_second_order(n, 4, 0.5, 1.0, 0.9, &ks).unwrap();
        for i in 2..n {
            assert!(delta_residual(n, 4, i, &s).unwrap().abs() < 1e-10);
        }
        s.rib[5] += 1e-3;
        assert!(delta_residual(n, 4, 5, &s).unwrap().abs() > 1e-6);
        assert!(delta_residual(n, 4, 1, &s).is_err());
    }
}
