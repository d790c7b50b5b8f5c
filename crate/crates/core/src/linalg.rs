//! Small dense linear algebra on row-major `Vec<f64>` buffers.

use alloc::vec;
use alloc::vec::Vec;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `y = M x` for a square row-major `M`.
pub fn mat_vec(m: &[f64], x: &[f64]) -> Vec<f64> {
    let d = x.len();
    debug_assert_eq!(m.len(), d * d);
    m.chunks_exact(d).map(|row| dot(row, x)).collect()
}

/// Rank-one Sherman–Morrison step: replaces `A^{-1}` by `(A + x x^T)^{-1}`.
///
/// `a_inv` must be symmetric positive definite, which keeps the denominator
/// `1 + x^T A^{-1} x` at least 1.
pub fn sherman_morrison_update(a_inv: &mut [f64], x: &[f64]) {
    let d = x.len();
    let u = mat_vec(a_inv, x);
    let denom = 1.0 + dot(x, &u);
    for i in 0..d {
        let ui = u[i] / denom;
        let row = &mut a_inv[i * d..(i + 1) * d];
        for (cell, uj) in row.iter_mut().zip(&u) {
            *cell -= ui * uj;
        }
    }
}

/// Ridge-regression sufficient statistics `A = reg I + Σ x x^T`,
/// `b = Σ r x`, with `A^{-1}` maintained incrementally.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeState {
    dim: usize,
    a: Vec<f64>,
    a_inv: Vec<f64>,
    b: Vec<f64>,
}

impl RidgeState {
    pub fn new(dim: usize, reg: f64) -> Self {
        assert!(reg > 0.0, "ridge regularization must be positive");
        let mut a = vec![0.0; dim * dim];
        let mut a_inv = vec![0.0; dim * dim];
        for i in 0..dim {
            a[i * dim + i] = reg;
            a_inv[i * dim + i] = 1.0 / reg;
        }
        Self {
            dim,
            a,
            a_inv,
            b: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn a_inv(&self) -> &[f64] {
        &self.a_inv
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub(crate) fn b_mut(&mut self) -> &mut [f64] {
        &mut self.b
    }

    /// `θ = A^{-1} b`.
    pub fn theta(&self) -> Vec<f64> {
        mat_vec(&self.a_inv, &self.b)
    }

    /// `x^T A^{-1} x`, clamped at zero against rounding.
    pub fn variance(&self, x: &[f64]) -> f64 {
        dot(x, &mat_vec(&self.a_inv, x)).max(0.0)
    }

    pub fn update(&mut self, x: &[f64], reward: f64) {
        debug_assert_eq!(x.len(), self.dim);
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                self.a[i * d + j] += x[i] * x[j];
            }
            self.b[i] += reward * x[i];
        }
        sherman_morrison_update(&mut self.a_inv, x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fresh_state_has_zero_theta() {
        let s = RidgeState::new(3, 1.0);
        assert_eq!(s.theta(), vec![0.0; 3]);
        assert_eq!(s.variance(&[1.0, 0.0, 0.0]), 1.0);
    }

    #[test]
    fn single_update_matches_closed_form() {
        // A = I + e1 e1^T = diag(2, 1), b = e1 -> theta = (0.5, 0)
        let mut s = RidgeState::new(2, 1.0);
        s.update(&[1.0, 0.0], 1.0);
        let th = s.theta();
        assert_abs_diff_eq!(th[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(th[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.a_inv()[0], 0.5, epsilon = 1e-15);
    }
}
