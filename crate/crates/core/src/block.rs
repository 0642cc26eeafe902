//! Block tridiagonal systems with 2×2 blocks, solved by block Thomas elimination.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2};

/// Row `j` reads `lower[j]·x_{j−1} + diag[j]·x_j + upper[j]·x_{j+1} = rhs[j]`.
///
/// `lower[0]` and `upper[n−1]` are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockTridiagonalSystem {
    pub lower: Vec<Mat2>,
    pub diag: Vec<Mat2>,
    pub upper: Vec<Mat2>,
    pub rhs: Vec<Vec2>,
}

impl BlockTridiagonalSystem {
    pub fn zeros(n: usize) -> Self {
        BlockTridiagonalSystem {
            lower: vec![Mat2::ZERO; n],
            diag: vec![Mat2::ZERO; n],
            upper: vec![Mat2::ZERO; n],
            rhs: vec![Vec2::ZERO; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `A·x` for a candidate solution.
    pub fn apply(&self, x: &[Vec2]) -> Vec<Vec2> {
        let n = self.len();
        (0..n)
            .map(|j| {
                let mut r = self.diag[j] * x[j];
                if j > 0 {
                    r += self.lower[j] * x[j - 1];
                }
                if j + 1 < n {
                    r += self.upper[j] * x[j + 1];
                }
                r
            })
            .collect()
    }

    /// Max-norm of `A·x − rhs`.
    pub fn residual_norm(&self, x: &[Vec2]) -> f64 {
        self.apply(x)
            .iter()
            .zip(&self.rhs)
            .map(|(ax, b)| (*ax - *b).max_abs())
            .fold(0.0, libm::fmax)
    }

    pub fn solve(&self) -> Result<Vec<Vec2>> {
        solve_block_tridiagonal(self)
    }
}

/// Direct block elimination without pivoting across blocks.
pub fn solve_block_tridiagonal(sys: &BlockTridiagonalSystem) -> Result<Vec<Vec2>> {
    let n = sys.len();
    if sys.lower.len() != n || sys.upper.len() != n || sys.rhs.len() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            actual: sys.rhs.len().min(sys.lower.len()).min(sys.upper.len()),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // Forward sweep: c[j] = D'_j^{-1} U_j, d[j] = D'_j^{-1} r'_j.
    let mut c = vec![Mat2::ZERO; n];
    let mut d = vec![Vec2::ZERO; n];
    let mut prev_c = Mat2::ZERO;
    let mut prev_d = Vec2::ZERO;
    for j in 0..n {
        let (pivot, r) = if j == 0 {
            (sys.diag[0], sys.rhs[0])
        } else {
            let l = sys.lower[j];
            (sys.diag[j] - l * prev_c, sys.rhs[j] - l * prev_d)
        };
        let inv = pivot.inverse().ok_or(Error::SingularSystem { node: j })?;
        c[j] = inv * sys.upper[j];
        d[j] = inv * r;
        prev_c = c[j];
        prev_d = d[j];
    }
    let mut x = d;
    for j in (0..n - 1).rev() {
        let next = x[j + 1];
        x[j] -= c[j] * next;
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("block tridiagonal solution"));
    }
    Ok(x)
}

/// Scalar tridiagonal solve `lower[j]·x_{j−1} + diag[j]·x_j + upper[j]·x_{j+1} = rhs[j]`.
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            actual: rhs.len(),
        });
    }
    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n];
    for j in 0..n {
        let (pivot, r) = if j == 0 {
            (diag[0], rhs[0])
        } else {
            (diag[j] - lower[j] * c[j - 1], rhs[j] - lower[j] * x[j - 1])
        };
        let scale = libm::fmax(libm::fabs(diag[j]), libm::fabs(upper[j]));
        if !pivot.is_finite() || libm::fabs(pivot) <= 1e-14 * scale {
            return Err(Error::SingularSystem { node: j });
        }
        c[j] = upper[j] / pivot;
        x[j] = r / pivot;
    }
    for j in (0..n.saturating_sub(1)).rev() {
        x[j] -= c[j] * x[j + 1];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("tridiagonal solution"));
    }
    Ok(x)
}
