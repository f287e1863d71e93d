//! LU factorization with partial pivoting on maximal modulus.
//!
//! Drives the determinant oracle and every linear solve in the crate. A
//! numerically singular factorization is not an accident here: it is the
//! resonance signal, so `solve` reports it as a dedicated error instead of
//! returning garbage.

use num_complex::Complex64;

use super::dense::{DenseMatrix, DenseVector};
use crate::error::{Error, Result};

/// Pivot threshold, relative to the largest entry of the input matrix.
/// Anything below counts as an exact zero produced by cancellation.
const SINGULAR_PIVOT_REL: f64 = 1e-300;

/// Packed LU factors of a square matrix.
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
    swap_sign: f64,
    scale: f64,
    min_pivot: f64,
}

impl LuFactors {
    pub fn factor(a: &DenseMatrix) -> Self {
        assert!(a.is_square(), "LU needs a square matrix");
        debug_assert!(a.is_finite(), "LU input must be finite");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swap_sign = 1.0;
        let scale = a.max_abs();
        let mut min_pivot = f64::INFINITY;

        for k in 0..n {
            // pivot row: maximal modulus in column k at or below the diagonal
            let mut piv = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if piv != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = tmp;
                }
                perm.swap(k, piv);
                swap_sign = -swap_sign;
            }
            let pivot = lu[(k, k)];
            min_pivot = min_pivot.min(pivot.norm());
            if pivot.norm() == 0.0 {
                continue; // exactly singular; remaining column is zero
            }
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let adj = factor * lu[(k, j)];
                    lu[(i, j)] -= adj;
                }
            }
        }
        Self {
            lu,
            perm,
            swap_sign,
            scale,
            min_pivot,
        }
    }

    /// Determinant from the pivot product, with the row-swap sign.
    pub fn det(&self) -> Complex64 {
        let n = self.lu.rows();
        let mut d = Complex64::new(self.swap_sign, 0.0);
        for k in 0..n {
            d *= self.lu[(k, k)];
        }
        d
    }

    /// True when some pivot fell below the singularity threshold.
    pub fn is_singular(&self) -> bool {
        let n = self.lu.rows();
        n > 0 && self.min_pivot <= SINGULAR_PIVOT_REL * self.scale.max(f64::MIN_POSITIVE)
    }

    /// Solves `A x = b` from the packed factors.
    pub fn solve(&self, b: &[Complex64]) -> Result<DenseVector> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        if self.is_singular() {
            return Err(Error::SingularSystem { nearest_mode: None });
        }
        // forward substitution on P·b with unit lower factor
        let mut x: DenseVector = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let adj = self.lu[(i, j)] * x[j];
                x[i] -= adj;
            }
        }
        // back substitution with the upper factor
        for i in (0..n).rev() {
            for j in i + 1..n {
                let adj = self.lu[(i, j)] * x[j];
                x[i] -= adj;
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }
}

/// Determinant via LU with partial pivoting; singular input yields 0
/// within roundoff.
pub fn lu_det(a: &DenseMatrix) -> Complex64 {
    if a.rows() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    LuFactors::factor(a).det()
}

/// Solves `A x = b`. A singular `A` is the resonance signal and raises
/// [`Error::SingularSystem`].
pub fn lin_solve(a: &DenseMatrix, b: &[Complex64]) -> Result<DenseVector> {
    LuFactors::factor(a).solve(b)
}
