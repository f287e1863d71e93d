//! Assembly of the transmission system matrices.
//!
//! 3D: `P_N` carries the contrast λ_j on the diagonal, −1 above it and
//! `2(r_i/r_j)³` below it; `Υ_N = diag(r_j³)`. For the alternating
//! material pattern `P_N(λ) = (λI − K_N)·S` with `S = diag((−1)^{j−1})`,
//! so the mode set is exactly the spectrum of `K_N := −P_N(0)·S`, a
//! matrix that depends on the radii alone.
//!
//! 2D at angular order n: `P̃_N^{(n)}` flips the triangle convention —
//! `(r_j/r_i)^{2n}` above the diagonal, −1 below — and the alternating
//! pattern reduces it to `λ̃·S + C` with `C = P̃|_{λ̃=0}`.

use num_complex::Complex64;

use super::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::structure::{ContrastVector, Dimension, LayeredStructure};

/// The matrices of one assembled transmission system.
#[derive(Debug, Clone)]
pub struct SystemMatrices {
    /// System matrix `P_N` (3D) or `P̃_N^{(n)}` (2D).
    pub p: DenseMatrix,
    /// Diagonal of `Υ_N`: `r_j^p` with p = 3 (3D) or 2n (2D).
    pub upsilon: Vec<f64>,
    /// Lower-triangular ones (cumulative-sum operator for coefficients).
    pub xi: DenseMatrix,
    /// Superdiagonal ones (index shift between coefficient layers).
    pub shift: DenseMatrix,
    /// `K_N`, present when the contrasts follow the 3D alternating pattern.
    pub k: Option<DenseMatrix>,
    /// `diag((−1)^{j−1})`, present for the 2D alternating pattern.
    pub s: Option<Vec<f64>>,
    /// `P̃` with λ̃ = 0, present for the 2D alternating pattern.
    pub c: Option<DenseMatrix>,
    pub dimension: Dimension,
    /// Angular order n (2D only).
    pub order: Option<u32>,
}

/// All-ones vector e.
pub fn e_vector(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0); n]
}

/// Alternating-sign vector ẽ = (1, −1, 1, …).
pub fn e_tilde_vector(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
        .collect()
}

/// Lower-triangular ones matrix Ξ.
pub fn xi_matrix(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        Complex64::new(if j <= i { 1.0 } else { 0.0 }, 0.0)
    })
}

/// Exact integer inverse of Ξ: ones on the diagonal, −1 on the
/// subdiagonal.
pub fn xi_inverse(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        let v = if i == j {
            1.0
        } else if j + 1 == i {
            -1.0
        } else {
            0.0
        };
        Complex64::new(v, 0.0)
    })
}

/// Superdiagonal ones matrix M.
pub fn shift_matrix(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        Complex64::new(if j == i + 1 { 1.0 } else { 0.0 }, 0.0)
    })
}

/// `K_N` from the radii alone. Row pattern (1-based indices): diagonal
/// `(1+(−1)^i)/2`, above-diagonal `(−1)^{j+1}`, below-diagonal
/// `(−1)^j·2(r_i/r_j)³`.
///
/// This is `−P_N(0)·S`; its spectrum equals the root set of
/// `λ ↦ det P_N(λ)` for the alternating material pattern, and the sign
/// layout is pinned by that identity (checked against the determinant
/// oracle in the tests).
pub fn k_matrix(s: &LayeredStructure) -> DenseMatrix {
    let radii = s.radii();
    let n = radii.len();
    DenseMatrix::from_fn(n, n, |i, j| {
        let v = if i == j {
            // 0-based i corresponds to 1-based i+1
            if i % 2 == 1 {
                1.0
            } else {
                0.0
            }
        } else if j > i {
            if j % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            let t = 2.0 * (radii[i] / radii[j]).powi(3);
            if j % 2 == 0 {
                -t
            } else {
                t
            }
        };
        Complex64::new(v, 0.0)
    })
}

/// 3D system matrix for arbitrary contrast values.
pub fn p_matrix_3d(s: &LayeredStructure, contrasts: &[Complex64]) -> DenseMatrix {
    let radii = s.radii();
    let n = radii.len();
    assert_eq!(contrasts.len(), n);
    DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            contrasts[i]
        } else if j > i {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(2.0 * (radii[i] / radii[j]).powi(3), 0.0)
        }
    })
}

/// 2D order-n system matrix for arbitrary contrast values.
pub fn p_matrix_2d(s: &LayeredStructure, contrasts: &[Complex64], order: u32) -> DenseMatrix {
    let radii = s.radii();
    let n = radii.len();
    assert_eq!(contrasts.len(), n);
    let p = 2 * order as i32;
    DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            contrasts[i]
        } else if j > i {
            Complex64::new((radii[j] / radii[i]).powi(p), 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    })
}

fn check_dimension(s: &LayeredStructure, c: &ContrastVector, expected: Dimension) -> Result<()> {
    if s.dimension() != expected {
        return Err(Error::DimensionMismatch {
            expected: expected.as_u8(),
            got: s.dimension().as_u8(),
        });
    }
    if c.dimension() != expected {
        return Err(Error::DimensionMismatch {
            expected: expected.as_u8(),
            got: c.dimension().as_u8(),
        });
    }
    if c.len() != s.layer_count() {
        return Err(Error::Validation(format!(
            "contrast vector has {} entries for {} layers",
            c.len(),
            s.layer_count()
        )));
    }
    Ok(())
}

/// Assembles the 3D system: `P_N`, `Υ_N` (p = 3), Ξ and the shift matrix,
/// plus `K_N` whenever the contrasts follow the alternating pattern.
pub fn assemble_3d(s: &LayeredStructure, c: &ContrastVector) -> Result<SystemMatrices> {
    check_dimension(s, c, Dimension::Three)?;
    let n = s.layer_count();
    let p = p_matrix_3d(s, c.values());
    let upsilon = s.radii().iter().map(|r| r.powi(3)).collect();
    let k = c.alternating_lambda().map(|_| k_matrix(s));
    Ok(SystemMatrices {
        p,
        upsilon,
        xi: xi_matrix(n),
        shift: shift_matrix(n),
        k,
        s: None,
        c: None,
        dimension: Dimension::Three,
        order: None,
    })
}

/// Assembles the 2D order-n system: `P̃^{(n)}`, `Υ̃^{(n)}` (p = 2n), and
/// for alternating contrasts the split `P̃ = λ̃·S + C`.
pub fn assemble_2d(s: &LayeredStructure, c: &ContrastVector, order: u32) -> Result<SystemMatrices> {
    check_dimension(s, c, Dimension::Two)?;
    if order < 1 {
        return Err(Error::Validation(
            "angular order n must be at least 1".into(),
        ));
    }
    let n = s.layer_count();
    let p = p_matrix_2d(s, c.values(), order);
    let upsilon = s.radii().iter().map(|r| r.powi(2 * order as i32)).collect();
    let (sign, c_mat) = if c.alternating_lambda().is_some() {
        let sign: Vec<f64> = (0..n)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let zero = vec![Complex64::new(0.0, 0.0); n];
        let c_mat = p_matrix_2d(s, &zero, order);
        (Some(sign), Some(c_mat))
    } else {
        (None, None)
    };
    Ok(SystemMatrices {
        p,
        upsilon,
        xi: xi_matrix(n),
        shift: shift_matrix(n),
        k: None,
        s: sign,
        c: c_mat,
        dimension: Dimension::Two,
        order: Some(order),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_dense, lu_det};
    use crate::structure::{alternating_contrasts, alternating_profile, contrasts};

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn structure(radii: &[f64], dim: Dimension) -> LayeredStructure {
        LayeredStructure::new(radii.to_vec(), dim).unwrap()
    }

    #[test]
    fn smallest_system() {
        let s = structure(&[1.5], Dimension::Three);
        let c = ContrastVector::from_values(vec![c64(0.0)], Dimension::Three);
        let sys = assemble_3d(&s, &c).unwrap();
        assert_eq!(sys.p[(0, 0)], c64(0.0));
        assert_eq!(sys.upsilon, vec![1.5f64.powi(3)]);
    }

    #[test]
    fn p_matrix_entries_match_formula() {
        let s = structure(&[2.0, 1.0], Dimension::Three);
        let c = ContrastVector::from_values(vec![c64(0.3), c64(0.7)], Dimension::Three);
        let sys = assemble_3d(&s, &c).unwrap();
        assert_eq!(sys.p[(0, 0)], c64(0.3));
        assert_eq!(sys.p[(0, 1)], c64(-1.0));
        assert_eq!(sys.p[(1, 0)], c64(2.0 * 0.125));
        assert_eq!(sys.p[(1, 1)], c64(0.7));
    }

    #[test]
    fn k_matrix_two_layers() {
        // For radii (2, 1): eig(K_2) must be the roots of det P_2(lambda),
        // i.e. q = lambda^2 - lambda = 2 t12 = 0.25. That oracle pins the
        // sign layout to [[0, -1], [-0.25, 1]].
        let s = structure(&[2.0, 1.0], Dimension::Three);
        let k = k_matrix(&s);
        assert_eq!(k[(0, 0)], c64(0.0));
        assert_eq!(k[(0, 1)], c64(-1.0));
        assert_eq!(k[(1, 0)], c64(-0.25));
        assert_eq!(k[(1, 1)], c64(1.0));

        let mut eigs: Vec<f64> = eig_dense(&k).unwrap().iter().map(|z| z.re).collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let root = 0.5 * (1.0 + 2.0f64.sqrt());
        assert!((eigs[0] - (1.0 - root)).abs() < 1e-12, "{eigs:?}");
        assert!((eigs[1] - root).abs() < 1e-12);

        // determinant oracle: det P(lambda) vanishes at both eigenvalues
        for &lam in &eigs {
            let cv = alternating_contrasts(c64(lam), 2, Dimension::Three);
            let p = p_matrix_3d(&s, cv.values());
            assert!(lu_det(&p).norm() < 1e-12);
        }
    }

    #[test]
    fn k_populated_only_for_alternating() {
        let s = structure(&[3.0, 2.0, 1.0], Dimension::Three);
        let profile = alternating_profile(2.5, 0.0, 1.0, 3).unwrap();
        let cv = contrasts(&profile, Dimension::Three).unwrap();
        assert!(assemble_3d(&s, &cv).unwrap().k.is_some());

        let other =
            ContrastVector::from_values(vec![c64(0.1), c64(0.2), c64(0.3)], Dimension::Three);
        assert!(assemble_3d(&s, &other).unwrap().k.is_none());
    }

    #[test]
    fn k_spectrum_matches_determinant_roots_general() {
        // For a handful of geometries, det P(lambda_k) ~ 0 at every
        // eigenvalue of K.
        let geoms: [&[f64]; 3] = [
            &[2.0, 1.0],
            &[5.0, 3.0, 2.0, 1.5],
            &[4.0, 3.9, 2.2, 1.1, 0.4],
        ];
        for radii in geoms {
            let s = structure(radii, Dimension::Three);
            let k = k_matrix(&s);
            let eigs = eig_dense(&k).unwrap();
            let scale = k.max_abs();
            for lam in eigs {
                assert!(lam.im.abs() < 1e-7 * scale, "spectrum should be real");
                let cv = alternating_contrasts(c64(lam.re), radii.len(), Dimension::Three);
                let p = p_matrix_3d(&s, cv.values());
                assert!(
                    lu_det(&p).norm() < 1e-8,
                    "det residual {} at lambda {}",
                    lu_det(&p).norm(),
                    lam.re
                );
            }
        }
    }

    #[test]
    fn two_dimensional_assembly() {
        let s = structure(&[1.0], Dimension::Two);
        let c = ContrastVector::from_values(vec![c64(0.4)], Dimension::Two);
        let sys = assemble_2d(&s, &c, 1).unwrap();
        assert_eq!(sys.p[(0, 0)], c64(0.4));

        // N=2 alternating at order 1: C = [[0, 0.64], [-1, 0]], S = (1, -1)
        let s = structure(&[1.0, 0.8], Dimension::Two);
        let cv = alternating_contrasts(c64(0.3), 2, Dimension::Two);
        let sys = assemble_2d(&s, &cv, 1).unwrap();
        let c_mat = sys.c.as_ref().unwrap();
        assert_eq!(c_mat[(0, 0)], c64(0.0));
        assert!((c_mat[(0, 1)] - c64(0.64)).norm() < 1e-15);
        assert_eq!(c_mat[(1, 0)], c64(-1.0));
        assert_eq!(sys.s.as_ref().unwrap(), &vec![1.0, -1.0]);

        // P = lambda*S + C reconstructs the assembled matrix
        for i in 0..2 {
            for j in 0..2 {
                let lhs = sys.p[(i, j)];
                let rhs = if i == j {
                    c64(0.3 * sys.s.as_ref().unwrap()[i]) + c_mat[(i, j)]
                } else {
                    c_mat[(i, j)]
                };
                assert!((lhs - rhs).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn alternating_2d_diagonal_alternates() {
        let s = structure(&[3.0, 2.0, 1.0], Dimension::Two);
        let cv = alternating_contrasts(c64(0.25), 3, Dimension::Two);
        let sys = assemble_2d(&s, &cv, 2).unwrap();
        assert_eq!(sys.p[(0, 0)], c64(0.25));
        assert_eq!(sys.p[(1, 1)], c64(-0.25));
        assert_eq!(sys.p[(2, 2)], c64(0.25));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let s = structure(&[1.0], Dimension::Two);
        let c = ContrastVector::from_values(vec![c64(0.0)], Dimension::Three);
        assert!(matches!(
            assemble_3d(&s, &c),
            Err(Error::DimensionMismatch { .. })
        ));
        let s3 = structure(&[1.0], Dimension::Three);
        let c3 = ContrastVector::from_values(vec![c64(0.0)], Dimension::Three);
        let c2 = ContrastVector::from_values(vec![c64(0.0)], Dimension::Two);
        assert!(assemble_2d(&s3, &c2, 1).is_err());
        assert!(assemble_2d(&s, &c2, 0).is_err());
        let _ = c3;
    }

    #[test]
    fn xi_inverse_exact_in_structure() {
        for n in [1, 3, 4, 7] {
            let prod = xi_matrix(n).mat_mul(&xi_inverse(n));
            assert_eq!(prod, DenseMatrix::identity(n));
            let eigs = eig_dense(&xi_matrix(n)).unwrap();
            for e in eigs {
                assert!((e - c64(1.0)).norm() < 1e-10);
            }
        }
    }
}
