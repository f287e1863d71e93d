//! Dense nonsymmetric eigensolver.
//!
//! Householder reduction to upper Hessenberg form followed by explicitly
//! shifted QR sweeps with complex Givens rotations. Working entirely in
//! complex arithmetic sidesteps the real-Schur 2×2 bulge bookkeeping; the
//! matrices here are small (layer counts), so simplicity wins over flop
//! counts.

use num_complex::Complex64;

use super::dense::DenseMatrix;
use super::lu::LuFactors;
use crate::error::{Error, Result};

/// QR sweep budget per eigenvalue before giving up loudly.
const MAX_SWEEPS_PER_EIG: usize = 60;

/// Reduces a square matrix to upper Hessenberg form by unitary similarity.
fn hessenberg(mut h: DenseMatrix) -> DenseMatrix {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let xnorm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm_sqr: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sqr;
        // left reflection: rows k+1..n
        for j in k..n {
            let mut w = Complex64::new(0.0, 0.0);
            for i in k + 1..n {
                w += v[i].conj() * h[(i, j)];
            }
            w *= beta;
            for i in k + 1..n {
                let adj = w * v[i];
                h[(i, j)] -= adj;
            }
        }
        // right reflection: columns k+1..n
        for i in 0..n {
            let mut w = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                w += h[(i, j)] * v[j];
            }
            w *= beta;
            for j in k + 1..n {
                let adj = w * v[j].conj();
                h[(i, j)] -= adj;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

/// Givens pair (c real, s complex) with G = [[c, s], [-s̄, c]] mapping
/// (a, b) to (r, 0).
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0), a);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn, Complex64::new(bn, 0.0));
    }
    let rho = an.hypot(bn);
    let c = an / rho;
    let s = (a / an) * b.conj() / rho;
    let r = (a / an) * rho;
    (c, s, r)
}

/// Eigenvalues of a complex 2×2 block.
fn eig_2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let mean = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b * c).sqrt();
    (mean + disc, mean - disc)
}

/// Wilkinson shift: the trailing-2×2 eigenvalue closer to its last entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let (e1, e2) = eig_2x2(a, b, c, d);
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// One explicit shifted QR sweep on the decoupled block `lo..hi`.
fn qr_step(h: &mut DenseMatrix, lo: usize, hi: usize, mu: Complex64) {
    let m = hi - lo;
    let mut cs = vec![0.0f64; m - 1];
    let mut sn = vec![Complex64::new(0.0, 0.0); m - 1];
    for i in lo..hi {
        h[(i, i)] -= mu;
    }
    // H - mu I = Q R: chase the subdiagonal from the top
    for k in lo..hi - 1 {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let (c, s, r) = givens(a, b);
        cs[k - lo] = c;
        sn[k - lo] = s;
        h[(k, k)] = r;
        h[(k + 1, k)] = Complex64::new(0.0, 0.0);
        for j in k + 1..hi {
            let t1 = h[(k, j)];
            let t2 = h[(k + 1, j)];
            h[(k, j)] = c * t1 + s * t2;
            h[(k + 1, j)] = -s.conj() * t1 + c * t2;
        }
    }
    // R Q: apply the conjugated rotations on the right
    for k in lo..hi - 1 {
        let c = cs[k - lo];
        let s = sn[k - lo];
        let top = (k + 2).min(hi);
        for i in lo..top {
            let t1 = h[(i, k)];
            let t2 = h[(i, k + 1)];
            h[(i, k)] = c * t1 + s.conj() * t2;
            h[(i, k + 1)] = -s * t1 + c * t2;
        }
    }
    for i in lo..hi {
        h[(i, i)] += mu;
    }
}

/// All eigenvalues of a square complex matrix, with multiplicity, in no
/// particular order.
pub fn eig_dense(a: &DenseMatrix) -> Result<Vec<Complex64>> {
    assert!(a.is_square(), "eigensolver needs a square matrix");
    if !a.is_finite() {
        return Err(Error::Validation(
            "eigensolver input contains non-finite entries".into(),
        ));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    // triangular input: the diagonal is the spectrum, exactly; QR on a
    // defective triangular matrix would smear multiple eigenvalues
    let lower_zero = (0..n).all(|i| (0..i).all(|j| a[(i, j)].norm() == 0.0));
    let upper_zero = (0..n).all(|i| (i + 1..n).all(|j| a[(i, j)].norm() == 0.0));
    if lower_zero || upper_zero {
        return Ok((0..n).map(|i| a[(i, i)]).collect());
    }
    let mut h = hessenberg(a.clone());
    let anorm = h.max_abs().max(f64::MIN_POSITIVE);
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n;
    let mut sweeps_at_block = 0usize;
    let mut total_sweeps = 0usize;
    let max_total = MAX_SWEEPS_PER_EIG * n;

    while hi > 0 {
        // split point: lowest lo with a negligible subdiagonal above it
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let local = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let thresh = f64::EPSILON * if local > 0.0 { local } else { anorm };
            if sub <= thresh {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eig[hi - 1] = h[(hi - 1, hi - 1)];
            hi -= 1;
            sweeps_at_block = 0;
            continue;
        }
        if lo == hi - 2 {
            let (e1, e2) = eig_2x2(
                h[(lo, lo)],
                h[(lo, lo + 1)],
                h[(lo + 1, lo)],
                h[(lo + 1, lo + 1)],
            );
            eig[lo] = e1;
            eig[lo + 1] = e2;
            hi -= 2;
            sweeps_at_block = 0;
            continue;
        }

        total_sweeps += 1;
        sweeps_at_block += 1;
        if total_sweeps > max_total {
            return Err(Error::EigenNonConvergence {
                iterations: total_sweeps,
            });
        }
        let mu = if sweeps_at_block.is_multiple_of(12) {
            // ad hoc shift breaks the rare cycling of the Wilkinson shift
            h[(hi - 1, hi - 1)] + Complex64::new(0.75 * h[(hi - 1, hi - 2)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 2, hi - 2)],
                h[(hi - 2, hi - 1)],
                h[(hi - 1, hi - 2)],
                h[(hi - 1, hi - 1)],
            )
        };
        qr_step(&mut h, lo, hi, mu);
    }
    Ok(eig)
}

/// Eigenvalues plus one unit eigenvector each, via inverse iteration on
/// the (slightly perturbed) shifted matrix.
pub fn eig_with_vectors(a: &DenseMatrix) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>)> {
    let eigs = eig_dense(a)?;
    let n = a.rows();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let mut vectors = Vec::with_capacity(n);
    for &lam in &eigs {
        let mut best_vec: Option<Vec<Complex64>> = None;
        let mut best_res = f64::INFINITY;
        let mut shift = lam;
        for attempt in 0..5 {
            let shifted =
                DenseMatrix::from_fn(
                    n,
                    n,
                    |i, j| {
                        if i == j {
                            a[(i, j)] - shift
                        } else {
                            a[(i, j)]
                        }
                    },
                );
            let factors = LuFactors::factor(&shifted);
            if !factors.is_singular() {
                let mut v = vec![Complex64::new(1.0, 0.0); n];
                normalize(&mut v);
                for _ in 0..3 {
                    match factors.solve(&v) {
                        Ok(mut w) => {
                            normalize(&mut w);
                            v = w;
                        }
                        Err(_) => break,
                    }
                }
                let res = residual_norm(a, lam, &v);
                if res < best_res {
                    best_res = res;
                    best_vec = Some(v);
                }
                if best_res <= 1e-12 * scale {
                    break;
                }
            }
            // nudge the shift off the exact eigenvalue and retry
            let bump = scale * 1e-13 * (attempt + 1) as f64;
            shift = lam + Complex64::new(bump, bump);
        }
        match best_vec {
            Some(v) => vectors.push(v),
            None => {
                return Err(Error::EigenNonConvergence { iterations: 5 });
            }
        }
    }
    Ok((eigs, vectors))
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}

fn residual_norm(a: &DenseMatrix, lam: Complex64, v: &[Complex64]) -> f64 {
    a.mat_vec(v)
        .iter()
        .zip(v)
        .map(|(av, vi)| (av - lam * vi).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
