//! Drude dispersion and polarization-tensor frequency sweeps.
//!
//! The metal layers take `ε(ω) = ε′(1 − ω_p²/(ω(ω + iτ)))`; the host
//! layers keep the background value. Folding the complex ε into the
//! alternating contrast gives `λ(ω) = (2ε₀ + ε(ω))/(ε₀ − ε(ω))`, and the
//! polarization tensor `M(ω) = r₁⁻³·Υ_N·(λ(ω)I − K_N^T)⁻¹` peaks where
//! λ(ω) passes close to the mode spectrum. The damping τ keeps λ off the
//! real axis, so the sweep never hits an exact singularity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eig_dense, k_matrix, DenseMatrix, LuFactors};
use crate::modes::ModeSet;
use crate::par;
use crate::structure::{Dimension, LayeredStructure};

/// Drude-model parameters. Units: `eps_inf` and `eps0` in F·m⁻¹,
/// `omega_p` and `tau` in s⁻¹. The contrast formulas are ratios, so only
/// relative permittivities matter downstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeParams {
    /// High-frequency permittivity ε′.
    pub eps_inf: f64,
    /// Plasma frequency ω_p.
    pub omega_p: f64,
    /// Damping rate τ (enters as +iτ next to ω).
    pub tau: f64,
    /// Background (host) permittivity ε₀.
    pub eps0: f64,
}

impl DrudeParams {
    pub fn new(eps_inf: f64, omega_p: f64, tau: f64, eps0: f64) -> Result<Self> {
        if !eps_inf.is_finite() || eps_inf <= 0.0 {
            return Err(Error::Validation(format!(
                "eps_inf = {eps_inf} must be positive"
            )));
        }
        if !omega_p.is_finite() || omega_p < 0.0 {
            return Err(Error::Validation(format!(
                "omega_p = {omega_p} must be non-negative"
            )));
        }
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::Validation(format!("tau = {tau} must be positive")));
        }
        if !eps0.is_finite() || eps0 <= 0.0 {
            return Err(Error::Validation(format!("eps0 = {eps0} must be positive")));
        }
        Ok(Self {
            eps_inf,
            omega_p,
            tau,
            eps0,
        })
    }
}

impl Default for DrudeParams {
    /// Noble-metal shells in water: τ = 10¹⁴ s⁻¹, ε′ = 9·10⁻¹² F·m⁻¹,
    /// ε₀ = 1.33²·ε′, ω_p = 2·10¹⁵ s⁻¹.
    fn default() -> Self {
        let eps_inf = 9e-12;
        Self {
            eps_inf,
            omega_p: 2e15,
            tau: 1e14,
            eps0: 1.33 * 1.33 * eps_inf,
        }
    }
}

/// Metal permittivity at angular frequency ω.
pub fn drude_eps(omega: f64, p: &DrudeParams) -> Result<Complex64> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Validation(format!(
            "angular frequency omega = {omega} must be positive"
        )));
    }
    let w = Complex64::new(omega, 0.0);
    let denom = w * (w + Complex64::new(0.0, p.tau));
    Ok(p.eps_inf * (Complex64::new(1.0, 0.0) - p.omega_p * p.omega_p / denom))
}

/// Alternating contrast at frequency ω: the complex ε(ω) folded directly
/// into `(2ε₀ + ε)/(ε₀ − ε)`.
pub fn lambda_of_omega(omega: f64, p: &DrudeParams) -> Result<Complex64> {
    let eps = drude_eps(omega, p)?;
    let eps0 = Complex64::new(p.eps0, 0.0);
    Ok((2.0 * eps0 + eps) / (eps0 - eps))
}

/// Polarization tensor `M = r₁⁻³·Υ_N·(λI − K_N^T)⁻¹`.
///
/// The `r₁⁻³` factor removes the overall geometric scale.
pub fn polarization_tensor(s: &LayeredStructure, lambda: Complex64) -> Result<DenseMatrix> {
    if s.dimension() != Dimension::Three {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: s.dimension().as_u8(),
        });
    }
    let n = s.layer_count();
    let k = k_matrix(s);
    let shifted = DenseMatrix::from_fn(n, n, |i, j| {
        let kt = k[(j, i)];
        if i == j {
            lambda - kt
        } else {
            -kt
        }
    });
    let factors = LuFactors::factor(&shifted);
    let mut inv = DenseMatrix::zeros(n, n);
    for col in 0..n {
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        rhs[col] = Complex64::new(1.0, 0.0);
        let x = factors
            .solve(&rhs)
            .map_err(|e| nearest_mode_error(s, lambda, e))?;
        for row in 0..n {
            inv[(row, col)] = x[row];
        }
    }
    let radii = s.radii();
    let scale = radii[0].powi(-3);
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        scale * radii[i].powi(3) * inv[(i, j)]
    }))
}

fn nearest_mode_error(s: &LayeredStructure, lambda: Complex64, err: Error) -> Error {
    if let Error::SingularSystem { .. } = err {
        if let Ok(eigs) = eig_dense(&k_matrix(s)) {
            let nearest = eigs.iter().map(|z| z.re).min_by(|a, b| {
                (lambda - a)
                    .norm()
                    .partial_cmp(&(lambda - b).norm())
                    .unwrap()
            });
            return Error::SingularSystem {
                nearest_mode: nearest,
            };
        }
    }
    err
}

/// Matrix norm used to reduce `M(ω)` to a scalar trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatrixNorm {
    /// √Σ|m_ij|²; cheap and smooth in ω.
    #[default]
    Frobenius,
    /// Largest singular value, via power iteration on `M^H M`.
    Spectral,
}

/// Largest singular value by power iteration on `M^H M`.
pub fn spectral_norm(m: &DenseMatrix) -> f64 {
    let n = m.cols();
    if n == 0 {
        return 0.0;
    }
    let mt = m.transpose();
    let mut v: Vec<Complex64> = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut sigma_sq = 0.0f64;
    for _ in 0..400 {
        // w = M^H (M v): conj-transpose action via transpose of conjugates
        let mv = m.mat_vec(&v);
        let mut w: Vec<Complex64> = mt
            .mat_vec(&mv.iter().map(|z| z.conj()).collect::<Vec<_>>())
            .iter()
            .map(|z| z.conj())
            .collect();
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        for z in w.iter_mut() {
            *z /= norm;
        }
        let prev = sigma_sq;
        sigma_sq = norm;
        v = w;
        if (sigma_sq - prev).abs() <= 1e-13 * sigma_sq {
            break;
        }
    }
    sigma_sq.sqrt()
}

/// One frequency sweep of the polarization-tensor norm.
#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Frequency grid, log-spaced, s⁻¹.
    pub omegas: Vec<f64>,
    /// Contrast λ(ω) per grid point.
    pub lambdas: Vec<Complex64>,
    /// ‖M(ω)‖ per grid point.
    pub norm_m: Vec<f64>,
    /// Indices of strict local maxima of `norm_m`.
    pub peaks: Vec<usize>,
}

/// Sweeps ‖M(ω)‖ over a log-spaced grid of `points` frequencies.
pub fn sweep(
    s: &LayeredStructure,
    p: &DrudeParams,
    omega_low: f64,
    omega_high: f64,
    points: usize,
    norm: MatrixNorm,
) -> Result<SweepResult> {
    if !(omega_low > 0.0 && omega_low < omega_high) {
        return Err(Error::Validation(format!(
            "sweep range [{omega_low}, {omega_high}] must satisfy 0 < low < high"
        )));
    }
    if points < 2 {
        return Err(Error::Validation(
            "sweep needs at least 2 grid points".into(),
        ));
    }
    let log_lo = omega_low.ln();
    let step = (omega_high.ln() - log_lo) / (points - 1) as f64;
    let omegas: Vec<f64> = (0..points)
        .map(|i| {
            if i == 0 {
                omega_low
            } else if i == points - 1 {
                omega_high
            } else {
                (log_lo + i as f64 * step).exp()
            }
        })
        .collect();
    let evaluations = par::map_indexed(points, |i| -> Result<(Complex64, f64)> {
        let lambda = lambda_of_omega(omegas[i], p)?;
        let m = polarization_tensor(s, lambda)?;
        let value = match norm {
            MatrixNorm::Frobenius => m.frobenius_norm(),
            MatrixNorm::Spectral => spectral_norm(&m),
        };
        Ok((lambda, value))
    });
    let mut lambdas = Vec::with_capacity(points);
    let mut norm_m = Vec::with_capacity(points);
    for ev in evaluations {
        let (lambda, value) = ev?;
        lambdas.push(lambda);
        norm_m.push(value);
    }
    let peaks = (1..points - 1)
        .filter(|&i| norm_m[i] > norm_m[i - 1] && norm_m[i] > norm_m[i + 1])
        .collect();
    Ok(SweepResult {
        omegas,
        lambdas,
        norm_m,
        peaks,
    })
}

/// A sweep peak matched to its nearest plasmon mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakMatch {
    /// Peak frequency.
    pub omega: f64,
    /// Re λ(ω) at the peak.
    pub re_lambda: f64,
    /// Nearest mode λ.
    pub mode_lambda: f64,
    /// |Re λ(ω) − λ_mode|.
    pub distance: f64,
}

/// Matches every sweep peak to the nearest mode of `ms`. Distances are
/// reported as measured; no threshold is applied here.
pub fn peak_match(sr: &SweepResult, ms: &ModeSet) -> Vec<PeakMatch> {
    let lambdas = ms.lambda_multiset();
    sr.peaks
        .iter()
        .filter_map(|&i| {
            let re = sr.lambdas[i].re;
            lambdas
                .iter()
                .min_by(|a, b| (re - **a).abs().partial_cmp(&(re - **b).abs()).unwrap())
                .map(|&mode| PeakMatch {
                    omega: sr.omegas[i],
                    re_lambda: re,
                    mode_lambda: mode,
                    distance: (re - mode).abs(),
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::solve_modes_3d;
    use crate::structure::{contrast_of_pair, make_structure, StructureSpec};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn dispersion_limits() {
        let p = DrudeParams::default();
        // omega -> infinity: eps -> eps_inf
        let eps = drude_eps(1e25, &p).unwrap();
        assert!((eps - Complex64::new(p.eps_inf, 0.0)).norm() < 1e-15 * p.eps_inf);
        // omega = omega_p with negligible damping: eps -> 0
        let lossless = DrudeParams::new(9e-12, 2e15, 1e-6, 1.5e-11).unwrap();
        let eps = drude_eps(2e15, &lossless).unwrap();
        assert!(eps.norm() < 1e-12 * lossless.eps_inf);
        // metallic regime at omega = 1e15 with the default constants
        let eps = drude_eps(1e15, &p).unwrap();
        assert!(eps.re < 0.0);
        assert!(eps.im > 0.0);
        assert!(drude_eps(0.0, &p).is_err());
        assert!(drude_eps(-1.0, &p).is_err());
    }

    #[test]
    fn lambda_formulas_agree() {
        let p = DrudeParams::default();
        for omega in [3e14, 7e14, 1.6e15] {
            let eps = drude_eps(omega, &p).unwrap();
            let via_contrast = contrast_of_pair(Complex64::new(p.eps0, 0.0), eps, Dimension::Three);
            let direct = lambda_of_omega(omega, &p).unwrap();
            assert!((via_contrast - direct).norm() < 1e-12 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn tensor_single_sphere() {
        // K_1 = [0], so M = r^{-3} * r^3 * (1/lambda) = 1 at lambda = 1
        let s = LayeredStructure::new(vec![2.5], Dimension::Three).unwrap();
        let m = polarization_tensor(&s, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(m.rows(), 1);
        assert!((m[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tensor_resolvent_decay() {
        let s =
            make_structure(&StructureSpec::Equidistant { layers: 5 }, Dimension::Three).unwrap();
        let n1 = polarization_tensor(&s, Complex64::new(0.0, 1e3))
            .unwrap()
            .frobenius_norm();
        let n2 = polarization_tensor(&s, Complex64::new(0.0, 2e3))
            .unwrap()
            .frobenius_norm();
        assert_close(n1 / n2, 2.0, 0.01);
    }

    #[test]
    fn tensor_pole_growth() {
        let s =
            make_structure(&StructureSpec::Equidistant { layers: 4 }, Dimension::Three).unwrap();
        let ms = solve_modes_3d(&s, 1.0).unwrap();
        let lam = ms.modes[1].lambda_plus;
        let n1 = polarization_tensor(&s, Complex64::new(lam, 1e-3))
            .unwrap()
            .frobenius_norm();
        let n2 = polarization_tensor(&s, Complex64::new(lam, 1e-4))
            .unwrap()
            .frobenius_norm();
        assert_close(n1 / n2, 0.1, 0.02);
    }

    #[test]
    fn sweep_flat_without_plasma() {
        let s =
            make_structure(&StructureSpec::Equidistant { layers: 3 }, Dimension::Three).unwrap();
        let p = DrudeParams::new(9e-12, 0.0, 1e14, 1.5931e-11).unwrap();
        let sr = sweep(&s, &p, 2e14, 2e15, 64, MatrixNorm::Frobenius).unwrap();
        let first = sr.norm_m[0];
        for v in &sr.norm_m {
            assert_close(*v, first, 1e-9 * first);
        }
        assert!(sr.peaks.is_empty());
        assert!(peak_match(&sr, &solve_modes_3d(&s, 1.0).unwrap()).is_empty());
    }

    #[test]
    fn sweep_peaks_match_modes() {
        let s =
            make_structure(&StructureSpec::Equidistant { layers: 17 }, Dimension::Three).unwrap();
        let p = DrudeParams::default();
        let sr = sweep(&s, &p, 2e14, 2e15, 2000, MatrixNorm::Frobenius).unwrap();
        let ms = solve_modes_3d(&s, 1.0).unwrap();
        let matches = peak_match(&sr, &ms);
        assert!(!matches.is_empty());
        // peak count never exceeds the mode-pair count plus the zero mode
        assert!(sr.peaks.len() <= s.layer_count() / 2 + 1);
        for m in &matches {
            assert!(
                m.distance < 0.05,
                "peak at {} missed modes by {}",
                m.omega,
                m.distance
            );
        }
        for v in &sr.norm_m {
            assert!(v.is_finite());
        }
    }

    #[test]
    fn damping_lowers_peaks() {
        let s =
            make_structure(&StructureSpec::Equidistant { layers: 9 }, Dimension::Three).unwrap();
        let base = DrudeParams::default();
        let damped =
            DrudeParams::new(base.eps_inf, base.omega_p, 10.0 * base.tau, base.eps0).unwrap();
        let sr1 = sweep(&s, &base, 2e14, 2e15, 800, MatrixNorm::Frobenius).unwrap();
        let sr2 = sweep(&s, &damped, 2e14, 2e15, 800, MatrixNorm::Frobenius).unwrap();
        // compare each original peak against the damped curve nearby
        for &i in &sr1.peaks {
            let lo = i.saturating_sub(20);
            let hi = (i + 20).min(sr2.norm_m.len() - 1);
            let damped_local = sr2.norm_m[lo..=hi].iter().cloned().fold(0.0, f64::max);
            assert!(
                damped_local < sr1.norm_m[i],
                "damping should lower the peak at index {i}"
            );
        }
    }

    #[test]
    fn frobenius_consistent_with_singular_values() {
        let s =
            make_structure(&StructureSpec::Equidistant { layers: 6 }, Dimension::Three).unwrap();
        let p = DrudeParams::default();
        let sr = sweep(&s, &p, 2e14, 2e15, 5, MatrixNorm::Frobenius).unwrap();
        for (i, &omega) in sr.omegas.iter().enumerate() {
            let lambda = lambda_of_omega(omega, &p).unwrap();
            let m = polarization_tensor(&s, lambda).unwrap();
            // singular values squared = eigenvalues of M^H M
            let n = m.rows();
            let mh_m = DenseMatrix::from_fn(n, n, |r, c| {
                (0..n).map(|k| m[(k, r)].conj() * m[(k, c)]).sum()
            });
            let sv_sq_sum: f64 = eig_dense(&mh_m).unwrap().iter().map(|z| z.re).sum();
            let fro_sq = sr.norm_m[i] * sr.norm_m[i];
            assert!((sv_sq_sum - fro_sq).abs() <= 1e-8 * fro_sq.max(1.0));
            // the spectral norm is dominated by Frobenius
            let spec = spectral_norm(&m);
            assert!(spec <= sr.norm_m[i] * (1.0 + 1e-9));
        }
    }

    #[test]
    fn single_sphere_sweep_crosses_frohlich() {
        let s = LayeredStructure::new(vec![1.0], Dimension::Three).unwrap();
        let p = DrudeParams::default();
        let sr = sweep(&s, &p, 2e14, 2e15, 1200, MatrixNorm::Frobenius).unwrap();
        let ms = solve_modes_3d(&s, 1.0).unwrap();
        let matches = peak_match(&sr, &ms);
        assert_eq!(matches.len(), 1);
        assert!(matches[0].re_lambda.abs() < 0.05);
        assert_eq!(matches[0].mode_lambda, 0.0);
    }
}
