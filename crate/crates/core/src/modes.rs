//! Plasmon mode sets: real roots of the characteristic polynomial, the
//! λ-pairs they generate, recovered permittivities, 2D spectra, and
//! low-|f| band scans.

use num_complex::Complex64;

use crate::charpoly::{
    eval_fq, eval_fq_complex, eval_fq_derivative, eval_fq_derivative_complex, fq_dp, CharPoly,
};
use crate::error::{Error, Result};
use crate::linalg::{eig_dense, lu_det, p_matrix_2d, DenseMatrix};
use crate::par;
use crate::structure::{
    alternating_contrasts, epsilon_from_lambda, ratio_table, Dimension, LayeredStructure,
};

/// Slack allowed past the exact root bounds before a value is treated as
/// a theorem violation.
const BOUND_SLACK: f64 = 1e-9;
/// Roots closer than this are merged and reported with multiplicity.
const MERGE_TOL: f64 = 1e-10;
/// Imaginary parts above this (absolute, the q scale is O(1)) indicate a
/// broken computation rather than roundoff.
const IMAG_TOL: f64 = 1e-6;

/// One quadratic mode: a root `q*` of `f_N` and everything it generates.
#[derive(Debug, Clone, PartialEq)]
pub struct PlasmonMode {
    /// Root of the characteristic polynomial, in `[-1/4, 2]`.
    pub q_star: f64,
    /// `λ₊ = (1 + √(1+4q*))/2`, in `[1/2, 2]`.
    pub lambda_plus: f64,
    /// `λ₋ = 1 − λ₊`, in `[-1, 1/2]`.
    pub lambda_minus: f64,
    /// Odd-layer permittivity realizing λ₊ at δ = 0 (ratio to ε₀ = 1).
    pub eps_plus: f64,
    /// Permittivity realizing λ₋; `-∞` when λ₋ sits on the pole −1.
    pub eps_minus: f64,
    /// λ₋ hit the spectrum endpoint −1 exactly, where the permittivity
    /// is unbounded.
    pub minus_at_pole: bool,
    /// `|f_N(q*)|` after Newton refinement.
    pub residual: f64,
}

/// All plasmon modes of one structure.
#[derive(Debug, Clone)]
pub struct ModeSet {
    /// Quadratic modes, sorted by `q*` descending; exactly ⌊N/2⌋ of them.
    pub modes: Vec<PlasmonMode>,
    /// Whether the λ = 0 factor is present (odd layer count).
    pub has_zero_mode: bool,
    /// Permittivity of the zero mode (−2ε₀), when present.
    pub zero_mode_eps: Option<f64>,
    /// Background permittivity the ε columns are scaled by.
    pub eps0: f64,
    /// Geometry the modes belong to.
    pub structure: LayeredStructure,
}

impl ModeSet {
    pub fn layer_count(&self) -> usize {
        self.structure.layer_count()
    }

    /// The full λ multiset: every (λ₊, λ₋) pair plus the zero mode when
    /// present — N values total, ascending.
    pub fn lambda_multiset(&self) -> Vec<f64> {
        let mut lambdas = Vec::with_capacity(self.layer_count());
        if self.has_zero_mode {
            lambdas.push(0.0);
        }
        for m in &self.modes {
            lambdas.push(m.lambda_plus);
            lambdas.push(m.lambda_minus);
        }
        lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        lambdas
    }
}

/// An interval where `|f_N|` stays below a scan threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub q_low: f64,
    pub q_high: f64,
    /// Measured maximum of |f| over the interval's grid points.
    pub max_abs_f: f64,
}

/// Companion matrix of the monic q-polynomial.
fn companion(cp: &CharPoly) -> DenseMatrix {
    let qc = cp.q_coefficients(); // descending powers, qc[0] = 1
    let l = cp.degree();
    DenseMatrix::from_fn(l, l, |i, j| {
        let v = if j == l - 1 {
            -qc[l - i] // coefficient of q^i
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        };
        Complex64::new(v, 0.0)
    })
}

/// All real roots of `f_N(q)`, descending, with multiplicity.
///
/// Companion-matrix eigenvalues seed a Newton refinement on the
/// doubled-precision evaluation. Exact arithmetic guarantees real roots
/// in `[-1/4, 2]`; numerically, roots clustered more tightly than the
/// f64 coefficient resolution surface as conjugate pairs with imaginary
/// dust. Those clusters are collapsed to their (well-conditioned) mean
/// and reported with multiplicity — but only when the polynomial is
/// numerically zero there; otherwise a genuinely complex root means the
/// implementation is broken and a diagnostic is raised.
pub fn find_q_roots(cp: &CharPoly) -> Result<Vec<f64>> {
    let l = cp.degree();
    if l == 0 {
        return Err(Error::Validation(
            "characteristic polynomial has degree 0: no quadratic modes to solve".into(),
        ));
    }
    let estimates = eig_dense(&companion(cp))?;
    let scale = cp.coefficient_scale().max(1.0);
    let mut refined: Vec<(f64, f64)> = Vec::with_capacity(l); // (re, |im| dust)
    for z in estimates {
        // complex Newton: pulls resolvable estimates onto the real axis
        let mut q = z;
        for _ in 0..60 {
            let f = eval_fq_complex(cp, q);
            let fp = eval_fq_derivative_complex(cp, q);
            if fp.norm() == 0.0 {
                break;
            }
            let mut step = f / fp;
            let cap = 0.25 * q.norm().max(1.0);
            if step.norm() > cap {
                step *= cap / step.norm();
            }
            q -= step;
            if step.norm() < 1e-14 * q.norm().max(1.0) {
                break;
            }
        }
        if q.im.abs() <= IMAG_TOL {
            // clean real root: polish with the compensated evaluator
            let mut qr = q.re;
            for _ in 0..60 {
                let f = eval_fq(cp, qr);
                let fp = eval_fq_derivative(cp, qr);
                if fp == 0.0 {
                    break;
                }
                let step = f / fp;
                qr -= step;
                if step.abs() < 1e-14 * qr.abs().max(1.0) {
                    break;
                }
            }
            refined.push((qr, 0.0));
        } else {
            // sub-resolution cluster member, or a bug: only a vanishing
            // residual at the real part distinguishes the two
            if eval_fq(cp, q.re).abs() > 1e-8 * scale {
                return Err(Error::TheoremViolation(format!(
                    "complex root {q} of the characteristic polynomial (roots must be real)"
                )));
            }
            refined.push((q.re, q.im.abs()));
        }
    }
    refined.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    // merge clusters: near-coincident roots, or members whose measured
    // imaginary dust says they cannot be told apart
    let mut roots = Vec::with_capacity(l);
    let mut i = 0;
    while i < refined.len() {
        let mut j = i + 1;
        while j < refined.len() {
            let gap = refined[j - 1].0 - refined[j].0;
            let tol = MERGE_TOL.max(4.0 * refined[j - 1].1.max(refined[j].1));
            if gap.abs() <= tol {
                j += 1;
            } else {
                break;
            }
        }
        let mean = refined[i..j].iter().map(|r| r.0).sum::<f64>() / (j - i) as f64;
        for _ in i..j {
            roots.push(mean);
        }
        i = j;
    }
    for &q in &roots {
        if !(-0.25 - BOUND_SLACK..=2.0 + BOUND_SLACK).contains(&q) {
            return Err(Error::TheoremViolation(format!(
                "root q = {q} escapes [-1/4, 2]"
            )));
        }
        if eval_fq(cp, q).abs() > 1e-8 * scale {
            return Err(Error::TheoremViolation(format!(
                "reported root q = {q} has residual above the noise floor"
            )));
        }
    }
    Ok(roots)
}

fn mode_from_root(cp: &CharPoly, q: f64, eps0: f64) -> PlasmonMode {
    let disc = (1.0 + 4.0 * q).max(0.0);
    let lambda_plus = 0.5 * (1.0 + disc.sqrt());
    // exact by Sterbenz: lambda_plus lies in [1/2, 2]
    let lambda_minus = 1.0 - lambda_plus;
    let eps_plus = eps0 * (lambda_plus - 2.0) / (lambda_plus + 1.0);
    let (eps_minus, minus_at_pole) = if lambda_minus == -1.0 {
        (f64::NEG_INFINITY, true)
    } else {
        (eps0 * (lambda_minus - 2.0) / (lambda_minus + 1.0), false)
    };
    PlasmonMode {
        q_star: q,
        lambda_plus,
        lambda_minus,
        eps_plus,
        eps_minus,
        minus_at_pole,
        residual: eval_fq(cp, q).abs(),
    }
}

/// Every plasmon mode of a 3D structure with background permittivity
/// `eps0`.
pub fn solve_modes_3d(s: &LayeredStructure, eps0: f64) -> Result<ModeSet> {
    if s.dimension() != Dimension::Three {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: s.dimension().as_u8(),
        });
    }
    if !eps0.is_finite() || eps0 <= 0.0 {
        return Err(Error::Validation(format!(
            "background permittivity eps0 = {eps0} must be positive"
        )));
    }
    let table = ratio_table(s, 3);
    let cp = fq_dp(&table);
    let modes = if cp.degree() >= 1 {
        find_q_roots(&cp)?
            .into_iter()
            .map(|q| mode_from_root(&cp, q, eps0))
            .collect()
    } else {
        Vec::new()
    };
    let has_zero_mode = s.layer_count() % 2 == 1;
    Ok(ModeSet {
        modes,
        has_zero_mode,
        zero_mode_eps: has_zero_mode
            .then(|| epsilon_from_lambda(0.0, eps0, Dimension::Three).expect("0 is not the pole")),
        eps0,
        structure: s.clone(),
    })
}

/// All 2D mode contrasts λ̃ at angular order n: the spectrum of `−S·C`,
/// real and inside `[-1, 1]`, ascending, N values.
pub fn solve_modes_2d(s: &LayeredStructure, order: u32) -> Result<Vec<f64>> {
    if s.dimension() != Dimension::Two {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: s.dimension().as_u8(),
        });
    }
    if order < 1 {
        return Err(Error::Validation(
            "angular order n must be at least 1".into(),
        ));
    }
    let n = s.layer_count();
    let zero_contrasts = vec![Complex64::new(0.0, 0.0); n];
    let c = p_matrix_2d(s, &zero_contrasts, order);
    // -S·C flips the sign of every odd row (0-based even index keeps sign)
    let minus_sc = DenseMatrix::from_fn(n, n, |i, j| {
        let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
        sign * c[(i, j)]
    });
    let scale = c.max_abs().max(f64::MIN_POSITIVE);
    let mut lambdas = Vec::with_capacity(n);
    for z in eig_dense(&minus_sc)? {
        if z.im.abs() > 1e-7 * scale {
            return Err(Error::TheoremViolation(format!(
                "complex 2D mode {z} (spectrum must be real)"
            )));
        }
        if !(-1.0 - BOUND_SLACK..=1.0 + BOUND_SLACK).contains(&z.re) {
            return Err(Error::TheoremViolation(format!(
                "2D mode {} escapes [-1, 1]",
                z.re
            )));
        }
        lambdas.push(z.re);
    }
    // each mode must actually sit on the determinant's zero set
    for &lt in &lambdas {
        let cv = alternating_contrasts(Complex64::new(lt, 0.0), n, Dimension::Two);
        let p = p_matrix_2d(s, cv.values(), order);
        let det = lu_det(&p).norm();
        let hadamard: f64 = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| p[(i, j)].norm_sqr())
                    .sum::<f64>()
                    .sqrt()
                    .max(1.0)
            })
            .product();
        if det > 1e-8 * hadamard {
            return Err(Error::TheoremViolation(format!(
                "2D mode {lt} leaves determinant residual {det}"
            )));
        }
    }
    lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(lambdas)
}

/// Scans `|f_N|` on a fixed grid and returns the maximal sub-intervals
/// staying at or below `threshold`.
///
/// Sub-intervals narrower than one grid step (single-point hits) are
/// below scan resolution and are not reported.
pub fn band_scan(
    cp: &CharPoly,
    q_low: f64,
    q_high: f64,
    threshold: f64,
    grid_step: f64,
) -> Vec<Band> {
    assert!(q_low < q_high, "band scan needs q_low < q_high");
    assert!(grid_step > 0.0, "band scan needs a positive grid step");
    let steps = ((q_high - q_low) / grid_step).ceil() as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| (q_low + i as f64 * grid_step).min(q_high))
        .collect();
    let values = par::map_indexed(grid.len(), |i| eval_fq(cp, grid[i]).abs());
    let mut bands = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..=grid.len() {
        let inside = i < grid.len() && values[i] <= threshold;
        match (inside, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if i - s >= 2 {
                    let max_abs_f = values[s..i].iter().cloned().fold(0.0, f64::max);
                    bands.push(Band {
                        q_low: grid[s],
                        q_high: grid[i - 1],
                        max_abs_f,
                    });
                }
                start = None;
            }
            _ => {}
        }
    }
    bands
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::extreme_coeffs;
    use crate::linalg::k_matrix;
    use crate::structure::{make_structure, StructureSpec};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn equidistant(n: usize) -> LayeredStructure {
        make_structure(&StructureSpec::Equidistant { layers: n }, Dimension::Three).unwrap()
    }

    fn geometric(n: usize) -> LayeredStructure {
        make_structure(
            &StructureSpec::Geometric {
                layers: n,
                r1: 1.0,
                ratio: 0.8,
            },
            Dimension::Three,
        )
        .unwrap()
    }

    #[test]
    fn two_layer_root_is_two_t() {
        let s = LayeredStructure::new(vec![2.0, 1.0], Dimension::Three).unwrap();
        let cp = fq_dp(&ratio_table(&s, 3));
        let roots = find_q_roots(&cp).unwrap();
        assert_eq!(roots.len(), 1);
        assert_close(roots[0], 0.25, 1e-14);
    }

    #[test]
    fn nineteen_equidistant_matches_table() {
        let cp = fq_dp(&ratio_table(&equidistant(19), 3));
        let roots = find_q_roots(&cp).unwrap();
        let expect = [
            1.9794, 1.9664, 1.9457, 1.9112, 1.8490, 1.7294, 1.4863, 1.0066, 0.3299,
        ];
        assert_eq!(roots.len(), expect.len());
        for (r, e) in roots.iter().zip(expect) {
            assert_close(*r, e, 5e-4);
        }
    }

    #[test]
    fn nineteen_geometric_extremal_roots() {
        let cp = fq_dp(&ratio_table(&geometric(19), 3));
        let roots = find_q_roots(&cp).unwrap();
        assert_close(roots[0], 1.7867, 5e-4);
        assert_close(roots[8], 0.2982, 5e-4);
    }

    #[test]
    fn paper_structures_have_positive_roots() {
        for s in [
            equidistant(19),
            geometric(19),
            equidistant(11),
            equidistant(16),
        ] {
            let cp = fq_dp(&ratio_table(&s, 3));
            for q in find_q_roots(&cp).unwrap() {
                assert!(q > 0.0, "root {q} in a layered stack should be positive");
            }
        }
    }

    #[test]
    fn single_sphere_mode_set() {
        let s = LayeredStructure::new(vec![1.0], Dimension::Three).unwrap();
        let ms = solve_modes_3d(&s, 1.0).unwrap();
        assert!(ms.modes.is_empty());
        assert!(ms.has_zero_mode);
        assert_close(ms.zero_mode_eps.unwrap(), -2.0, 0.0);
        assert_eq!(ms.lambda_multiset(), vec![0.0]);
    }

    #[test]
    fn table_one_last_mode_epsilons() {
        let ms = solve_modes_3d(&equidistant(19), 1.0).unwrap();
        let m = ms.modes.last().unwrap();
        assert_close(m.q_star, 0.3299, 5e-4);
        assert_close(m.lambda_plus, 1.2615, 5e-4);
        assert_close(m.lambda_minus, -0.2615, 5e-4);
        assert_close(m.eps_plus, -0.3265, 5e-4);
        assert_close(m.eps_minus, -3.0625, 5e-4);
    }

    #[test]
    fn table_two_first_mode_epsilons() {
        let ms = solve_modes_3d(&geometric(19), 1.0).unwrap();
        let m = &ms.modes[0];
        assert_close(m.q_star, 1.7867, 5e-4);
        assert_close(m.lambda_plus, 1.9271, 5e-4);
        assert_close(m.lambda_minus, -0.9271, 5e-4);
        assert_close(m.eps_plus, -0.0249, 5e-4);
        assert!((m.eps_minus - -40.1605).abs() / 40.1605 < 1e-3);
    }

    #[test]
    fn pair_sum_is_exactly_one() {
        for s in [equidistant(19), geometric(12), equidistant(7)] {
            let ms = solve_modes_3d(&s, 1.0).unwrap();
            assert_eq!(ms.modes.len(), s.layer_count() / 2);
            for m in &ms.modes {
                assert_eq!(m.lambda_plus + m.lambda_minus, 1.0);
            }
            assert_eq!(ms.lambda_multiset().len(), s.layer_count());
        }
    }

    #[test]
    fn spectral_equivalence_small_cases() {
        for n in 1..=9usize {
            let mut radii: Vec<f64> = Vec::new();
            let mut acc = 0.3;
            for k in 0..n {
                acc += 0.4 + 0.13 * ((k * 7 + n) % 5) as f64;
                radii.push(acc);
            }
            radii.reverse();
            let s = LayeredStructure::new(radii, Dimension::Three).unwrap();
            let ms = solve_modes_3d(&s, 1.0).unwrap();
            let mut eigs: Vec<f64> = eig_dense(&k_matrix(&s))
                .unwrap()
                .iter()
                .map(|z| z.re)
                .collect();
            eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let lambdas = ms.lambda_multiset();
            for (e, l) in eigs.iter().zip(&lambdas) {
                assert_close(*e, *l, 1e-6);
            }
        }
    }

    #[test]
    fn extreme_limit_modes_for_odd_n() {
        // (q-2)^2 has the double root 2, so modes are {2, -1} plus zero
        let cp = extreme_coeffs(5);
        let roots = find_q_roots(&cp).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_close(*r, 2.0, 1e-6);
        }
        let m = mode_from_root(&cp, roots[0], 1.0);
        assert_close(m.lambda_plus, 2.0, 1e-7);
        assert_close(m.lambda_minus, -1.0, 1e-7);
    }

    #[test]
    fn q_exactly_two_reports_pole() {
        let cp = extreme_coeffs(2); // f = q - 2 exactly
        let roots = find_q_roots(&cp).unwrap();
        assert_eq!(roots, vec![2.0]);
        let m = mode_from_root(&cp, 2.0, 1.0);
        assert!(m.minus_at_pole);
        assert!(m.eps_minus.is_infinite() && m.eps_minus < 0.0);
        assert_close(m.eps_plus, 0.0, 1e-15);
    }

    #[test]
    fn modes_2d_smallest_cases() {
        let s = LayeredStructure::new(vec![1.0], Dimension::Two).unwrap();
        assert_eq!(solve_modes_2d(&s, 1).unwrap(), vec![0.0]);

        // N=2, radii (1, 0.8), n=1: det = -lt^2 + 0.64, roots ±0.8
        let s = LayeredStructure::new(vec![1.0, 0.8], Dimension::Two).unwrap();
        let roots = solve_modes_2d(&s, 1).unwrap();
        assert_eq!(roots.len(), 2);
        assert_close(roots[0], -0.8, 1e-12);
        assert_close(roots[1], 0.8, 1e-12);
    }

    #[test]
    fn modes_2d_real_and_bounded() {
        let s = LayeredStructure::new(vec![3.1, 2.4, 1.9, 0.7], Dimension::Two).unwrap();
        for order in [1, 2, 5] {
            let roots = solve_modes_2d(&s, order).unwrap();
            assert_eq!(roots.len(), 4);
            for r in roots {
                assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&r));
            }
        }
    }

    #[test]
    fn band_scan_paper_windows() {
        let cp = fq_dp(&ratio_table(&equidistant(19), 3));
        let bands = band_scan(&cp, 1.48, 2.0, 1e-4, 1e-4);
        assert_eq!(bands.len(), 1);
        assert!(bands[0].q_low <= 1.4801 && bands[0].q_high >= 1.9999);
        assert!(bands[0].max_abs_f <= 1e-4);

        let cp = fq_dp(&ratio_table(&geometric(19), 3));
        let bands = band_scan(&cp, 1.22, 1.79, 1e-4, 1e-4);
        assert_eq!(bands.len(), 1);
    }

    #[test]
    fn band_scan_zero_threshold_is_empty() {
        let s = LayeredStructure::new(vec![2.0, 1.0], Dimension::Three).unwrap();
        let cp = fq_dp(&ratio_table(&s, 3));
        assert!(band_scan(&cp, 0.0, 1.0, 0.0, 1e-3).is_empty());
    }

    #[test]
    fn residuals_are_tiny() {
        for s in [equidistant(19), geometric(19)] {
            let ms = solve_modes_3d(&s, 1.0).unwrap();
            let cp = fq_dp(&ratio_table(&s, 3));
            for m in &ms.modes {
                assert!(m.residual <= 1e-8 * cp.coefficient_scale().max(1.0));
            }
        }
    }
}
