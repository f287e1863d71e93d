//! Potential reconstruction from the transmission system.
//!
//! 3D path: a uniform background `H = a0·x₁` scatters into per-layer
//! potentials `u = a_j·x₁ + b_j·x₁/|x|³`. Writing `y = (P_N^T)^{-1}·a0·e`
//! for the coefficient jumps, the growing coefficients are cumulative
//! sums of `y` over `a0` and the decaying ones suffix sums of `r_j³·y_j`;
//! the far-field amplitude is the first decaying coefficient `b_0`.
//!
//! 2D path at angular order n: same bookkeeping with `r^{2n}` weights,
//! except the system solves untransposed: `P̃·y = ã0·e` (the 2D matrix is
//! written with the opposite triangle convention, which absorbs the
//! transpose).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    e_tilde_vector, e_vector, k_matrix, lu_det, p_matrix_2d, p_matrix_3d, DenseMatrix, LuFactors,
};
use crate::modes::solve_modes_3d;
use crate::structure::{contrast_of_pair, Dimension, LayeredStructure, MaterialProfile};

/// Per-layer potential coefficients of one scattering solve.
#[derive(Debug, Clone)]
pub struct FieldCoefficients {
    /// Growing-solution coefficients `a_1 … a_N`.
    pub a: Vec<Complex64>,
    /// Decaying-solution coefficients `b_0 … b_{N-1}`; the core has none
    /// (regularity at the origin).
    pub b: Vec<Complex64>,
    /// Background amplitude.
    pub a0: f64,
    pub dimension: Dimension,
    /// Angular order n (2D only).
    pub order: Option<u32>,
}

impl FieldCoefficients {
    /// Far-field amplitude `b_0 / a0`.
    pub fn amplitude(&self) -> Complex64 {
        self.b[0] / self.a0
    }

    /// Coefficient pair of layer `l` (0 = background, N = core).
    fn layer_pair(&self, l: usize) -> (Complex64, Complex64) {
        let n = self.a.len();
        let a = if l == 0 {
            Complex64::new(self.a0, 0.0)
        } else {
            self.a[l - 1]
        };
        let b = if l < n {
            self.b[l]
        } else {
            Complex64::new(0.0, 0.0)
        };
        (a, b)
    }
}

/// Which amplitude formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeVariant {
    /// `e^T Υ_N (P_N^T)^{-1} e` (3D) or `e^T Υ̃ (P̃)^{-1} e` (2D).
    General,
    /// `e^T Υ_N (λI − K_N^T)^{-1} ẽ`; 3D alternating profiles only.
    Alternating,
}

/// Interfaces that actually separate different materials. Adjacent layers
/// with identical permittivity are merged before assembly, since their
/// contrast has a pole and their interface carries no physics.
fn effective_interfaces(profile: &MaterialProfile) -> Vec<usize> {
    let mut kept = Vec::new();
    let mut outer = Complex64::new(profile.eps0(), 0.0);
    for (idx, &inner) in profile.eps().iter().enumerate() {
        if inner != outer {
            kept.push(idx);
            outer = inner;
        }
    }
    kept
}

struct ReducedSystem {
    structure: LayeredStructure,
    contrasts: Vec<Complex64>,
    /// For each original layer 0..=N, the reduced region index 0..=Nr.
    region_of_layer: Vec<usize>,
}

fn reduce(
    s: &LayeredStructure,
    profile: &MaterialProfile,
    dimension: Dimension,
) -> Result<Option<ReducedSystem>> {
    if profile.layer_count() != s.layer_count() {
        return Err(Error::Validation(format!(
            "material profile has {} layers for a {}-layer structure",
            profile.layer_count(),
            s.layer_count()
        )));
    }
    let kept = effective_interfaces(profile);
    if kept.is_empty() {
        return Ok(None);
    }
    let radii: Vec<f64> = kept.iter().map(|&j| s.radii()[j]).collect();
    let structure = LayeredStructure::new(radii, dimension)?;
    let mut contrasts = Vec::with_capacity(kept.len());
    let mut outer = Complex64::new(profile.eps0(), 0.0);
    for &j in &kept {
        let inner = profile.eps()[j];
        contrasts.push(contrast_of_pair(outer, inner, dimension));
        outer = inner;
    }
    let n = s.layer_count();
    let mut region_of_layer = Vec::with_capacity(n + 1);
    for l in 0..=n {
        region_of_layer.push(kept.iter().filter(|&&j| j < l).count());
    }
    Ok(Some(ReducedSystem {
        structure,
        contrasts,
        region_of_layer,
    }))
}

/// Attaches the nearest plasmon mode to a singular-system error so the
/// caller can see which resonance was hit.
fn enrich_singular(s: &LayeredStructure, lambda: Option<Complex64>, err: Error) -> Error {
    if let (Error::SingularSystem { .. }, Some(lam)) = (&err, lambda) {
        let probe = LayeredStructure::new(s.radii().to_vec(), Dimension::Three)
            .and_then(|s3| solve_modes_3d(&s3, 1.0));
        if let Ok(ms) = probe {
            let nearest = ms.lambda_multiset().into_iter().min_by(|a, b| {
                let da = (lam - a).norm();
                let db = (lam - b).norm();
                da.partial_cmp(&db).unwrap()
            });
            return Error::SingularSystem {
                nearest_mode: nearest,
            };
        }
    }
    err
}

fn solve_reduced_3d(red: &ReducedSystem, a0: f64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let nr = red.structure.layer_count();
    let p = p_matrix_3d(&red.structure, &red.contrasts);
    let rhs: Vec<Complex64> = vec![Complex64::new(a0, 0.0); nr];
    let y = LuFactors::factor(&p.transpose()).solve(&rhs).map_err(|e| {
        let lam =
            crate::structure::ContrastVector::from_values(red.contrasts.clone(), Dimension::Three)
                .alternating_lambda();
        enrich_singular(&red.structure, lam, e)
    })?;
    // a_red[i], i = 0..=Nr, with a_red[0] = a0
    let mut a_red = Vec::with_capacity(nr + 1);
    a_red.push(Complex64::new(a0, 0.0));
    for i in 0..nr {
        let prev = a_red[i];
        a_red.push(prev + y[i]);
    }
    // b_red[i] = sum over l > i of r_l^3 y_l; b_red[Nr] = 0
    let radii = red.structure.radii();
    let mut b_red = vec![Complex64::new(0.0, 0.0); nr + 1];
    for i in (0..nr).rev() {
        b_red[i] = b_red[i + 1] + radii[i].powi(3) * y[i];
    }
    Ok((a_red, b_red))
}

fn solve_reduced_2d(
    red: &ReducedSystem,
    order: u32,
    a0: f64,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let nr = red.structure.layer_count();
    let p = p_matrix_2d(&red.structure, &red.contrasts, order);
    let rhs: Vec<Complex64> = vec![Complex64::new(a0, 0.0); nr];
    let y = LuFactors::factor(&p).solve(&rhs)?;
    let mut a_red = Vec::with_capacity(nr + 1);
    a_red.push(Complex64::new(a0, 0.0));
    for i in 0..nr {
        let prev = a_red[i];
        a_red.push(prev + y[i]);
    }
    let radii = red.structure.radii();
    let mut b_red = vec![Complex64::new(0.0, 0.0); nr + 1];
    for i in (0..nr).rev() {
        b_red[i] = b_red[i + 1] + radii[i].powi(2 * order as i32) * y[i];
    }
    Ok((a_red, b_red))
}

fn expand(
    red: &ReducedSystem,
    a_red: &[Complex64],
    b_red: &[Complex64],
    n: usize,
    a0: f64,
    dimension: Dimension,
    order: Option<u32>,
) -> FieldCoefficients {
    let a = (1..=n).map(|l| a_red[red.region_of_layer[l]]).collect();
    let b = (0..n).map(|l| b_red[red.region_of_layer[l]]).collect();
    FieldCoefficients {
        a,
        b,
        a0,
        dimension,
        order,
    }
}

fn no_scatterer(n: usize, a0: f64, dimension: Dimension, order: Option<u32>) -> FieldCoefficients {
    FieldCoefficients {
        a: vec![Complex64::new(a0, 0.0); n],
        b: vec![Complex64::new(0.0, 0.0); n],
        a0,
        dimension,
        order,
    }
}

/// Solves the 3D transmission system for a uniform background of
/// amplitude `a0`.
pub fn field_coeffs(
    s: &LayeredStructure,
    profile: &MaterialProfile,
    a0: f64,
) -> Result<FieldCoefficients> {
    if s.dimension() != Dimension::Three {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: s.dimension().as_u8(),
        });
    }
    let n = s.layer_count();
    match reduce(s, profile, Dimension::Three)? {
        None => Ok(no_scatterer(n, a0, Dimension::Three, None)),
        Some(red) => {
            let (a_red, b_red) = solve_reduced_3d(&red, a0)?;
            Ok(expand(&red, &a_red, &b_red, n, a0, Dimension::Three, None))
        }
    }
}

/// Solves the 2D transmission system at angular order `order`.
pub fn field_coeffs_2d(
    s: &LayeredStructure,
    profile: &MaterialProfile,
    order: u32,
    a0: f64,
) -> Result<FieldCoefficients> {
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
    match reduce(s, profile, Dimension::Two)? {
        None => Ok(no_scatterer(n, a0, Dimension::Two, Some(order))),
        Some(red) => {
            let (a_red, b_red) = solve_reduced_2d(&red, order, a0)?;
            Ok(expand(
                &red,
                &a_red,
                &b_red,
                n,
                a0,
                Dimension::Two,
                Some(order),
            ))
        }
    }
}

/// Evaluates the 3D potential at a point.
pub fn eval_potential(
    fc: &FieldCoefficients,
    s: &LayeredStructure,
    point: [f64; 3],
) -> Result<Complex64> {
    if fc.dimension != Dimension::Three {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: fc.dimension.as_u8(),
        });
    }
    let n = s.layer_count();
    if fc.a.len() != n {
        return Err(Error::Validation(format!(
            "coefficients were computed for {} layers, structure has {n}",
            fc.a.len()
        )));
    }
    let r = (point[0] * point[0] + point[1] * point[1] + point[2] * point[2]).sqrt();
    let x1 = point[0];
    let layer = s.layer_of(r);
    let (a, b) = fc.layer_pair(layer);
    if layer == n {
        // the core carries no decaying term, so the origin is regular
        return Ok(a * x1);
    }
    if r == 0.0 {
        // only the core reaches the origin; a decaying term here means
        // the structure and coefficients disagree
        return Err(Error::Validation(
            "potential at the origin is defined only in the core layer".into(),
        ));
    }
    Ok(a * x1 + b * x1 / (r * r * r))
}

/// Largest relative jump of the transmission conditions over all
/// interfaces: continuity of the potential and of the normal flux
/// `ε ∂_r u`, both evaluated symbolically from the coefficients.
pub fn transmission_residual(
    fc: &FieldCoefficients,
    s: &LayeredStructure,
    profile: &MaterialProfile,
) -> f64 {
    let n = s.layer_count();
    assert_eq!(fc.a.len(), n, "coefficient/structure layer mismatch");
    assert_eq!(profile.layer_count(), n, "profile/structure layer mismatch");
    let radii = s.radii();
    let eps0 = Complex64::new(profile.eps0(), 0.0);
    let eps_of_layer = |l: usize| if l == 0 { eps0 } else { profile.eps()[l - 1] };
    let mut worst: f64 = 0.0;
    let mut track = |lhs: Complex64, rhs: Complex64| {
        let jump = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        if scale > 0.0 {
            worst = worst.max(jump / scale);
        } else {
            worst = worst.max(jump);
        }
    };
    for j in 1..=n {
        let r = radii[j - 1];
        let (a_out, b_out) = fc.layer_pair(j - 1);
        let (a_in, b_in) = fc.layer_pair(j);
        match fc.dimension {
            Dimension::Three => {
                let rm2 = r.powi(-2);
                let rm3 = r.powi(-3);
                track(a_in * r + b_in * rm2, a_out * r + b_out * rm2);
                track(
                    eps_of_layer(j) * (a_in - 2.0 * b_in * rm3),
                    eps_of_layer(j - 1) * (a_out - 2.0 * b_out * rm3),
                );
            }
            Dimension::Two => {
                let order = fc.order.unwrap_or(1) as i32;
                let rp = r.powi(order);
                let rm = r.powi(-order);
                track(a_in * rp + b_in * rm, a_out * rp + b_out * rm);
                track(
                    eps_of_layer(j) * order as f64 * (a_in * rp - b_in * rm),
                    eps_of_layer(j - 1) * order as f64 * (a_out * rp - b_out * rm),
                );
            }
        }
    }
    worst
}

/// Far-field amplitude of the alternating 3D route at an arbitrary
/// (possibly complex) contrast λ: `e^T Υ_N (λI − K_N^T)^{-1} ẽ`.
pub fn amplitude_at_lambda(s: &LayeredStructure, lambda: Complex64) -> Result<Complex64> {
    let n = s.layer_count();
    let k = k_matrix(s);
    let resolvent_arg = DenseMatrix::from_fn(n, n, |i, j| {
        let kt = k[(j, i)];
        if i == j {
            lambda - kt
        } else {
            -kt
        }
    });
    let x = LuFactors::factor(&resolvent_arg)
        .solve(&e_tilde_vector(n))
        .map_err(|e| enrich_singular(s, Some(lambda), e))?;
    let radii = s.radii();
    Ok((0..n).map(|i| radii[i].powi(3) * x[i]).sum())
}

/// Far-field perturbation amplitude `b_0 / a0` computed directly from the
/// system matrices, without the coefficient bookkeeping.
///
/// `order` selects the 2D angular order and must be `None` in 3D.
pub fn perturbation_amplitude(
    s: &LayeredStructure,
    profile: &MaterialProfile,
    variant: AmplitudeVariant,
    order: Option<u32>,
) -> Result<Complex64> {
    match (s.dimension(), order) {
        (Dimension::Three, None) => {}
        (Dimension::Two, Some(n)) if n >= 1 => {}
        (Dimension::Three, Some(_)) => {
            return Err(Error::Validation(
                "angular order applies only to 2D structures".into(),
            ))
        }
        _ => {
            return Err(Error::Validation(
                "2D amplitudes need an angular order n >= 1".into(),
            ))
        }
    }
    match variant {
        AmplitudeVariant::General => match s.dimension() {
            Dimension::Three => {
                let red = match reduce(s, profile, Dimension::Three)? {
                    None => return Ok(Complex64::new(0.0, 0.0)),
                    Some(r) => r,
                };
                let p = p_matrix_3d(&red.structure, &red.contrasts);
                let nr = red.structure.layer_count();
                let x = LuFactors::factor(&p.transpose())
                    .solve(&e_vector(nr))
                    .map_err(|e| {
                        let lam = crate::structure::ContrastVector::from_values(
                            red.contrasts.clone(),
                            Dimension::Three,
                        )
                        .alternating_lambda();
                        enrich_singular(&red.structure, lam, e)
                    })?;
                let radii = red.structure.radii();
                Ok((0..nr).map(|i| radii[i].powi(3) * x[i]).sum())
            }
            Dimension::Two => {
                let n = order.expect("validated above");
                let red = match reduce(s, profile, Dimension::Two)? {
                    None => return Ok(Complex64::new(0.0, 0.0)),
                    Some(r) => r,
                };
                let p = p_matrix_2d(&red.structure, &red.contrasts, n);
                let nr = red.structure.layer_count();
                let x = LuFactors::factor(&p).solve(&e_vector(nr))?;
                let radii = red.structure.radii();
                Ok((0..nr).map(|i| radii[i].powi(2 * n as i32) * x[i]).sum())
            }
        },
        AmplitudeVariant::Alternating => {
            if s.dimension() != Dimension::Three {
                return Err(Error::Validation(
                    "the alternating amplitude route is defined for 3D structures".into(),
                ));
            }
            let cv = crate::structure::contrasts(profile, Dimension::Three)?;
            let lambda = cv.alternating_lambda().ok_or_else(|| {
                Error::Validation(
                    "the alternating amplitude route needs an alternating material profile".into(),
                )
            })?;
            amplitude_at_lambda(s, lambda)
        }
    }
}

/// `det P_N` of the profile's (unmerged) contrast configuration; exposed
/// for residual checks.
pub fn profile_determinant(
    s: &LayeredStructure,
    profile: &MaterialProfile,
    order: Option<u32>,
) -> Result<Complex64> {
    let cv = crate::structure::contrasts(profile, s.dimension())?;
    let p = match s.dimension() {
        Dimension::Three => p_matrix_3d(s, cv.values()),
        Dimension::Two => p_matrix_2d(s, cv.values(), order.unwrap_or(1)),
    };
    Ok(lu_det(&p))
}
