//! Layered geometries, material assignments, and contrast parameters.
//!
//! A structure is a nest of N concentric interfaces with radii
//! `r_1 > r_2 > … > r_N > 0`. Layer `A_j` occupies `r_{j+1} < r ≤ r_j`
//! (with `A_0` the unbounded background and `A_N` the core) and carries the
//! permittivity `ε_j`; `ε_0` is the background value.
//!
//! Index convention, pinned once here: interface `j` (1-based) is the
//! sphere `r = r_j`, and its *outer* side carries `ε_{j-1}` where index 0
//! means the background. Every contrast formula in the crate reads
//! `(outer, inner) = (ε_{j-1}, ε_j)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Spatial dimension of a structure: concentric disks (2) or spheres (3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn as_u8(self) -> u8 {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }
}

/// Concentric N-layer geometry with strictly decreasing radii.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredStructure {
    radii: Vec<f64>,
    dimension: Dimension,
}

impl LayeredStructure {
    /// Builds a structure from radii in descending order.
    ///
    /// Ascending or non-monotone input is rejected, not silently sorted.
    pub fn new(radii: Vec<f64>, dimension: Dimension) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::Validation("layer count must be at least 1".into()));
        }
        for (i, &r) in radii.iter().enumerate() {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::Validation(format!(
                    "radius r_{} = {r} must be positive and finite",
                    i + 1
                )));
            }
        }
        for i in 1..radii.len() {
            if radii[i] >= radii[i - 1] {
                return Err(Error::Validation(format!(
                    "radii must be strictly decreasing: r_{} = {} is not below r_{} = {}",
                    i + 1,
                    radii[i],
                    i,
                    radii[i - 1]
                )));
            }
        }
        Ok(Self { radii, dimension })
    }

    /// Radii `r_1 > … > r_N`.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Number of layers N.
    pub fn layer_count(&self) -> usize {
        self.radii.len()
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    /// Index of the layer containing radius `r`: 0 for the background
    /// `A_0`, j for `A_j` (`r_{j+1} < r ≤ r_j`), N for the core.
    pub fn layer_of(&self, r: f64) -> usize {
        // A_j is closed on the outside (contains r = r_j).
        self.radii.iter().take_while(|&&rj| r <= rj).count()
    }
}

/// Generator descriptor for [`make_structure`].
#[derive(Debug, Clone, PartialEq)]
pub enum StructureSpec {
    /// Radii given verbatim, descending.
    Explicit { radii: Vec<f64> },
    /// Equally spaced interfaces `r_i = N − i + 1`.
    Equidistant { layers: usize },
    /// Geometric shrink `r_{i+1} = s·r_i` from `r_1`, with `0 < s < 1`.
    Geometric { layers: usize, r1: f64, ratio: f64 },
    /// Thin shells on a large core: `r_i = R + c_i` with strictly
    /// decreasing offsets, used to probe the large-radius limit.
    Extreme {
        layers: usize,
        base_radius: f64,
        offsets: Vec<f64>,
    },
}

/// Builds a [`LayeredStructure`] from a generator descriptor.
pub fn make_structure(spec: &StructureSpec, dimension: Dimension) -> Result<LayeredStructure> {
    let radii = match spec {
        StructureSpec::Explicit { radii } => radii.clone(),
        StructureSpec::Equidistant { layers } => {
            if *layers < 1 {
                return Err(Error::Validation("layer count must be at least 1".into()));
            }
            (0..*layers).map(|i| (*layers - i) as f64).collect()
        }
        StructureSpec::Geometric { layers, r1, ratio } => {
            if *layers < 1 {
                return Err(Error::Validation("layer count must be at least 1".into()));
            }
            if !ratio.is_finite() || *ratio <= 0.0 || *ratio >= 1.0 {
                return Err(Error::Validation(format!(
                    "geometric ratio s = {ratio} must lie in (0, 1)"
                )));
            }
            if !r1.is_finite() || *r1 <= 0.0 {
                return Err(Error::Validation(format!(
                    "outer radius r1 = {r1} must be positive and finite"
                )));
            }
            let mut radii = Vec::with_capacity(*layers);
            let mut r = *r1;
            for _ in 0..*layers {
                radii.push(r);
                r *= ratio;
            }
            radii
        }
        StructureSpec::Extreme {
            layers,
            base_radius,
            offsets,
        } => {
            if offsets.len() != *layers {
                return Err(Error::Validation(format!(
                    "extreme generator needs {layers} offsets, got {}",
                    offsets.len()
                )));
            }
            for i in 1..offsets.len() {
                if offsets[i] >= offsets[i - 1] {
                    return Err(Error::Validation(format!(
                        "extreme offsets must be strictly decreasing: c_{} = {} is not below c_{} = {}",
                        i + 1,
                        offsets[i],
                        i,
                        offsets[i - 1]
                    )));
                }
            }
            offsets.iter().map(|c| base_radius + c).collect()
        }
    };
    LayeredStructure::new(radii, dimension)
}

/// Table of radius-ratio powers `t[i][j] = (r_j / r_i)^p`.
///
/// The exponent is 3 for the spherical problem and `2n` for the 2D
/// problem at angular order n. Entries with `i < j` lie strictly in
/// (0, 1) and compose multiplicatively: `t[i][k] = t[i][j]·t[j][k]`.
#[derive(Debug, Clone)]
pub struct RadiusRatioTable {
    exponent: u32,
    n: usize,
    values: Vec<f64>, // row-major n×n, diagonal 1
}

impl RadiusRatioTable {
    /// Number of layers the table was built from.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// `(r_j / r_i)^p` with 0-based indices.
    pub fn ratio(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Builds a table from raw values; test-only escape hatch for limit
    /// configurations that no valid radius vector can produce.
    #[doc(hidden)]
    pub fn from_raw(exponent: u32, n: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), n * n);
        Self {
            exponent,
            n,
            values,
        }
    }
}

/// Tabulates `(r_j/r_i)^p` for all index pairs of `s`.
pub fn ratio_table(s: &LayeredStructure, p: u32) -> RadiusRatioTable {
    let n = s.layer_count();
    let radii = s.radii();
    let mut values = vec![1.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                values[i * n + j] = (radii[j] / radii[i]).powi(p as i32);
            }
        }
    }
    RadiusRatioTable {
        exponent: p,
        n,
        values,
    }
}

/// Background permittivity plus per-layer (possibly complex) permittivities.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialProfile {
    eps0: f64,
    eps: Vec<Complex64>,
    alternating: Option<AlternatingSpec>,
}

/// Descriptor of the alternating metal/background material pattern:
/// odd layers carry `−ε* + iδ`, even layers the background value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingSpec {
    pub eps_star: f64,
    pub delta: f64,
}

impl MaterialProfile {
    /// Profile with explicit per-layer permittivities.
    pub fn new(eps0: f64, eps: Vec<Complex64>) -> Result<Self> {
        if !eps0.is_finite() || eps0 <= 0.0 {
            return Err(Error::Validation(format!(
                "background permittivity eps0 = {eps0} must be positive"
            )));
        }
        if eps.is_empty() {
            return Err(Error::Validation(
                "material profile needs at least one layer".into(),
            ));
        }
        if let Some((i, bad)) = eps
            .iter()
            .enumerate()
            .find(|(_, e)| !e.re.is_finite() || !e.im.is_finite())
        {
            return Err(Error::Validation(format!(
                "permittivity eps_{} = {bad} must be finite",
                i + 1
            )));
        }
        Ok(Self {
            eps0,
            eps,
            alternating: None,
        })
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    /// Per-layer permittivities `ε_1 … ε_N`.
    pub fn eps(&self) -> &[Complex64] {
        &self.eps
    }

    pub fn layer_count(&self) -> usize {
        self.eps.len()
    }

    /// The alternating descriptor, when this profile was built by
    /// [`alternating_profile`].
    pub fn alternating(&self) -> Option<AlternatingSpec> {
        self.alternating
    }
}

/// Profile with `ε_j = −ε* + iδ` on odd layers and `ε_0` on even layers
/// (1-based j).
pub fn alternating_profile(
    eps_star: f64,
    delta: f64,
    eps0: f64,
    layers: usize,
) -> Result<MaterialProfile> {
    if !eps_star.is_finite() || eps_star <= 0.0 {
        return Err(Error::Validation(format!(
            "eps_star = {eps_star} must be positive"
        )));
    }
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::Validation(format!(
            "loss parameter delta = {delta} must be non-negative"
        )));
    }
    if layers < 1 {
        return Err(Error::Validation("layer count must be at least 1".into()));
    }
    let metal = Complex64::new(-eps_star, delta);
    let host = Complex64::new(eps0, 0.0);
    let eps = (1..=layers)
        .map(|j| if j % 2 == 1 { metal } else { host })
        .collect();
    let mut profile = MaterialProfile::new(eps0, eps)?;
    profile.alternating = Some(AlternatingSpec { eps_star, delta });
    Ok(profile)
}

/// Per-interface contrast parameters.
///
/// Interface j carries `λ_j = (2ε_{j-1} + ε_j)/(ε_{j-1} − ε_j)` in 3D and
/// `λ̃_j = (ε_{j-1} + ε_j)/(ε_{j-1} − ε_j)` in 2D, with index 0 the
/// background.
#[derive(Debug, Clone, PartialEq)]
pub struct ContrastVector {
    values: Vec<Complex64>,
    dimension: Dimension,
}

impl ContrastVector {
    /// Contrast values `λ_1 … λ_N` (or `λ̃_1 … λ̃_N` in 2D).
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Builds a contrast vector directly from values; callers are
    /// responsible for the dimension-appropriate formula.
    pub fn from_values(values: Vec<Complex64>, dimension: Dimension) -> Self {
        Self { values, dimension }
    }

    /// If the values follow the alternating pattern — `(λ, 1−λ, λ, …)` in
    /// 3D, `(λ̃, −λ̃, λ̃, …)` in 2D — returns the leading value.
    pub fn alternating_lambda(&self) -> Option<Complex64> {
        let lambda = *self.values.first()?;
        let scale = 1.0_f64.max(lambda.norm());
        let tol = 1e-10 * scale;
        for (idx, &v) in self.values.iter().enumerate() {
            let expect = if idx % 2 == 0 {
                lambda
            } else {
                match self.dimension {
                    Dimension::Three => Complex64::new(1.0, 0.0) - lambda,
                    Dimension::Two => -lambda,
                }
            };
            if (v - expect).norm() > tol {
                return None;
            }
        }
        Some(lambda)
    }
}

/// The dimension-specific contrast of one interface.
pub fn contrast_of_pair(outer: Complex64, inner: Complex64, dimension: Dimension) -> Complex64 {
    match dimension {
        Dimension::Three => (2.0 * outer + inner) / (outer - inner),
        Dimension::Two => (outer + inner) / (outer - inner),
    }
}

/// Contrast parameters of every interface of `profile`.
///
/// Fails with [`Error::DegenerateContrast`] when two adjacent
/// permittivities coincide (the contrast has a pole there).
pub fn contrasts(profile: &MaterialProfile, dimension: Dimension) -> Result<ContrastVector> {
    let mut outer = Complex64::new(profile.eps0(), 0.0);
    for (idx, &inner) in profile.eps().iter().enumerate() {
        if outer == inner {
            return Err(Error::DegenerateContrast { interface: idx + 1 });
        }
        outer = inner;
    }
    // for a tagged alternating profile the pattern (λ, 1−λ, …) — or
    // (λ̃, −λ̃, …) in 2D — is an algebraic identity; building it from the
    // first interface keeps it exact instead of 1-ulp noisy
    if profile.alternating().is_some() {
        let lambda = contrast_of_pair(
            Complex64::new(profile.eps0(), 0.0),
            profile.eps()[0],
            dimension,
        );
        return Ok(alternating_contrasts(
            lambda,
            profile.layer_count(),
            dimension,
        ));
    }
    let mut values = Vec::with_capacity(profile.layer_count());
    let mut outer = Complex64::new(profile.eps0(), 0.0);
    for &inner in profile.eps() {
        values.push(contrast_of_pair(outer, inner, dimension));
        outer = inner;
    }
    Ok(ContrastVector { values, dimension })
}

/// Contrast values of the alternating pattern at a given λ:
/// `(λ, 1−λ, …)` in 3D, `(λ, −λ, …)` in 2D.
pub fn alternating_contrasts(
    lambda: Complex64,
    layers: usize,
    dimension: Dimension,
) -> ContrastVector {
    let other = match dimension {
        Dimension::Three => Complex64::new(1.0, 0.0) - lambda,
        Dimension::Two => -lambda,
    };
    let values = (0..layers)
        .map(|idx| if idx % 2 == 0 { lambda } else { other })
        .collect();
    ContrastVector { values, dimension }
}

/// Odd-layer permittivity realizing a mode at δ = 0, relative to `eps0`:
/// `ε = ε_0(λ−2)/(λ+1)` in 3D, `ε = ε_0(λ̃−1)/(λ̃+1)` in 2D.
///
/// Round-trips through [`contrasts`]; λ = −1 is a pole.
pub fn epsilon_from_lambda(lambda: f64, eps0: f64, dimension: Dimension) -> Result<f64> {
    if !eps0.is_finite() || eps0 <= 0.0 {
        return Err(Error::Validation(format!(
            "background permittivity eps0 = {eps0} must be positive"
        )));
    }
    if lambda == -1.0 {
        return Err(Error::LambdaPole);
    }
    let eps = match dimension {
        Dimension::Three => eps0 * (lambda - 2.0) / (lambda + 1.0),
        Dimension::Two => eps0 * (lambda - 1.0) / (lambda + 1.0),
    };
    Ok(eps)
}
