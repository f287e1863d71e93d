//! Plasmon resonance modes of concentric multi-layer structures.
//!
//! A layered sphere (3D) or disk (2D) with piecewise-constant permittivity
//! supports quasi-static plasmon resonances: material configurations at
//! which the transmission system for the scattered potential becomes
//! singular. For N concentric layers the whole mode set is governed by a
//! degree-⌊N/2⌋ characteristic polynomial `f_N(q)` in `q = λ² − λ`, where
//! λ is the interface contrast parameter. Its roots are real, live in
//! `[-1/4, 2]`, and each root spawns a mode pair `λ₊ + λ₋ = 1`; odd layer
//! counts add the Fröhlich mode λ = 0 (ε = −2ε₀).
//!
//! The crate computes those modes by three mutually checking routes
//! (combinatorial coefficients, a block-determinant recursion, and dense
//! LU/eigen linear algebra), reconstructs the layered potential, and sweeps
//! a Drude dispersion model across frequency to locate resonance peaks.
//!
//! Modules:
//! - [`structure`]: geometries, material profiles, contrast parameters;
//! - [`linalg`]: system-matrix assembly and dense complex LU/QR primitives;
//! - [`charpoly`]: the characteristic polynomial and its exact integer
//!   combinatorics;
//! - [`modes`]: root finding, mode sets, 2D spectra, low-|f| band scans;
//! - [`field`]: potential reconstruction and far-field amplitudes;
//! - [`drude`]: frequency-dependent permittivity and polarization sweeps.

pub mod charpoly;
pub mod drude;
mod eft;
pub mod error;
pub mod field;
pub mod linalg;
pub mod modes;
mod par;
pub mod structure;

pub use error::{Error, Result};

pub use charpoly::{eval_charpoly, extreme_coeffs, fq_dp, fq_enum, g_coeff, CharPoly};
pub use drude::{drude_eps, peak_match, polarization_tensor, sweep, DrudeParams, SweepResult};
pub use field::{
    eval_potential, field_coeffs, perturbation_amplitude, transmission_residual, FieldCoefficients,
};
pub use linalg::{assemble_2d, assemble_3d, eig_dense, lin_solve, lu_det, DenseMatrix};
pub use modes::{band_scan, find_q_roots, solve_modes_2d, solve_modes_3d, Band, ModeSet};
pub use structure::{
    alternating_profile, contrasts, epsilon_from_lambda, make_structure, ratio_table,
    ContrastVector, Dimension, LayeredStructure, MaterialProfile, RadiusRatioTable, StructureSpec,
};
