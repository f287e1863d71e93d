//! JSON configuration file schema and flag merging.
//!
//! A config file may carry a structure block, a material block, and
//! command options. Command-line flags override file values field by
//! field. The schema is strict: unknown keys and mixed material styles
//! are rejected before any computation runs.

use num_complex::Complex64;
use serde::Deserialize;

use plasmode_core::structure::{
    make_structure, Dimension, LayeredStructure, MaterialProfile, StructureSpec,
};
use plasmode_core::DrudeParams;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct FileConfig {
    pub structure: Option<StructureConfig>,
    pub material: Option<MaterialConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct StructureConfig {
    pub dim: Option<u8>,
    pub layers: Option<usize>,
    pub generator: Option<String>,
    pub radii: Option<Vec<f64>>,
    pub r1: Option<f64>,
    pub s: Option<f64>,
    pub base_radius: Option<f64>,
    pub offsets: Option<Vec<f64>>,
}

/// Permittivity entry: plain real or `[re, im]`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum EpsEntry {
    Real(f64),
    Complex([f64; 2]),
}

impl EpsEntry {
    pub fn to_c64(self) -> Complex64 {
        match self {
            EpsEntry::Real(re) => Complex64::new(re, 0.0),
            EpsEntry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct MaterialConfig {
    pub eps0: Option<f64>,
    pub eps_star: Option<f64>,
    pub delta: Option<f64>,
    pub eps: Option<Vec<EpsEntry>>,
    pub drude: Option<DrudeConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct DrudeConfig {
    pub eps_inf: Option<f64>,
    pub omega_p: Option<f64>,
    pub tau: Option<f64>,
}

pub fn load_config(path: Option<&std::path::Path>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                CliError::validation(format!("cannot read config {}: {e}", p.display()))
            })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::validation(format!("malformed config {}: {e}", p.display())))
        }
    }
}

/// Structure flags shared by every geometry-consuming subcommand.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct StructureArgs {
    /// JSON config file; flags override its values
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    /// Number of layers N
    #[arg(long)]
    pub layers: Option<usize>,
    /// Generator: equidistant | geometric | extreme (explicit radii via --radii)
    #[arg(long)]
    pub generator: Option<String>,
    /// Explicit radii, descending, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Outer radius for the geometric generator
    #[arg(long)]
    pub r1: Option<f64>,
    /// Shrink ratio s in (0,1) for the geometric generator
    #[arg(long)]
    pub s: Option<f64>,
    /// Base radius R for the extreme generator
    #[arg(long)]
    pub base_radius: Option<f64>,
    /// Offsets c_1 > ... > c_N for the extreme generator, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub offsets: Option<Vec<f64>>,
}

impl StructureArgs {
    /// Resolves flags over the file block into a structure.
    pub fn build(
        &self,
        file: &FileConfig,
        dimension: Dimension,
    ) -> Result<LayeredStructure, CliError> {
        let blank = StructureConfig::default();
        let block = file.structure.as_ref().unwrap_or(&blank);
        if let Some(dim) = block.dim {
            let expect = dimension.as_u8();
            if dim != expect {
                return Err(CliError::validation(format!(
                    "config dim = {dim} but this command works in {expect}D"
                )));
            }
        }
        let radii = self.radii.clone().or_else(|| block.radii.clone());
        let layers = self.layers.or(block.layers);
        let generator = self.generator.clone().or_else(|| block.generator.clone());
        let spec = match (radii, generator.as_deref()) {
            (Some(r), None) | (Some(r), Some("explicit")) => StructureSpec::Explicit { radii: r },
            (Some(_), Some(g)) => {
                return Err(CliError::validation(format!(
                    "--radii conflicts with generator '{g}'"
                )))
            }
            (None, g) => {
                let layers = layers.ok_or_else(|| {
                    CliError::validation("structure needs --layers (or --radii / a config file)")
                })?;
                match g.unwrap_or("equidistant") {
                    "equidistant" => StructureSpec::Equidistant { layers },
                    "geometric" => StructureSpec::Geometric {
                        layers,
                        r1: self.r1.or(block.r1).unwrap_or(1.0),
                        ratio: self.s.or(block.s).ok_or_else(|| {
                            CliError::validation("geometric generator needs --s in (0,1)")
                        })?,
                    },
                    "extreme" => StructureSpec::Extreme {
                        layers,
                        base_radius: self.base_radius.or(block.base_radius).ok_or_else(|| {
                            CliError::validation("extreme generator needs --base-radius")
                        })?,
                        offsets: self
                            .offsets
                            .clone()
                            .or_else(|| block.offsets.clone())
                            .ok_or_else(|| {
                                CliError::validation("extreme generator needs --offsets")
                            })?,
                    },
                    other => return Err(CliError::validation(format!(
                        "unknown generator '{other}' (expected equidistant, geometric or extreme)"
                    ))),
                }
            }
        };
        make_structure(&spec, dimension).map_err(CliError::from)
    }
}

/// Material flags shared by material-consuming subcommands.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct MaterialArgs {
    /// Background permittivity
    #[arg(long)]
    pub eps0: Option<f64>,
    /// Alternating profile: odd layers get -epsStar + i*delta
    #[arg(long)]
    pub eps_star: Option<f64>,
    /// Loss parameter delta of the alternating profile
    #[arg(long)]
    pub delta: Option<f64>,
    /// Explicit per-layer permittivities (reals; complex via config file)
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
}

impl MaterialArgs {
    pub fn eps0(&self, file: &FileConfig) -> f64 {
        self.eps0
            .or_else(|| file.material.as_ref().and_then(|m| m.eps0))
            .unwrap_or(1.0)
    }

    /// Resolves to a full per-layer profile. Exactly one specification
    /// style (alternating or explicit list) must be present.
    pub fn build_profile(
        &self,
        file: &FileConfig,
        layers: usize,
    ) -> Result<MaterialProfile, CliError> {
        let blank = MaterialConfig::default();
        let block = file.material.as_ref().unwrap_or(&blank);
        let eps0 = self.eps0(file);
        let eps_star = self.eps_star.or(block.eps_star);
        let delta = self.delta.or(block.delta);
        let explicit: Option<Vec<Complex64>> = match (&self.eps, &block.eps) {
            (Some(flags), _) => Some(flags.iter().map(|&re| Complex64::new(re, 0.0)).collect()),
            (None, Some(entries)) => Some(entries.iter().map(|e| e.to_c64()).collect()),
            (None, None) => None,
        };
        let styles = usize::from(eps_star.is_some()) + usize::from(explicit.is_some());
        if styles > 1 {
            return Err(CliError::validation(
                "material must use exactly one style: epsStar/delta or an explicit eps list",
            ));
        }
        if let Some(star) = eps_star {
            return plasmode_core::structure::alternating_profile(
                star,
                delta.unwrap_or(0.0),
                eps0,
                layers,
            )
            .map_err(CliError::from);
        }
        if let Some(eps) = explicit {
            if eps.len() != layers {
                return Err(CliError::validation(format!(
                    "eps list has {} entries for {layers} layers",
                    eps.len()
                )));
            }
            return MaterialProfile::new(eps0, eps).map_err(CliError::from);
        }
        Err(CliError::validation(
            "material needs either --eps-star (alternating) or --eps (explicit list)",
        ))
    }

    /// Resolves Drude parameters; the material block must not also carry
    /// another style.
    pub fn build_drude(
        &self,
        file: &FileConfig,
        eps_inf: Option<f64>,
        omega_p: Option<f64>,
        tau: Option<f64>,
    ) -> Result<DrudeParams, CliError> {
        let blank = MaterialConfig::default();
        let block = file.material.as_ref().unwrap_or(&blank);
        if self.eps_star.or(block.eps_star).is_some() || self.eps.is_some() || block.eps.is_some() {
            return Err(CliError::validation(
                "the sweep uses the drude material style; remove epsStar / eps entries",
            ));
        }
        let defaults = DrudeParams::default();
        let file_drude = block.drude.clone().unwrap_or_default();
        let eps_inf = eps_inf.or(file_drude.eps_inf).unwrap_or(defaults.eps_inf);
        let omega_p = omega_p.or(file_drude.omega_p).unwrap_or(defaults.omega_p);
        let tau = tau.or(file_drude.tau).unwrap_or(defaults.tau);
        let eps0 = self
            .eps0
            .or_else(|| file.material.as_ref().and_then(|m| m.eps0))
            .unwrap_or(1.33 * 1.33 * eps_inf);
        DrudeParams::new(eps_inf, omega_p, tau, eps0).map_err(CliError::from)
    }
}
