//! Frequency sweep of the polarization-tensor norm.

use plasmode_core::drude::{peak_match, sweep, MatrixNorm};
use plasmode_core::modes::solve_modes_3d;
use plasmode_core::structure::Dimension;

use crate::config::{load_config, MaterialArgs, StructureArgs};
use crate::output::{fmt_f64, write_csv, LinePlot};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum NormChoice {
    Frobenius,
    Spectral,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub structure: StructureArgs,
    #[command(flatten)]
    pub material: MaterialArgs,
    /// High-frequency permittivity eps' (F/m)
    #[arg(long)]
    pub eps_inf: Option<f64>,
    /// Plasma frequency omega_p (1/s)
    #[arg(long)]
    pub omega_p: Option<f64>,
    /// Damping rate tau (1/s)
    #[arg(long)]
    pub tau: Option<f64>,
    /// Sweep range lower end (1/s)
    #[arg(long, default_value_t = 2e14)]
    pub omega_low: f64,
    /// Sweep range upper end (1/s)
    #[arg(long, default_value_t = 2e15)]
    pub omega_high: f64,
    /// Number of log-spaced grid points
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
    /// Matrix norm reported for M(omega)
    #[arg(long, value_enum, default_value_t = NormChoice::Frobenius)]
    pub norm: NormChoice,
    /// Write (omega, re lambda, im lambda, |M|) as CSV
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
    /// Write a polyline plot of |M|(omega) as SVG
    #[arg(long)]
    pub svg: Option<std::path::PathBuf>,
}

pub fn run(args: &SweepArgs) -> Result<(), CliError> {
    let file = load_config(args.structure.config.as_deref())?;
    let s = args.structure.build(&file, Dimension::Three)?;
    let params = args
        .material
        .build_drude(&file, args.eps_inf, args.omega_p, args.tau)?;
    let norm = match args.norm {
        NormChoice::Frobenius => MatrixNorm::Frobenius,
        NormChoice::Spectral => MatrixNorm::Spectral,
    };
    let sr = sweep(
        &s,
        &params,
        args.omega_low,
        args.omega_high,
        args.points,
        norm,
    )?;
    let ms = solve_modes_3d(&s, 1.0)?;
    let matches = peak_match(&sr, &ms);
    println!(
        "swept {} points over [{:.4e}, {:.4e}] 1/s; {} peak(s)",
        args.points,
        args.omega_low,
        args.omega_high,
        sr.peaks.len()
    );
    for m in &matches {
        println!(
            "  peak at omega = {:.4e}: Re lambda = {:+.4}, nearest mode {:+.4}, distance {:.4}",
            m.omega, m.re_lambda, m.mode_lambda, m.distance
        );
    }
    if let Some(path) = &args.csv {
        let rows: Vec<Vec<String>> = (0..sr.omegas.len())
            .map(|i| {
                vec![
                    fmt_f64(sr.omegas[i]),
                    fmt_f64(sr.lambdas[i].re),
                    fmt_f64(sr.lambdas[i].im),
                    fmt_f64(sr.norm_m[i]),
                ]
            })
            .collect();
        write_csv(path, &["omega", "re_lambda", "im_lambda", "norm_m"], &rows)?;
    }
    if let Some(path) = &args.svg {
        LinePlot {
            xs: &sr.omegas,
            ys: &sr.norm_m,
            x_label: "omega (1/s)",
            y_label: "|M|",
            log_x: true,
        }
        .write(path)?;
    }
    Ok(())
}
