//! Geometry-only subcommands: modes, charpoly, modes2d, band.

use serde_json::json;

use plasmode_core::charpoly::fq_dp;
use plasmode_core::modes::{band_scan, solve_modes_2d, solve_modes_3d};
use plasmode_core::structure::{ratio_table, Dimension};

use crate::config::{load_config, MaterialArgs, StructureArgs};
use crate::output::{fmt_f64, write_csv, write_json};
use crate::CliError;

#[derive(Debug, clap::Args)]
pub struct ModesArgs {
    #[command(flatten)]
    pub structure: StructureArgs,
    #[command(flatten)]
    pub material: MaterialArgs,
    /// Write the mode table as CSV
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
    /// Write the mode set as JSON
    #[arg(long)]
    pub json: Option<std::path::PathBuf>,
}

pub fn run_modes(args: &ModesArgs) -> Result<(), CliError> {
    let file = load_config(args.structure.config.as_deref())?;
    let s = args.structure.build(&file, Dimension::Three)?;
    let eps0 = args.material.eps0(&file);
    let ms = solve_modes_3d(&s, eps0)?;

    println!("N = {} layers, eps0 = {}", ms.layer_count(), fmt_f64(eps0));
    if ms.has_zero_mode {
        println!(
            "zero mode: lambda = 0, eps = {}",
            fmt_f64(ms.zero_mode_eps.unwrap_or_default())
        );
    }
    println!(
        "{:>3}  {:>12} {:>12} {:>12} {:>12} {:>14} {:>10}",
        "#", "q", "lambda+", "lambda-", "eps+", "eps-", "residual"
    );
    for (i, m) in ms.modes.iter().enumerate() {
        println!(
            "{:>3}  {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>14.6} {:>10.2e}",
            i + 1,
            m.q_star,
            m.lambda_plus,
            m.lambda_minus,
            m.eps_plus,
            m.eps_minus,
            m.residual
        );
    }

    if let Some(path) = &args.csv {
        let rows: Vec<Vec<String>> = ms
            .modes
            .iter()
            .enumerate()
            .map(|(i, m)| {
                vec![
                    (i + 1).to_string(),
                    fmt_f64(m.q_star),
                    fmt_f64(m.lambda_plus),
                    fmt_f64(m.lambda_minus),
                    fmt_f64(m.eps_plus),
                    fmt_f64(m.eps_minus),
                    fmt_f64(m.residual),
                ]
            })
            .collect();
        write_csv(
            path,
            &[
                "index",
                "q",
                "lambda_plus",
                "lambda_minus",
                "eps_plus",
                "eps_minus",
                "residual",
            ],
            &rows,
        )?;
    }
    if let Some(path) = &args.json {
        let modes: Vec<_> = ms
            .modes
            .iter()
            .enumerate()
            .map(|(i, m)| {
                json!({
                    "index": i + 1,
                    "q": m.q_star,
                    "lambda_plus": m.lambda_plus,
                    "lambda_minus": m.lambda_minus,
                    "eps_plus": m.eps_plus,
                    "eps_minus": if m.minus_at_pole { json!("-inf") } else { json!(m.eps_minus) },
                    "residual": m.residual,
                })
            })
            .collect();
        write_json(
            path,
            &json!({
                "layers": ms.layer_count(),
                "eps0": eps0,
                "radii": s.radii(),
                "has_zero_mode": ms.has_zero_mode,
                "zero_mode_eps": ms.zero_mode_eps,
                "modes": modes,
            }),
        )?;
    }
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct CharpolyArgs {
    #[command(flatten)]
    pub structure: StructureArgs,
    /// Write coefficients as CSV
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
    /// Write coefficients as JSON
    #[arg(long)]
    pub json: Option<std::path::PathBuf>,
}

pub fn run_charpoly(args: &CharpolyArgs) -> Result<(), CliError> {
    let file = load_config(args.structure.config.as_deref())?;
    let s = args.structure.build(&file, Dimension::Three)?;
    let cp = fq_dp(&ratio_table(&s, 3));
    println!(
        "f_{}(q): degree {} in q = lambda^2 - lambda",
        cp.n(),
        cp.degree()
    );
    println!("{:>3}  {:>24} {:>24}", "k", "c_k", "2^k c_k");
    let folded = cp.q_coefficients();
    for (k, (&c, &f)) in cp.coeffs().iter().zip(&folded).enumerate() {
        println!("{k:>3}  {c:>24.16e} {f:>24.16e}");
    }
    if let Some(path) = &args.csv {
        let rows: Vec<Vec<String>> = cp
            .coeffs()
            .iter()
            .zip(&folded)
            .enumerate()
            .map(|(k, (&c, &f))| vec![k.to_string(), fmt_f64(c), fmt_f64(f)])
            .collect();
        write_csv(path, &["k", "c_k", "q_coefficient"], &rows)?;
    }
    if let Some(path) = &args.json {
        write_json(
            path,
            &json!({
                "layers": cp.n(),
                "degree": cp.degree(),
                "coeffs": cp.coeffs(),
                "q_coefficients": folded,
            }),
        )?;
    }
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct Modes2dArgs {
    #[command(flatten)]
    pub structure: StructureArgs,
    /// Angular order n
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
    #[arg(long)]
    pub json: Option<std::path::PathBuf>,
}

pub fn run_modes2d(args: &Modes2dArgs) -> Result<(), CliError> {
    let file = load_config(args.structure.config.as_deref())?;
    let s = args.structure.build(&file, Dimension::Two)?;
    let lambdas = solve_modes_2d(&s, args.order)?;
    println!(
        "N = {} layers, angular order n = {}: {} modes",
        s.layer_count(),
        args.order,
        lambdas.len()
    );
    for (i, l) in lambdas.iter().enumerate() {
        println!("{:>3}  {:>14.8}", i + 1, l);
    }
    if let Some(path) = &args.csv {
        let rows: Vec<Vec<String>> = lambdas
            .iter()
            .enumerate()
            .map(|(i, l)| vec![(i + 1).to_string(), fmt_f64(*l)])
            .collect();
        write_csv(path, &["index", "lambda_tilde"], &rows)?;
    }
    if let Some(path) = &args.json {
        write_json(
            path,
            &json!({
                "layers": s.layer_count(),
                "order": args.order,
                "lambda_tilde": lambdas,
            }),
        )?;
    }
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct BandArgs {
    #[command(flatten)]
    pub structure: StructureArgs,
    /// Lower end of the q window
    #[arg(long, default_value_t = -0.25)]
    pub q_low: f64,
    /// Upper end of the q window
    #[arg(long, default_value_t = 2.0)]
    pub q_high: f64,
    /// |f| threshold defining a band
    #[arg(long, default_value_t = 1e-4)]
    pub threshold: f64,
    /// Grid step
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
    #[arg(long)]
    pub json: Option<std::path::PathBuf>,
}

pub fn run_band(args: &BandArgs) -> Result<(), CliError> {
    if !(args.q_low.is_finite() && args.q_high.is_finite()) || args.q_low >= args.q_high {
        return Err(CliError::validation("band scan needs q_low < q_high"));
    }
    if !args.step.is_finite() || args.step <= 0.0 {
        return Err(CliError::validation("band scan needs a positive step"));
    }
    let file = load_config(args.structure.config.as_deref())?;
    let s = args.structure.build(&file, Dimension::Three)?;
    let cp = fq_dp(&ratio_table(&s, 3));
    let bands = band_scan(&cp, args.q_low, args.q_high, args.threshold, args.step);
    println!(
        "{} band(s) with |f| <= {} over [{}, {}]:",
        bands.len(),
        fmt_f64(args.threshold),
        fmt_f64(args.q_low),
        fmt_f64(args.q_high)
    );
    for b in &bands {
        println!(
            "  [{:.6}, {:.6}]  max|f| = {:.3e}",
            b.q_low, b.q_high, b.max_abs_f
        );
    }
    if let Some(path) = &args.csv {
        let rows: Vec<Vec<String>> = bands
            .iter()
            .map(|b| vec![fmt_f64(b.q_low), fmt_f64(b.q_high), fmt_f64(b.max_abs_f)])
            .collect();
        write_csv(path, &["q_low", "q_high", "max_abs_f"], &rows)?;
    }
    if let Some(path) = &args.json {
        let items: Vec<_> = bands
            .iter()
            .map(|b| json!({"q_low": b.q_low, "q_high": b.q_high, "max_abs_f": b.max_abs_f}))
            .collect();
        write_json(path, &json!({ "bands": items }))?;
    }
    Ok(())
}
