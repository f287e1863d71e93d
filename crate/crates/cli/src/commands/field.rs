//! Potential evaluation along a radial ray.

use plasmode_core::field::{eval_potential, field_coeffs, transmission_residual};
use plasmode_core::structure::Dimension;

use crate::config::{load_config, MaterialArgs, StructureArgs};
use crate::output::{fmt_f64, write_csv};
use crate::CliError;

#[derive(Debug, clap::Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub structure: StructureArgs,
    #[command(flatten)]
    pub material: MaterialArgs,
    /// Background amplitude a0
    #[arg(long, default_value_t = 1.0)]
    pub a0: f64,
    /// Outer end of the sampled ray (default: 2 r_1)
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Number of sample points
    #[arg(long, default_value_t = 256)]
    pub points: usize,
    /// Write (r, u) samples as CSV
    #[arg(long)]
    pub csv: Option<std::path::PathBuf>,
}

pub fn run(args: &FieldArgs) -> Result<(), CliError> {
    if args.points < 2 {
        return Err(CliError::validation("field ray needs at least 2 points"));
    }
    let file = load_config(args.structure.config.as_deref())?;
    let s = args.structure.build(&file, Dimension::Three)?;
    let profile = args.material.build_profile(&file, s.layer_count())?;
    let fc = field_coeffs(&s, &profile, args.a0)?;
    let residual = transmission_residual(&fc, &s, &profile);
    let r_max = args.r_max.unwrap_or(2.0 * s.radii()[0]);
    if !r_max.is_finite() || r_max <= 0.0 {
        return Err(CliError::validation("r_max must be positive"));
    }
    let mut rows = Vec::with_capacity(args.points);
    for i in 1..=args.points {
        let r = r_max * i as f64 / args.points as f64;
        let u = eval_potential(&fc, &s, [r, 0.0, 0.0])?;
        rows.push((r, u));
    }
    println!(
        "potential along the x-axis up to r = {}, {} samples; transmission residual {:.2e}",
        fmt_f64(r_max),
        args.points,
        residual
    );
    println!("far-field amplitude b0/a0 = {}", fc.amplitude());
    if let Some(path) = &args.csv {
        let records: Vec<Vec<String>> = rows
            .iter()
            .map(|(r, u)| vec![fmt_f64(*r), fmt_f64(u.re), fmt_f64(u.im)])
            .collect();
        write_csv(path, &["r", "u_re", "u_im"], &records)?;
    } else {
        for (r, u) in rows.iter().step_by((args.points / 16).max(1)) {
            println!("  r = {r:>10.5}  u = {:>12.6} {:+.3e}i", u.re, u.im);
        }
    }
    Ok(())
}
