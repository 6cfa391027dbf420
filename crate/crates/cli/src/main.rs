//! `afif` — evaluate, integrate, flip, plot, and verify fractal interpolant
//! instances described by JSON configs.
//!
//! Exit codes: 0 success, 2 invalid config or instance, 3 evaluation point
//! outside the interval, 4 verification failure.

mod config;
mod plot;
mod verify;

use afif_core::{
    depth_for_tolerance, eval_grid, eval_point, integrate_closed_form, sum_zero_shortcut,
    trapezoid_grid,
};
use anyhow::Result;
use clap::{Parser, Subcommand};
use config::SpecConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "afif",
    about = "Fractal interpolants: certified evaluation, closed-form integrals, flips, plots",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the interpolant at a point with a certified error bound.
    Eval {
        /// Instance config (JSON).
        config: PathBuf,
        /// Abscissa to evaluate at.
        #[arg(long)]
        x: f64,
        /// Truncation tolerance driving the unrolling depth.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Print the closed-form definite integral over the whole interval.
    Integrate {
        config: PathBuf,
        /// Also run the fixed-point + trapezoid oracle and print the difference.
        #[arg(long)]
        check: bool,
    },
    /// Write the mirrored instance's config.
    Flip {
        config: PathBuf,
        /// Output path for the flipped config.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample the interpolant to CSV (x,f,f_alpha) or an SVG chart.
    Plot {
        config: PathBuf,
        /// Number of samples.
        #[arg(long, default_value_t = 2048)]
        samples: usize,
        /// Output file; the extension picks the format (.csv or .svg).
        #[arg(long)]
        out: PathBuf,
        /// Overlay the germ curve in SVG output.
        #[arg(long)]
        overlay_germ: bool,
        /// Truncation tolerance for the sampled values.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run the invariant battery and print a pass/fail table.
    Verify { config: PathBuf },
}

const EXIT_BAD_CONFIG: u8 = 2;
const EXIT_OUT_OF_DOMAIN: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_BAD_CONFIG)
        }
    }
}

/// Config loading/validation failures surface as `Err` (exit 2); everything
/// else maps to an explicit code.
fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Eval { config, x, tol } => {
            let spec = SpecConfig::load(&config)?.build()?;
            let depth = depth_for_tolerance(&spec, tol);
            match eval_point(&spec, x, depth) {
                Ok(r) => {
                    println!("value       = {:.16e}", r.value);
                    println!("depth       = {}", r.depth_used);
                    println!("error bound = {:.16e}", r.error_bound);
                    Ok(ExitCode::SUCCESS)
                }
                Err(afif_core::eval::Error::OutOfDomain(e)) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(EXIT_OUT_OF_DOMAIN))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Integrate { config, check } => {
            let spec = SpecConfig::load(&config)?.build()?;
            let result = integrate_closed_form(&spec)?;
            println!("integral    = {:.16e}", result.value);
            println!("lambda      = {:.16e}", result.lambda);
            println!("integral f  = {:.16e}", result.integral_f);
            println!("integral b  = {:.16e}", result.integral_b);
            if let Some(shortcut) = sum_zero_shortcut(&spec)? {
                println!("note: zero scale sum on a uniform partition, integral equals the germ's ({shortcut:.16e})");
            }
            if check {
                let grid = eval_grid(&spec, (1 << 14) + 1, 1e-8)?;
                let brute = trapezoid_grid(&grid);
                println!("brute force = {:.16e}", brute);
                println!("difference  = {:.3e}", (result.value - brute).abs());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Flip { config, out } => {
            let original = SpecConfig::load(&config)?;
            original.build()?;
            let flipped = original.flipped()?;
            flipped.build()?;
            flipped.save(&out)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot {
            config,
            samples,
            out,
            overlay_germ,
            tol,
        } => {
            let spec = SpecConfig::load(&config)?.build()?;
            let data = plot::sample(&spec, samples, tol)?;
            match out.extension().and_then(|e| e.to_str()) {
                Some("csv") => plot::write_csv(&data, &out)?,
                Some("svg") => plot::write_svg(&data, &out, overlay_germ)?,
                other => anyhow::bail!("unsupported output extension {other:?}; use .csv or .svg"),
            }
            println!(
                "wrote {} ({} samples, depth {}, error bound {:.3e})",
                out.display(),
                data.xs.len(),
                data.depth,
                data.error_bound
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { config } => {
            let spec = SpecConfig::load(&config)?.build()?;
            let checks = verify::run_all(&spec)?;
            let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            let mut failures = 0;
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                println!("{status}  {:width$}  {}", c.name, c.detail);
                if !c.passed {
                    failures += 1;
                }
            }
            if failures == 0 {
                println!("all {} checks passed", checks.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("{failures} of {} checks failed", checks.len());
                Ok(ExitCode::from(EXIT_VERIFY_FAILED))
            }
        }
    }
}
