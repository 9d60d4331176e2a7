use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nst_core::ModelSpec;

use crate::commands::{self, McSettings, Output, Preset, FIGURE_K, FIGURE_MU};
use crate::error::AppError;
use crate::report::write_json;
use crate::threads::Threads;

#[derive(Debug, Parser)]
#[command(
    name = "nst",
    version,
    about = "Closed forms of m(t) = E[Z_t(1-Z_t)] and their Monte Carlo checks"
)]
pub struct Cli {
    /// Also write a JSON run report (parameters, outputs, checks) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Worker threads for Monte Carlo; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelKind {
    Exp,
    Bhit,
    Bessel,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetArg {
    Figure1,
    Figure2,
    Figure3,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Level of the exponential martingale, in (0, 1].
    #[arg(long = "K", value_name = "K", allow_negative_numbers = true)]
    k: Option<f64>,
    /// Level for bhit and bessel (default 1).
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Bessel index.
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
}

impl ModelArgs {
    fn spec(&self) -> Result<ModelSpec, AppError> {
        let kind = self
            .model
            .ok_or_else(|| AppError::flag("--model", "required (exp, bhit or bessel)"))?;
        let a = self.a.unwrap_or(1.0);
        let spec = match kind {
            ModelKind::Exp => {
                let k = self
                    .k
                    .ok_or_else(|| AppError::flag("--K", "required for --model exp"))?;
                ModelSpec::exp(k)
            }
            ModelKind::Bhit => ModelSpec::brownian_hit(a),
            ModelKind::Bessel => {
                let mu = self
                    .mu
                    .ok_or_else(|| AppError::flag("--mu", "required for --model bessel"))?;
                ModelSpec::bessel(mu, a)
            }
        };
        spec.map_err(|e| AppError::from_model(e, "model"))
    }
}

#[derive(Debug, Args)]
struct McArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    paths: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
}

impl McArgs {
    fn settings(&self, paths: u64, dt: f64, threads: usize) -> McSettings {
        McSettings {
            seed: self.seed,
            paths: self.paths.unwrap_or(paths),
            dt: self.dt.unwrap_or(dt),
            threads,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print m(t) to 12 significant digits.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Write m on a uniform time grid as t,m CSV, or a figure preset.
    Curve {
        #[command(flatten)]
        model: ModelArgs,
        /// Write the data of a figure into the --out directory.
        #[arg(long, value_enum)]
        preset: Option<PresetArg>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        t_max: f64,
        #[arg(long, default_value_t = 501)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bessel characteristics mu,z_mu,m_mu,m_prime_mu.
    Table {
        /// Comma-separated indices.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = FIGURE_MU)]
        mu: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate the maximum of m over time.
    Sup {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Compare m(t) with Monte Carlo; JSON to --out or stdout.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// t_star and m_star across exponential levels, as K,t_star,m_star CSV.
    ExperimentKstar {
        /// Comma-separated levels.
        #[arg(long = "K", value_name = "K", value_delimiter = ',', allow_negative_numbers = true, default_values_t = FIGURE_K)]
        k: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that sup Z(1-Z) and Z(1-Z) at the hit of 1/2 average 1/4.
    QuarterChecks {
        #[arg(
            long = "K",
            value_name = "K",
            default_value_t = 0.5,
            allow_negative_numbers = true
        )]
        k: f64,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw x,y or t,m CSV files as an SVG line chart.
    Plot {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn dispatch(cli: &Cli) -> Result<Output, AppError> {
    let threads = match cli.threads {
        Some(0) => return Err(AppError::flag("--threads", "need at least one")),
        Some(n) => n,
        None => Threads::available().count(),
    };
    match &cli.command {
        Command::Eval { model, t } => commands::eval(&model.spec()?, *t),
        Command::Curve {
            model,
            preset,
            t_min,
            t_max,
            points,
            out,
        } => match preset {
            Some(p) => {
                let p = match p {
                    PresetArg::Figure1 => Preset::Figure1,
                    PresetArg::Figure2 => Preset::Figure2,
                    PresetArg::Figure3 => Preset::Figure3,
                };
                commands::curve_preset(p, out)
            }
            None => commands::curve(&model.spec()?, *t_min, *t_max, *points, out),
        },
        Command::Table { mu, out } => commands::table(mu, out.as_deref()),
        Command::Sup { model } => commands::sup(&model.spec()?),
        Command::Verify { model, t, mc, out } => commands::verify(
            &model.spec()?,
            *t,
            &mc.settings(200_000, 1e-3, threads),
            out.as_deref(),
        ),
        Command::ExperimentKstar { k, out } => commands::experiment_kstar(k, out.as_deref()),
        Command::QuarterChecks { k, mc, out } => {
            commands::quarter_checks(*k, &mc.settings(20_000, 1e-4, threads), out.as_deref())
        }
        Command::Plot { inputs, out } => commands::plot(inputs, out),
    }
}

fn finish(output: &Output, report_path: Option<&Path>) -> Result<(), AppError> {
    print!("{}", output.stdout);
    if let Some(p) = report_path {
        write_json(&output.report, p)?;
    }
    let failed = output.report.failed();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(AppError::Verification(failed.join(", ")))
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli).and_then(|out| finish(&out, cli.report.as_deref())) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
