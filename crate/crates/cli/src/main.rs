//! `ctorsion`: curvature and cohomology verification reports for the
//! calibrated torsion connection on S² × T².
//!
//! Exit status: 0 when every verdict matches, 2 on any mismatch, 1 on a usage
//! or numerical error.

use std::io::Write;
use std::process::ExitCode;

use calibrated_torsion::report::{
    cmd_cohomology_check, cmd_curvature_table, cmd_grassmann_min, cmd_reproduce, cmd_sweep,
    default_sweep, parse_sweep_points, OutputFormat, QuadratureGrid, ReportDocument, RunConfig,
    STDOUT,
};
use calibrated_torsion::GeometryError;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ctorsion",
    version,
    about = "Verify curvature and cohomology claims for a torsionful connection on S2 x T2"
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every check and emit one verdict per claim (default).
    Reproduce,
    /// Coordinate-plane sectional and biorthogonal values.
    CurvatureTable,
    /// Sampled minimum of the biorthogonal curvature over all 2-planes.
    GrassmannMin,
    /// Harmonicity, residual and class checks for the torsion 3-form.
    CohomologyCheck,
    /// Minimum and class per (a, b) over a list of parameters.
    Sweep {
        /// Comma-separated a:b pairs; defaults to the 5x5 grid over [-2, 2]^2.
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Md,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Torsion parameter a.
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true)]
    a: f64,

    /// Torsion parameter b.
    #[arg(long, global = true, default_value_t = 1.0, allow_hyphen_values = true)]
    b: f64,

    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Random planes drawn by the Grassmannian sampler.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,

    /// Pole cutoff: colatitudes within epsilon of 0 or pi are excluded.
    #[arg(long, global = true, default_value_t = 0.05)]
    epsilon: f64,

    /// Quadrature sizes theta x phi x circle.
    #[arg(long, global = true, default_value = "64x64x64")]
    grid: String,

    #[arg(long, global = true, default_value_t = 1e-6)]
    tolerance: f64,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: FormatArg,

    /// Output file, or - for standard output.
    #[arg(long, global = true, default_value = STDOUT)]
    out: String,

    /// Permit (a, b) = (0, 0).
    #[arg(long, global = true)]
    allow_trivial: bool,

    /// Add wall-clock stage timings to the report (output is then not reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

impl RunArgs {
    fn to_config(&self) -> Result<RunConfig, GeometryError> {
        let grid: QuadratureGrid = self.grid.parse()?;
        Ok(RunConfig {
            a: self.a,
            b: self.b,
            seed: self.seed,
            samples: self.samples,
            epsilon: self.epsilon,
            grid,
            tolerance: self.tolerance,
            format: match self.format {
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Md => OutputFormat::Markdown,
            },
            output_path: self.out.clone(),
            allow_trivial: self.allow_trivial,
            record_timings: self.timings,
        })
    }
}

fn run(cli: &Cli) -> Result<ReportDocument, GeometryError> {
    let cfg = cli.run.to_config()?;
    match &cli.command {
        None | Some(Command::Reproduce) => cmd_reproduce(&cfg),
        Some(Command::CurvatureTable) => cmd_curvature_table(&cfg),
        Some(Command::GrassmannMin) => cmd_grassmann_min(&cfg),
        Some(Command::CohomologyCheck) => cmd_cohomology_check(&cfg),
        Some(Command::Sweep { points }) => {
            let points = match points {
                Some(s) => parse_sweep_points(s)?,
                None => default_sweep(cfg.allow_trivial),
            };
            cmd_sweep(&cfg, &points)
        }
    }
}

fn emit(text: &str, path: &str) -> std::io::Result<()> {
    if path == STDOUT {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()
    } else {
        std::fs::write(path, text)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let doc = match run(&cli) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let format = match cli.run.format {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Md => OutputFormat::Markdown,
    };
    if let Err(e) = emit(&doc.render(format), &cli.run.out) {
        eprintln!("error: cannot write report to {}: {e}", cli.run.out);
        return ExitCode::from(1);
    }
    ExitCode::from(doc.exit_code() as u8)
}
