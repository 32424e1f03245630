//! zmlab: evaluate z-measure weights and kernels, run oracles, scans, identity
//! suites and sampling, and write the results as CSV or JSON.

mod commands;
mod exit;
mod output;
mod params;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use commands::{
    CorrFamily, CorrelationConfig, EmbeddingArg, OrthoFamily, SampleConfig, ScanConfig, ScanKind, WeightFamily,
};
use output::OutputRecord;
use params::ParamArgs;
use suites::Suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Exit status: 0 when every verdict passes, 1 when one fails, 2 for invalid
/// parameters, 3 when a truncation or budget limit is hit.
///
/// CSV output opens with `#` lines (schema version, command, inputs, verdicts)
/// followed by a header row. JSON holds the same under `inputs`, `rows` and `verdicts`.
#[derive(Parser, Debug)]
#[command(
    name = "zmlab",
    version,
    about = "Weights, kernels, oracles, limit scans and sampling for z-measures",
    long_about
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weights of partitions or signatures. Columns: lambda, ln_abs, value.
    ///
    /// zxi and plancherel weights are probabilities; zw and zab weights are unnormalized.
    Weight {
        #[arg(long, value_enum)]
        family: WeightFamily,
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated parts or entries; repeat for several rows. An empty
        /// string is the empty partition.
        #[arg(long = "lambda", required = true, allow_hyphen_values = true)]
        lambdas: Vec<String>,
    },
    /// Correlation functions by enumeration next to the kernel determinant.
    /// Columns: points, oracle, tail_bound, determinant, abs_diff.
    Correlation {
        #[arg(long, value_enum)]
        family: CorrFamily,
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated half-integers; repeat for several rows.
        #[arg(long = "points", required = true, allow_hyphen_values = true)]
        points: Vec<String>,
        #[arg(long, value_enum, default_value_t = EmbeddingArg::Underline)]
        embedding: EmbeddingArg,
        /// Enumeration budget: partition size for zxi, entry bound for signatures.
        #[arg(long)]
        size: Option<u32>,
        /// Largest acceptable truncation tail.
        #[arg(long, default_value_t = 1e-6)]
        tail_tol: f64,
        /// Relative tolerance of the comparison, on top of the tail bound.
        #[arg(long, default_value_t = 1e-6)]
        rtol: f64,
    },
    /// Kernel values on the grid X x Y. Columns: x, y, value.
    ///
    /// FAMILY is a kernel name (hypergeom_first, hypergeom_second, gamma_first,
    /// gamma_second, psi, A_xi, A_limit, L_xi, L_limit, tail_first, tail_second,
    /// L_tail), zw or zab. Tail kernels read x, y as the real coordinates s, t.
    Kernel {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// Half-lines of the tail coordinates: ++, +-, -+ or --.
        #[arg(long, default_value = "++", allow_hyphen_values = true)]
        signs: String,
    },
    /// Limit scans. Columns by kind:
    /// limits: scan, ladder, x, y, source, target, error;
    /// density: x, scaled, error; cross: n, max_entry;
    /// plancherel: t, lambda, z_measure, plancherel, error; projection: window, residual.
    ///
    /// Without --source, `limits` runs the default scans at (z, z'), 0.3 and 0.6
    /// unless given. Probes are x:y pairs; couplings are xi_ladder, n_ladder,
    /// tail_s0_ladder and coupled_xi_s0:EPS.
    Scan {
        #[arg(long, value_enum, default_value_t = ScanKind::Limits)]
        kind: ScanKind,
        #[command(flatten)]
        params: ParamArgs,
        /// Source of a limits scan: a kernel name, zw or zab.
        #[arg(long)]
        source: Option<String>,
        /// Target kernel of a limits scan.
        #[arg(long)]
        target: Option<String>,
        /// Target parameters; default (z, z'), or (-z, -z') for zw and zab sources.
        #[arg(long, allow_hyphen_values = true)]
        target_z: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        target_zp: Option<String>,
        #[arg(long)]
        coupling: Option<String>,
        /// Comma-separated ladder: xi, N, s0, x or t depending on the scan.
        #[arg(long, allow_hyphen_values = true)]
        ladder: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        probes: Option<String>,
        /// Offsets from 0 and -N for the cross scan.
        #[arg(long, allow_hyphen_values = true)]
        offsets: Option<String>,
        /// Kernel of a density scan.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value = "++", allow_hyphen_values = true)]
        signs: String,
        /// Diagrams of a plancherel scan; repeat for several.
        #[arg(long = "lambda", allow_hyphen_values = true)]
        lambdas: Vec<String>,
        /// Region |x| <= R of a projection scan; the interior half-window by default.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Orthogonality diagnostics of the polynomial kernels.
    /// Columns: check, value, tolerance, pass.
    Ortho {
        #[arg(long, value_enum)]
        family: OrthoFamily,
        #[command(flatten)]
        params: ParamArgs,
        /// Truncation tolerance of the lattice sums.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Largest extent of the lattice sums.
        #[arg(long, default_value_t = 1 << 20)]
        cap: i64,
    },
    /// Exact samples of a kernel window. Columns: draw, size, points; with
    /// --summary: x, rho1, empirical, deviation_sigma.
    Sample {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        params: ParamArgs,
        /// Number of sites in the symmetric window.
        #[arg(long, default_value_t = 20)]
        window: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        seed: u64,
        /// Compare one-point frequencies with the kernel diagonal.
        #[arg(long)]
        summary: bool,
        #[arg(long, default_value = "++", allow_hyphen_values = true)]
        signs: String,
    },
    /// Kernel identity suites. Columns: check, max_error, tolerance, pass.
    Identity {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        params: ParamArgs,
        /// Number of sites in the symmetric window.
        #[arg(long, default_value_t = 30)]
        window: usize,
        /// Replaces the suite's tolerances.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn run(command: Command) -> Result<OutputRecord> {
    match command {
        Command::Weight { family, params, lambdas } => commands::weight(family, &params, &lambdas),
        Command::Correlation { family, params, points, embedding, size, tail_tol, rtol } => {
            commands::correlation(&CorrelationConfig { family, points, embedding, size, tail_tol, rtol }, &params)
        }
        Command::Kernel { family, params, x, y, signs } => commands::kernel(&family, &params, &x, &y, &signs),
        Command::Scan {
            kind,
            params,
            source,
            target,
            target_z,
            target_zp,
            coupling,
            ladder,
            probes,
            offsets,
            family,
            signs,
            lambdas,
            radius,
        } => commands::scan(
            &ScanConfig {
                kind,
                source,
                target,
                target_z,
                target_zp,
                coupling,
                ladder,
                probes,
                offsets,
                family,
                signs,
                lambdas,
                radius,
            },
            &params,
        ),
        Command::Ortho { family, params, tol, cap } => commands::ortho(family, &params, tol, cap),
        Command::Sample { family, params, window, count, seed, summary, signs } => {
            commands::sample(&SampleConfig { family, window, count, seed, summary, signs }, &params)
        }
        Command::Identity { suite, params, window, tol } => commands::identity(suite, &params, window, tol),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|rec| {
        let text = match cli.format {
            Format::Csv => rec.to_csv()?,
            Format::Json => rec.to_json()?,
        };
        emit(&text, cli.out.as_ref())?;
        Ok(rec.passes())
    });
    let status = match result {
        Ok(true) => exit::OK,
        Ok(false) => exit::VERDICT_FAILED,
        Err(e) => {
            eprintln!("zmlab: {e:#}");
            exit::status_of(&e)
        }
    };
    ExitCode::from(status as u8)
}
