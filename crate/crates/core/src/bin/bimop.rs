use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bimop::config::{parse_point, Format, RunConfig};
use bimop::export::{write_exports, ExportOptions};
use bimop::kernel::{kernel_eval, Point};
use bimop::rational::{format_rational, to_decimal};
use bimop::report::{run_perturbed, RunOptions, EXIT_BREAKDOWN, EXIT_CONFIG, SCHEMA_VERSION};
use bimop::verify::{parse_checks, CheckKind, VerifyOptions};
use bimop::workspace::Workspace;
use bimop::Error;

/// Exact mixed multiple orthogonal polynomials on the step-line.
#[derive(Parser)]
#[command(name = "bimop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Factorize, run the configured checks and write exports.
    Compute {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the configured depth.
        #[arg(long)]
        depth: Option<usize>,
        /// Export directory; defaults to the configured output or `bimop_out`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        seed: Option<u64>,
        /// Adds decimal renderings next to the exact values.
        #[arg(long)]
        render_decimal: bool,
        /// Adds wall-clock timings to the report (breaks byte-identical reruns).
        #[arg(long)]
        timing: bool,
    },
    /// Run checks and print the report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated check names; defaults to the configured list, then all.
        #[arg(long)]
        checks: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        depth: Option<usize>,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        render_decimal: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate the kernel `K^[n](x, y)`.
    Kernel {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: usize,
        /// `"x1,x2"`
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// `"y1,y2"`
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long)]
        render_decimal: bool,
    },
}

fn fail(e: &Error) -> u8 {
    eprintln!("error: {e}");
    match e {
        Error::Breakdown { .. } => EXIT_BREAKDOWN as u8,
        _ => EXIT_CONFIG as u8,
    }
}

fn print(text: &str) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn verify_options(cfg: &RunConfig, seed: Option<u64>) -> VerifyOptions {
    VerifyOptions {
        seed: seed.unwrap_or(cfg.seed),
        eval_points: cfg.eval_points.clone(),
        ..Default::default()
    }
}

#[allow(clippy::too_many_arguments)]
fn compute(
    config: &Path,
    depth: Option<usize>,
    out: Option<PathBuf>,
    format: Option<FormatArg>,
    seed: Option<u64>,
    render_decimal: bool,
    timing: bool,
) -> Result<u8, Error> {
    let cfg = RunConfig::load(config)?;
    let depth = depth.unwrap_or(cfg.depth);
    let checks = cfg.checks.clone().unwrap_or_default();
    let opts = RunOptions {
        verify: verify_options(&cfg, seed),
        render_decimal,
        timing,
    };
    let (report, ws) = run_perturbed(cfg.measures.clone(), depth, &cfg.perturbations(), &checks, &opts)?;
    let dir = out.or(cfg.output.clone()).unwrap_or_else(|| PathBuf::from("bimop_out"));
    std::fs::create_dir_all(&dir)?;
    if let Some(ws) = ws {
        let format = match format {
            Some(FormatArg::Json) => Format::Json,
            Some(FormatArg::Csv) => Format::Csv,
            None => cfg.format,
        };
        write_exports(&ws, &cfg.exports, &dir, ExportOptions { format, render_decimal })?;
    }
    let text = report.to_json();
    std::fs::write(dir.join("report.json"), &text)?;
    print(&text)?;
    Ok(report.exit_code() as u8)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    config: &Path,
    checks: Option<String>,
    seed: Option<u64>,
    depth: Option<usize>,
    out: Option<PathBuf>,
    render_decimal: bool,
    timing: bool,
) -> Result<u8, Error> {
    let cfg = RunConfig::load(config)?;
    let kinds = match checks {
        Some(list) => parse_checks(&list)?,
        None => cfg.checks.clone().unwrap_or_else(|| CheckKind::ALL.to_vec()),
    };
    let opts = RunOptions {
        verify: verify_options(&cfg, seed),
        render_decimal,
        timing,
    };
    let (report, _) = run_perturbed(cfg.measures.clone(), depth.unwrap_or(cfg.depth), &cfg.perturbations(), &kinds, &opts)?;
    let text = report.to_json();
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join("report.json"), &text)?;
    }
    print(&text)?;
    Ok(report.exit_code() as u8)
}

#[derive(Serialize)]
struct KernelEntry {
    n: usize,
    x: [String; 2],
    y: [String; 2],
    matrix: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct KernelJson {
    schema_version: u32,
    kind: &'static str,
    kernels: Vec<KernelEntry>,
}

fn pair(p: &Point) -> [String; 2] {
    [format_rational(&p.0), format_rational(&p.1)]
}

fn kernel(config: &Path, n: usize, x: &str, y: &str, render_decimal: bool) -> Result<u8, Error> {
    let cfg = RunConfig::load(config)?;
    let (x, y) = (parse_point(x)?, parse_point(y)?);
    let ws = Workspace::build(cfg.measures.clone(), cfg.depth.max(n + 1))?;
    let k = kernel_eval(&ws.a, &ws.b, n, &x, &y);
    let cells = |f: fn(&bimop::Rational) -> String| -> Vec<Vec<String>> {
        k.to_rows().iter().map(|r| r.iter().map(f).collect()).collect()
    };
    let doc = KernelJson {
        schema_version: SCHEMA_VERSION,
        kind: "kernel",
        kernels: vec![KernelEntry {
            n,
            x: pair(&x),
            y: pair(&y),
            matrix: cells(format_rational),
            decimal: render_decimal.then(|| cells(to_decimal)),
        }],
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    print(&text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Compute { config, depth, out, format, seed, render_decimal, timing } => {
            compute(&config, depth, out, format, seed, render_decimal, timing)
        }
        Command::Verify { config, checks, seed, depth, out, render_decimal, timing } => {
            verify(&config, checks, seed, depth, out, render_decimal, timing)
        }
        Command::Kernel { config, n, x, y, render_decimal } => kernel(&config, n, &x, &y, render_decimal),
    };
    ExitCode::from(result.unwrap_or_else(|e| fail(&e)))
}
