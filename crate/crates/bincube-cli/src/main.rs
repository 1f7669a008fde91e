//! Batch verification front end: one suite per family of checks, reports
//! and certificates as canonical JSON, figure data as CSV.
//!
//! Exit codes: 0 all checks passed, 1 a mathematical check failed,
//! 2 usage error, 3 numerical failure.

mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bincube::report::canonical_json;
use bincube::Error;
use clap::{Parser, ValueEnum};
use serde::Serialize;

use suites::{SuiteOutput, SuiteParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Regions,
    Twopoint,
    Fourpoint,
    Certify,
    Energy,
    Hy,
    Young,
    Entropy,
    Triadic,
    Figures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Verification suites for sharp Fourier inequalities on binary cubes.
#[derive(Debug, Parser)]
#[command(name = "bincube", version, about)]
struct Cli {
    /// Which verification suite to run.
    #[arg(long, value_enum)]
    suite: Suite,

    /// Exponents q (comma separated).
    #[arg(long, value_delimiter = ',')]
    q: Vec<f64>,

    /// Exponents p (comma separated); defaults to the endpoint curve.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,

    /// Energy orders kappa (comma separated).
    #[arg(long, value_delimiter = ',')]
    kappa: Vec<f64>,

    /// Largest cube dimension to draw instances from.
    #[arg(long)]
    dim: Option<u32>,

    /// Grid size for the bound checks.
    #[arg(long)]
    grid: Option<usize>,

    /// Number of random instances in sweep suites.
    #[arg(long)]
    count: Option<usize>,

    /// Sample budget for the quasi-Monte Carlo paths.
    #[arg(long)]
    samples: Option<u64>,

    /// Seed for all randomized sweeps (env: BINCUBE_SEED).
    #[arg(long)]
    seed: Option<u64>,

    /// Tolerance override where a suite accepts one (triadic bisection
    /// tolerance, certify node threshold).
    #[arg(long)]
    tol: Option<f64>,

    /// Points per axis for figure data.
    #[arg(long)]
    resolution: Option<u32>,

    /// Cube-set file (one binary mask per line) for the energy suite.
    #[arg(long)]
    set: Option<PathBuf>,

    /// Output path: a file for reports, a directory for figure data.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format for data files.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Serialize)]
struct Document<'a> {
    schema_version: u32,
    suite: &'a str,
    reports: &'a [bincube::Report],
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    certificates: &'a [bincube::certify::GridCertificate],
}

fn env_seed() -> u64 {
    std::env::var("BINCUBE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(bincube::integrate::DEFAULT_SEED)
}

fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Regions => "regions",
        Suite::Twopoint => "twopoint",
        Suite::Fourpoint => "fourpoint",
        Suite::Certify => "certify",
        Suite::Energy => "energy",
        Suite::Hy => "hy",
        Suite::Young => "young",
        Suite::Entropy => "entropy",
        Suite::Triadic => "triadic",
        Suite::Figures => "figures",
    }
}

fn run(cli: &Cli) -> bincube::Result<SuiteOutput> {
    let set_text = match &cli.set {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?,
        ),
        None => None,
    };
    let params = SuiteParams {
        q_list: cli.q.clone(),
        p_list: cli.p.clone(),
        kappa_list: cli.kappa.clone(),
        dim: cli.dim,
        grid: cli.grid,
        count: cli.count,
        samples: cli.samples,
        seed: cli.seed.unwrap_or_else(env_seed),
        tol: cli.tol,
        resolution: cli.resolution,
        set_text,
    };
    match cli.suite {
        Suite::Regions => suites::run_regions(&params),
        Suite::Twopoint => suites::run_twopoint(&params),
        Suite::Fourpoint => suites::run_fourpoint(&params),
        Suite::Certify => suites::run_certify(&params),
        Suite::Energy => suites::run_energy(&params),
        Suite::Hy => suites::run_hy(&params),
        Suite::Young => suites::run_young(&params),
        Suite::Entropy => suites::run_entropy(&params),
        Suite::Triadic => suites::run_triadic(&params),
        Suite::Figures => suites::run_figures(&params),
    }
}

fn emit(cli: &Cli, output: &SuiteOutput) -> std::io::Result<()> {
    // figure/table data lands next to the reports
    if !output.data_files.is_empty() {
        let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
        if cli.suite == Suite::Figures || cli.format == Format::Csv {
            std::fs::create_dir_all(&dir)?;
            for (name, body) in &output.data_files {
                std::fs::write(dir.join(name), body)?;
                eprintln!("wrote {}", dir.join(name).display());
            }
        }
    }
    if cli.suite == Suite::Figures {
        return Ok(());
    }
    let doc = Document {
        schema_version: bincube::report::SCHEMA_VERSION,
        suite: suite_name(cli.suite),
        reports: &output.reports,
        certificates: &output.certificates,
    };
    let body = canonical_json(&doc);
    match &cli.out {
        Some(path) if cli.suite != Suite::Figures && cli.format == Format::Json => {
            std::fs::write(path, body)
        }
        _ => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            if let Err(e) = emit(&cli, &output) {
                eprintln!("error: failed to write output: {e}");
                return ExitCode::from(3);
            }
            if output.all_passed() {
                ExitCode::SUCCESS
            } else {
                eprintln!("violation: at least one check failed");
                ExitCode::from(1)
            }
        }
        Err(e @ (Error::Usage(_) | Error::Domain(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
