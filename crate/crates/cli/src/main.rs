use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fibratrix_cli::{failure_document, parse_document, run, summary, JobError, JobSpec, Overrides};

/// Matrix representations and fiber classification for rational surfaces.
#[derive(Parser, Debug)]
#[command(name = "fibratrix", version)]
struct Cli {
    /// validate | matrix | nu0 | membership | fiber | preimage | fiber-curve |
    /// sat-elements | stratify | minors | pullback-minors
    command: String,
    /// Job document (JSON or key = value lines); `-` or absent reads standard input.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["nu1", "nu2"])]
    nu: Option<u32>,
    #[arg(long, requires = "nu2")]
    nu1: Option<u32>,
    #[arg(long, requires = "nu1")]
    nu2: Option<u32>,
    /// A point such as `1:0:0:-1`; may be repeated.
    #[arg(long)]
    point: Vec<String>,
    #[arg(long)]
    fitting_index: Option<usize>,
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random source points for `stratify`.
    #[arg(long)]
    samples: Option<usize>,
    /// `q` or `fp:P`.
    #[arg(long)]
    field: Option<String>,
    /// Continue when validation fails.
    #[arg(long)]
    force: bool,
    /// Report `timing_ms` as 0.
    #[arg(long)]
    no_timing: bool,
    /// Do not print the summary on standard error.
    #[arg(long, short)]
    quiet: bool,
}

fn read_input(path: Option<&PathBuf>) -> Result<String, JobError> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p)
                .map_err(|e| JobError::parse(format!("cannot read {}: {e}", p.display())))?
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| JobError::parse(format!("cannot read standard input: {e}")))?;
        }
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        command: Some(cli.command.clone()),
        nu: cli.nu,
        nu1: cli.nu1,
        nu2: cli.nu2,
        points: cli.point.clone(),
        fitting_index: cli.fitting_index,
        limit: cli.limit,
        seed: cli.seed,
        samples: cli.samples,
        field: cli.field.clone(),
        force: cli.force,
    };
    let outcome = read_input(cli.input.as_ref())
        .and_then(|t| parse_document(&t))
        .and_then(|doc| JobSpec::from_document(&doc, &overrides))
        .map(|job| run(&job, !cli.no_timing))
        .unwrap_or_else(|e| failure_document(Some(&cli.command), &e));
    println!(
        "{}",
        serde_json::to_string_pretty(&outcome.document).expect("documents serialize")
    );
    if !cli.quiet {
        eprintln!("{}", summary(&outcome.document));
    }
    ExitCode::from(outcome.code as u8)
}
