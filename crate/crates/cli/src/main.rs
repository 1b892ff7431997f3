use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gersten_cli::commands::{classify_document, k0_document, CommandOutcome};
use gersten_cli::{anchors, canonical_json, verify, CliError, Sabotage, SuiteConfig, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "gersten-lab", version, about = "Exact verification suites for two-term complexes over DVRs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized verification suites.
    Verify {
        #[arg(long, default_value = "Z@5")]
        ring: String,
        #[arg(long, env = "GERSTEN_LAB_SEED", default_value_t = 42)]
        seed: u64,
        /// Instances per check.
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Instances for one check, as `ANCHOR=N` (repeatable). The
        /// simplicial check defaults to 20.
        #[arg(long = "check-count", value_name = "ANCHOR=N")]
        check_counts: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 3)]
        max_val: u32,
        /// Truncation level for simplicial checks.
        #[arg(long, default_value_t = 3)]
        level: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Only run checks whose anchor starts with this prefix (repeatable).
        #[arg(long)]
        only: Vec<String>,
        /// Inject a defect into the value under test.
        #[arg(long, value_enum)]
        sabotage: Option<Sabotage>,
        /// Record wall time per check; reports are then no longer reproducible.
        #[arg(long)]
        timings: bool,
        /// Print the check anchors and exit.
        #[arg(long)]
        list: bool,
    },
    /// Classify a two-term complex given as JSON `{ranks, d[, ring]}`.
    Classify {
        file: PathBuf,
        #[arg(long)]
        ring: Option<String>,
    },
    /// Certify that `R/(f)` has class 0 in K0.
    K0 {
        #[arg(allow_hyphen_values = true)]
        element: String,
        #[arg(long, default_value = "Z@5")]
        ring: String,
    },
}

fn emit(outcome: CommandOutcome) -> i32 {
    match outcome {
        Ok(v) => {
            print!("{}", canonical_json(&v));
            EXIT_PASS
        }
        Err(v) => {
            print!("{}", canonical_json(&v));
            EXIT_FAIL
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify { ring, seed, count, check_counts, max_dim, max_val, level, format, only, sabotage, timings, list } => {
            if list {
                anchors().iter().for_each(|a| println!("{a}"));
                return Ok(EXIT_PASS);
            }
            let mut config = SuiteConfig { ring, seed, count, max_dim, max_val, level, only, sabotage, timings, ..Default::default() };
            for text in &check_counts {
                let (anchor, n) = SuiteConfig::parse_count_override(text)?;
                config.counts.insert(anchor, n);
            }
            let report = verify(&config)?;
            match format {
                Format::Json => print!("{}", canonical_json(&report.to_json())),
                Format::Markdown => print!("{}", report.to_markdown()),
            }
            Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Classify { file, ring } => {
            let text = std::fs::read_to_string(&file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
            let value = serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
            Ok(emit(classify_document(&value, ring.as_deref())?))
        }
        Command::K0 { element, ring } => Ok(emit(k0_document(&element, &ring)?)),
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gersten-lab: {e}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code as u8)
}
