use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use plusminus_cli::{run, CampaignConfig, CheckKind, CliError, Report};

#[derive(Parser)]
#[command(name = "plusminus", version, about = "Verification campaigns for plus/minus norm subgroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a campaign config and write report.json and report.csv.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated subset of trace, ranks, cyclicity, torsion, lambda, all.
        #[arg(long)]
        checks: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a report as a table on stdout.
    Table {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn verify(config: &Path, checks: Option<String>, seed: Option<u64>, out: Option<PathBuf>) -> Result<i32, CliError> {
    let mut cfg = CampaignConfig::load(config)?;
    if let Some(list) = checks {
        cfg.checks = list.split(',').map(CheckKind::parse).collect::<Result<_, _>>()?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    let dir = out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    let start = Instant::now();
    let report = run(&cfg);
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("report.json"), report.to_json())?;
    std::fs::write(dir.join("report.csv"), report.to_csv()?)?;
    let s = &report.summary;
    eprintln!(
        "{} records, {} failed ({} precision exhausted, {} gate rejected) in {:.2?}; wrote {}",
        s.records,
        s.failed,
        s.precision_exhausted,
        s.gate_rejected,
        start.elapsed(),
        dir.display()
    );
    Ok(report.exit_code())
}

fn table(path: &Path, format: Format) -> Result<i32, CliError> {
    let report = Report::from_json(&std::fs::read_to_string(path)?)?;
    let text = match format {
        Format::Csv => report.to_csv()?,
        Format::Json => report.to_json(),
        Format::Md => report.to_markdown(),
    };
    print!("{text}");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { config, checks, seed, out } => verify(&config, checks, seed, out),
        Command::Table { report, format } => table(&report, format),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
