use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use schwarz_verify::catalog::{catalog, render_text};
use schwarz_verify::config::{OutputFormat, SuiteConfig};
use schwarz_verify::report::write_atomic;
use schwarz_verify::runner::run_suite;

#[derive(Parser)]
#[command(name = "verify", version, about = "Numerical verification of Schwarz-type inequalities on Kähler model spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenarios of a suite file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Print the metric, map, theorem and check ids with their parameters.
    ListModels {
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in core suite.
    PaperCore {
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Args)]
struct RunOpts {
    /// Report path; the report goes to stdout when neither this nor the
    /// suite's `output` is set.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Overrides the suite seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; all cores by default.
    #[arg(long)]
    jobs: Option<usize>,
}

fn execute(mut config: SuiteConfig, opts: RunOpts) -> ExitCode {
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    let format = opts.format.unwrap_or(config.format);
    let out = opts.out.or_else(|| config.output.clone());
    let report = run_suite(config, opts.jobs);
    let rendered = match format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Text => report.to_text(),
    };
    let s = &report.summary;
    match out {
        Some(path) => {
            if let Err(e) = write_atomic(&path, &rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            println!(
                "{}: {} scenarios, {} pass, {} fail, {} inconclusive, {} error; report in {}",
                report.suite,
                s.total,
                s.pass,
                s.fail,
                s.inconclusive,
                s.error,
                path.display()
            );
        }
        None => print!("{rendered}"),
    }
    if s.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, opts } => match SuiteConfig::load(&config) {
            Ok(cfg) => execute(cfg, opts),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::PaperCore { opts } => execute(schwarz_verify::core_suite(), opts),
        Command::ListModels { json } => {
            let cat = catalog();
            if json {
                println!("{}", serde_json::to_string_pretty(&cat).expect("catalog serializes"));
            } else {
                print!("{}", render_text(&cat));
            }
            ExitCode::SUCCESS
        }
    }
}
