mod cmd;
mod error;
mod manifest;
mod output;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use cmd::beta::BetaCmd;
use cmd::collapse::CollapseCmd;
use cmd::corpus::CorpusCmd;
use cmd::dovetail::DovetailArgs;
use cmd::run::RunArgs;
use cmd::universe::UniverseCmd;
use cmd::Ctx;
use error::CliError;
use manifest::Manifest;
use output::Format;

/// Turing machines, β-function coding, dovetailed search and horizon
/// machines from the command line.
///
/// Records go to stdout; one manifest line (and any error line) goes to
/// stderr as JSON.
#[derive(Parser, Debug)]
#[command(name = "gu", version)]
struct Cli {
    #[arg(
        long,
        global = true,
        value_enum,
        env = "GU_FORMAT",
        default_value = "csv"
    )]
    format: Format,
    /// Seed for randomized corpus generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a machine with loop detection. Exit 0 halted, 2 loop, 3 budget.
    Run(RunArgs),
    #[command(subcommand)]
    Beta(BetaCmd),
    /// Interleave searches fairly and report the first success.
    Dovetail(DovetailArgs),
    #[command(subcommand)]
    Universe(UniverseCmd),
    #[command(subcommand)]
    Collapse(CollapseCmd),
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Run(_) => "run",
            Command::Beta(_) => "beta",
            Command::Dovetail(_) => "dovetail",
            Command::Universe(_) => "universe",
            Command::Collapse(_) => "collapse",
            Command::Corpus(_) => "corpus",
        }
    }
}

fn dispatch(command: &Command, ctx: &mut Ctx) -> Result<i32, CliError> {
    match command {
        Command::Run(a) => cmd::run::exec(a, ctx),
        Command::Beta(c) => cmd::beta::exec(c, ctx),
        Command::Dovetail(a) => cmd::dovetail::exec(a, ctx),
        Command::Universe(c) => cmd::universe::exec(c, ctx),
        Command::Collapse(c) => cmd::collapse::exec(c, ctx),
        Command::Corpus(c) => cmd::corpus::exec(c, ctx),
    }
}

fn report_error(err: &CliError) {
    let line = json!({ "error": { "code": err.code(), "message": err.to_string() } });
    eprintln!("{line}");
}

fn main() -> ExitCode {
    let mut manifest = Manifest::default();
    let code = match Cli::try_parse() {
        Ok(cli) => {
            manifest.subcommand = cli.command.name().to_owned();
            manifest.seed = cli.seed;
            manifest.input("format", format!("{:?}", cli.format).to_lowercase());
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            let mut ctx = Ctx {
                format: cli.format,
                manifest,
                out: &mut out,
            };
            let result = dispatch(&cli.command, &mut ctx);
            manifest = ctx.manifest;
            let result = result.and_then(|c| out.flush().map(|_| c).map_err(CliError::from));
            match result {
                Ok(c) => c,
                Err(e) => {
                    report_error(&e);
                    manifest.outcome = format!("error {}", e.code());
                    1
                }
            }
        }
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            manifest.outcome = "help".to_owned();
            0
        }
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_owned();
            report_error(&CliError::Usage(first));
            manifest.outcome = "error E_USAGE".to_owned();
            1
        }
    };
    eprintln!("{}", manifest.to_line());
    ExitCode::from(code as u8)
}
