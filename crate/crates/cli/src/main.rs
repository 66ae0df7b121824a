use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rauzylab::commands::{
    cmd_analyze, cmd_bounds, cmd_evolve, cmd_rauzy, cmd_verify, CommandOutput, GraphFormat, Suite,
    TableFormat,
};
use rauzylab::input::InputWord;
use rauzylab::{precision_digits, CliError};

/// Subword complexity, Rauzy graph evolution and repetition analysis for
/// low-complexity infinite words.
#[derive(Parser)]
#[command(name = "rauzylab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the artifact to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Complexity profile: p(n), r(n), special-factor counts
    Analyze {
        /// Word source spec (periodic:, eventually:, sturmian:, subst:,
        /// rational:, concat:, file:)
        #[arg(long)]
        source: String,
        /// Materialized prefix length
        #[arg(long, default_value_t = 20_000)]
        horizon: usize,
        /// Highest level n to tabulate
        #[arg(long, default_value_t = 50)]
        nmax: usize,
        /// csv or json
        #[arg(long, default_value = "csv")]
        format: String,
        /// Include special-factor inventories in JSON output
        #[arg(long)]
        inventories: bool,
        /// Assert the growth dichotomy; violations exit 2
        #[arg(long)]
        assert_mh: bool,
    },
    /// Rauzy graph of one level (DOT or JSON)
    Rauzy {
        #[arg(long)]
        source: String,
        #[arg(long, default_value_t = 20_000)]
        horizon: usize,
        /// Graph level n
        #[arg(long)]
        level: usize,
        /// Emit the reduced graph (recurrent part)
        #[arg(long)]
        reduced: bool,
        /// Emit the full graph with reduction-removed elements dashed
        #[arg(long)]
        diff: bool,
        /// dot or json
        #[arg(long, default_value = "dot")]
        format: String,
    },
    /// Evolution trace of ∞-shape configurations with check verdicts
    Evolve {
        #[arg(long)]
        source: String,
        #[arg(long, default_value_t = 20_000)]
        horizon: usize,
        #[arg(long, default_value_t = 40)]
        nmax: usize,
    },
    /// Run an assertion suite; violations exit 2
    Verify {
        /// mh, thm2, lemmas or all
        #[arg(long)]
        suite: String,
        #[arg(long)]
        source: String,
        #[arg(long, default_value_t = 20_000)]
        horizon: usize,
        #[arg(long, default_value_t = 40)]
        nmax: usize,
    },
    /// Tabulate a bound curve as CSV
    Bounds {
        /// pisa-liminf, pisa-limsup, pisabis-liminf, pisabis-limsup,
        /// thm1, thm2-rep, thm2-mu, delta
        #[arg(long)]
        curve: String,
        /// Single parameter value (rational like 2, 11/5 or 2.2)
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        #[arg(long)]
        step: Option<String>,
    },
}

fn run(cli: Cli) -> Result<CommandOutput, CliError> {
    match cli.command {
        Command::Analyze { source, horizon, nmax, format, inventories, assert_mh } => {
            let format = match format.as_str() {
                "csv" => TableFormat::Csv,
                "json" => TableFormat::Json,
                other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
            };
            let input = InputWord::resolve(&source)?;
            cmd_analyze(&input, horizon, nmax, format, inventories, assert_mh)
        }
        Command::Rauzy { source, horizon, level, reduced, diff, format } => {
            let format = match format.as_str() {
                "dot" => GraphFormat::Dot,
                "json" => GraphFormat::Json,
                other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
            };
            let input = InputWord::resolve(&source)?;
            cmd_rauzy(&input, horizon, level, reduced, diff, format)
        }
        Command::Evolve { source, horizon, nmax } => {
            let input = InputWord::resolve(&source)?;
            cmd_evolve(&input, horizon, nmax)
        }
        Command::Verify { suite, source, horizon, nmax } => {
            let suite = Suite::parse(&suite)?;
            let input = InputWord::resolve(&source)?;
            cmd_verify(&input, suite, horizon, nmax)
        }
        Command::Bounds { curve, at, from, to, step } => cmd_bounds(
            &curve,
            at.as_deref(),
            from.as_deref(),
            to.as_deref(),
            step.as_deref(),
            precision_digits(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output_path = cli.output.clone();
    match run(cli) {
        Ok(out) => {
            let write_result = match &output_path {
                Some(path) => fs::write(path, &out.text).map_err(|e| format!("{path}: {e}")),
                None => std::io::stdout()
                    .write_all(out.text.as_bytes())
                    .map_err(|e| format!("stdout: {e}")),
            };
            if let Err(e) = write_result {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if out.violations > 0 {
                eprintln!("error: {} check(s) violated", out.violations);
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
