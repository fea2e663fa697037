use std::io::Write;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use qicops::commands::{self, outcome_status, parse_variant, summary, RunArgs};
use qicops::error::{bad, CliError};
use qicops::serve::{serve, ServeArgs};
use qicops::specs::{CopSpec, EvaderSettings};
use qicops_core::homothety::SampleSpec;

#[derive(Parser)]
#[command(name = "qicops", version, about = "Cops and robber games on Cayley graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Game {
    /// grid:<n>, gridvar:<m>, lamp:<q>[:<j>], lamptable:<file>[:<j>], bs:<m>, line, free-tree:<rank>
    #[arg(long)]
    space: String,
    /// weak or strong
    #[arg(long, default_value = "strong")]
    variant: String,
    #[arg(long)]
    robber: String,
    #[arg(long)]
    horizon: u64,
    #[arg(long)]
    seed: u64,
    /// Trace output (JSON lines)
    #[arg(long)]
    trace: Option<String>,
    /// Speed of the greedy evader
    #[arg(long, default_value_t = 3)]
    psi: u64,
    /// Treasure radius of the greedy evader
    #[arg(long = "R", default_value_t = 10)]
    radius: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game
    Run {
        #[command(flatten)]
        game: Game,
        /// greedy:<n>, random:<n>, pusher:<n>, scripted:<trace>
        #[arg(long)]
        cops: String,
        #[arg(long, default_value_t = 1)]
        sigma: u64,
        #[arg(long, default_value_t = 1)]
        rho: u64,
        /// Stop at the first failed runtime assertion
        #[arg(long)]
        fail_fast: bool,
    },
    /// Re-simulate a trace and re-check its captures
    Replay {
        trace: String,
        /// Also re-scan captures with this reach
        #[arg(long)]
        recheck_reach: Option<u64>,
    },
    /// Check the quasi-homothety inequalities of a family
    Verify {
        /// z2:<ρ1>,<ρ2>,..., lamplighter:<q>, or a family file
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        j: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        radius: u64,
        #[arg(long, default_value_t = 20_000)]
        exhaustive_limit: usize,
        #[arg(long, default_value_t = 8)]
        random_radius: u64,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Widest geodesic bigon inside a ball
    Scan {
        #[arg(long)]
        space: String,
        #[arg(long)]
        radius: u64,
    },
    /// Horizontal displacement in a Baumslag-Solitar space
    Hd {
        #[arg(long)]
        space: String,
        #[arg(long = "H")]
        height: u64,
        #[arg(long)]
        reach: u64,
        /// Print a CSV table for all H ≤ --H and 1 ≤ reach ≤ --reach
        #[arg(long)]
        csv: bool,
    },
    /// Serve games to remote cop clients over newline-delimited JSON
    Serve {
        #[command(flatten)]
        game: Game,
        #[arg(long, default_value = "127.0.0.1:7878")]
        addr: String,
        /// remote[:<n>]
        #[arg(long, default_value = "remote:1")]
        cops: String,
        /// Seconds to wait for a client message
        #[arg(long, default_value_t = 300)]
        timeout: u64,
        /// Exit after one game, with its status
        #[arg(long)]
        once: bool,
    },
}

/// Writes to stdout; a reader that went away (`| head`) is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print(report: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(report).expect("reports serialize")));
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    let (report, status) = match cmd {
        Command::Run { game, cops, sigma, rho, fail_fast } => commands::cmd_run(&RunArgs {
            space: game.space,
            variant: game.variant,
            cops,
            robber: game.robber,
            horizon: game.horizon,
            seed: game.seed,
            trace: game.trace,
            fail_fast,
            sigma,
            rho,
            evader: EvaderSettings { psi: game.psi, radius: game.radius },
        })?,
        Command::Replay { trace, recheck_reach } => commands::cmd_replay(&trace, recheck_reach)?,
        Command::Verify { family, j, radius, exhaustive_limit, random_radius, pairs, seed } => {
            let spec = SampleSpec { radius, exhaustive_limit, random_radius, random_pairs: pairs, seed };
            commands::cmd_verify(&family, &j, &spec)?
        }
        Command::Scan { space, radius } => commands::cmd_scan(&space, radius)?,
        Command::Hd { space, height, reach, csv: true } => {
            emit(&commands::hd_table(&space, height, reach)?);
            return Ok(0);
        }
        Command::Hd { space, height, reach, csv: false } => commands::cmd_hd(&space, height, reach)?,
        Command::Serve { game, addr, cops, timeout, once } => {
            let CopSpec::Remote(n) = CopSpec::parse(&cops)? else {
                return Err(bad("serve plays remote cops only: --cops remote[:<n>]"));
            };
            let args = ServeArgs {
                addr,
                space: game.space,
                variant: parse_variant(&game.variant)?,
                cops: n,
                robber: game.robber,
                horizon: game.horizon,
                seed: game.seed,
                trace: game.trace,
                evader: EvaderSettings { psi: game.psi, radius: game.radius },
                timeout: (timeout > 0).then(|| Duration::from_secs(timeout)),
                once,
            };
            match serve(args)? {
                Some(trace) => (summary(&trace), outcome_status(&trace)),
                None => return Ok(0),
            }
        }
    };
    print(&report);
    Ok(status)
}

fn main() -> ExitCode {
    // Usage errors share the bad-spec status; clap's default 2 means "captured" here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { qicops::error::exit::BAD_SPEC as u8 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("qicops: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
