//! Batch front end: a session script goes in, one report line per command
//! comes out. Exit codes: 0 all commands succeeded, 1 a command or
//! declaration failed, 2 the script did not parse (or could not be read).

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use grmod_cli::run::{self, Flags, Format};
use grmod_cli::session;

#[derive(Parser)]
#[command(name = "grmod", version, about = "Graded module calculator over F_p quotient rings")]
struct Cli {
    /// Session script path, or '-' to read standard input
    script: String,
    /// Default certification bound for bounded computations
    #[arg(long, default_value_t = 20)]
    bound: usize,
    /// Seed for randomized searches
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report format
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Trial count for randomized isomorphism searches
    #[arg(long, default_value_t = 64)]
    trials: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = if cli.script == "-" {
        let mut buf = String::new();
        match std::io::stdin().read_to_string(&mut buf) {
            Ok(_) => buf,
            Err(e) => {
                eprintln!("parse error: cannot read standard input: {e}");
                return ExitCode::from(2);
            }
        }
    } else {
        match std::fs::read_to_string(&cli.script) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("parse error: cannot read {}: {e}", cli.script);
                return ExitCode::from(2);
            }
        }
    };
    let parsed = match session::parse_session(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("parse error: {e}");
            return ExitCode::from(2);
        }
    };
    let flags = Flags {
        bound: cli.bound,
        seed: cli.seed,
        trials: cli.trials,
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        },
    };
    let (out, code) = run::run(&parsed, &flags);
    print!("{out}");
    ExitCode::from(code as u8)
}
