//! `idemsum`: command-line front end for the idempotent-sum toolkit.
//!
//! Every subcommand emits one JSON object with a top-level `"pass"`. The
//! exit code is 0 when it is true, 1 when a requested check failed, and 2
//! on usage or input errors.

mod args;
mod parse;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, Format, DEFAULT_SEED};
use run::{Ctx, Outcome};

const SEED_ENV: &str = "IDEMSUM_SEED";

fn rng_seed(flag: Option<&str>) -> Result<u64, String> {
    if let Some(s) = flag {
        return s
            .trim()
            .parse()
            .map_err(|_| format!("--seed must be an unsigned integer, got {s:?}"));
    }
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_ENV} must be an unsigned integer, got {s:?}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn execute(cli: Cli) -> Result<(Outcome, u64), String> {
    // Orbit commands take a rational `--seed` and use no randomness.
    let flag = match &cli.command {
        Command::Orbit(_) => None,
        _ => cli.seed.as_deref(),
    };
    let ctx = Ctx {
        seed: rng_seed(flag)?,
    };
    let outcome = match cli.command {
        Command::Family(c) => run::family(c),
        Command::Lambda(c) => run::lambda(c),
        Command::Orbit(c) => run::orbit(c, cli.seed.as_deref()),
        Command::Equiv(c) => run::equiv(c),
        Command::Wild(c) => run::wild(c, &ctx),
        Command::Identity(c) => run::identity(c, &ctx),
        Command::Scan(c) => run::scan(c),
    }?;
    Ok((outcome, ctx.seed))
}

fn render(outcome: Outcome, seed: u64, format: Format) -> String {
    match format {
        Format::Text => format!("{}\n", outcome.text),
        Format::Json => {
            let mut obj = outcome.body;
            obj.insert("command".into(), json!(outcome.command));
            // Orbit reports carry their rational seed already.
            obj.entry("seed").or_insert(json!(seed));
            obj.insert(
                "tool".into(),
                json!(concat!("idemsum ", env!("CARGO_PKG_VERSION"))),
            );
            obj.insert("pass".into(), json!(outcome.pass));
            let mut s =
                serde_json::to_string_pretty(&Value::Object(obj)).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2));
        }
    };
    let format = cli.format;
    match execute(cli) {
        Ok((outcome, seed)) => {
            let pass = outcome.pass;
            let text = render(outcome, seed, format);
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("idemsum: error: {msg}");
            ExitCode::from(2)
        }
    }
}
