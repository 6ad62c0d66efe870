//! `earring`: command-line access to the semicovering oracles.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use earring_core::Oracle;
use serde::Serialize;
use serde_json::Value;

use commands::{run, Command};

const EXIT_USAGE: u8 = 1;
const EXIT_VIOLATION: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "earring", version, about = "Oracles for a core-free semicovering of the Hawaiian Earring")]
struct Cli {
    /// Print a single JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Ok,
    Error,
}

#[derive(Serialize)]
struct CommandResult {
    command: String,
    input: Value,
    output: Value,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

// Write errors (a closed pipe, say) are ignored rather than panicking.
fn emit(json: bool, result: &CommandResult, text: &str) {
    let mut stdout = std::io::stdout().lock();
    if json {
        let _ = writeln!(stdout, "{}", serde_json::to_string(result).expect("result serializes"));
        return;
    }
    if !text.is_empty() {
        let _ = writeln!(stdout, "{text}");
    }
    if let Some(message) = &result.message {
        eprintln!("error: {message}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            if std::env::args().any(|a| a == "--json") {
                let result = CommandResult {
                    command: std::env::args().nth(1).unwrap_or_default(),
                    input: Value::Null,
                    output: Value::Null,
                    status: Status::Error,
                    message: Some(err.kind().to_string()),
                };
                emit(true, &result, "");
            } else {
                let _ = err.print();
            }
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let oracle = Oracle::from_env();
    let input = serde_json::to_value(&cli.command).expect("arguments serialize");
    let command = cli.command.name().to_string();
    let (result, text, code) = match run(&oracle, &cli.command) {
        Ok(outcome) => {
            let code = if outcome.violation.is_some() { EXIT_VIOLATION } else { 0 };
            let status = if code == 0 { Status::Ok } else { Status::Error };
            let result = CommandResult {
                command,
                input,
                output: outcome.output,
                status,
                message: outcome.violation,
            };
            (result, outcome.text, code)
        }
        Err(err) => {
            let result = CommandResult {
                command,
                input,
                output: Value::Null,
                status: Status::Error,
                message: Some(err.to_string()),
            };
            (result, String::new(), EXIT_USAGE)
        }
    };
    emit(cli.json, &result, &text);
    ExitCode::from(code)
}
