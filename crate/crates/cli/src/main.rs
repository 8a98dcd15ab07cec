mod args;
mod commands;
mod render;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Output};
use commands::{run, Limits, Report};

const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn emit_error(output: Output, kind: &str, message: &str) {
    match output {
        Output::Json => println!("{}", json!({ "error": { "kind": kind, "message": message } })),
        Output::Text => eprintln!("error ({kind}): {message}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text_requested = std::env::args().collect::<Vec<_>>().windows(2).any(|w| w[0] == "--output" && w[1] == "text");
            let output = if text_requested { Output::Text } else { Output::Json };
            let full = e.to_string();
            let message = full.lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            emit_error(output, "usage", &message);
            if output == Output::Json {
                eprint!("{e}");
            }
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let result = Limits::from_env().and_then(|limits| run(cli.command, &limits));
    match result {
        Ok(Report { body, verdict, bound }) => {
            match cli.output {
                Output::Json => println!("{}", serde_json::to_string_pretty(&body).expect("reports are valid JSON")),
                Output::Text => print!("{}", render::text(&body)),
            }
            if bound {
                ExitCode::from(EXIT_RESOURCE)
            } else if verdict == Some(false) {
                ExitCode::from(EXIT_FALSE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            emit_error(cli.output, e.kind(), &e.to_string());
            ExitCode::from(if e.is_resource() { EXIT_RESOURCE } else { EXIT_USAGE })
        }
    }
}
