use std::process::ExitCode;

use clap::Parser;
use theta_units::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let s = if cli.json {
                render::json(&out.doc)
            } else {
                render::text(&out.doc)
            };
            print!("{s}");
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
