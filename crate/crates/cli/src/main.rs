use std::process::ExitCode;

use clap::Parser;

use geodetic_cli::{render_human, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json_requested();
    match run(&cli) {
        Ok(report) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serialises")
                );
            } else {
                print!("{}", render_human(&report));
            }
            ExitCode::from(u8::try_from(report.exit_status).unwrap_or(1))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
