use std::process::ExitCode;

use actevo_cli::{error_status, execute, status, timestamp, Cli};
use anyhow::Context;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.output();
    let report = match execute(&cli) {
        Ok(mut r) => {
            if !out.no_timestamp {
                r.timestamp = Some(timestamp());
            }
            r
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(error_status(&e));
        }
    };
    let written = out.render(&report).and_then(|text| match &out.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(actevo_cli::exit::INPUT);
    }
    let code = status(&report);
    if code != actevo_cli::exit::OK {
        eprintln!(
            "{} exact and {} statistical check failures",
            report.exact_failures(),
            report.statistical_failures()
        );
    }
    ExitCode::from(code)
}
