use std::process::ExitCode;

use clap::Parser;
use divpow_cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(config) => config,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = match run(&config) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = serde_json::to_string(&report).expect("report serializes");
    if let Some(path) = &config.output {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if config.pretty {
        print!("{}", report.render());
    } else if config.output.is_none() {
        println!("{json}");
    }
    ExitCode::from(if report.passed { 0 } else { 1 })
}
