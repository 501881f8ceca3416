use std::process::ExitCode;

use riordan_cli::{execute, parse_args, render, EXIT_USAGE};

fn main() -> ExitCode {
    let req = match parse_args(std::env::args_os().skip(1)) {
        Ok(req) => req,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let report = match execute(&req) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.status() as u8);
        }
    };
    let text = render(&report.output, req.options.format);
    match &req.options.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.status as u8)
}
