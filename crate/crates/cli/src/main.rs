use std::process::ExitCode;

use clap::Parser;
use syn2real_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    match execute(&cli) {
        Ok(run) => {
            print!("{}", run.summary);
            println!("wrote {} files to {}", run.written.len(), run.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let detail = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {detail}", e.class());
            ExitCode::FAILURE
        }
    }
}
