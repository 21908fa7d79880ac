use std::process::ExitCode;

use clap::Parser;
use gse_lab::{io, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| io::emit(&o.json, cli.out.as_deref()).map(|()| o.code));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
