mod args;
mod commands;
mod error;
mod io;
mod manifest;
mod schema;
mod sweep;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use error::CliError;
use io::{write_file, Inputs};
use manifest::RunManifest;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli, argv) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn execute(cli: &Cli, argv: Vec<String>) -> Result<bool, CliError> {
    if let Some(w) = cli.global.workers {
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().map_err(|e| CliError::usage(format!("--workers: {e}")))?;
    }
    let mut inputs = Inputs::default();
    let out = commands::run(&cli.command, &cli.global, &mut inputs)?;
    let pretty = serde_json::to_string_pretty(&out.json).expect("serialisable") + "\n";
    if cli.global.json {
        print!("{pretty}");
    } else {
        print!("{}", out.text);
    }
    if let Some(dir) = &cli.global.out_dir {
        let name = cli.command.name();
        write_file(dir, &format!("{name}.json"), &pretty)?;
        for (file, contents) in &out.files {
            write_file(dir, file, contents)?;
        }
        let params = serde_json::to_value(cli).expect("serialisable");
        let manifest = RunManifest::new(name, argv, params, cli.global.seed, inputs.digests);
        write_file(dir, "manifest.json", &(serde_json::to_string_pretty(&manifest).expect("serialisable") + "\n"))?;
    }
    Ok(out.pass)
}
