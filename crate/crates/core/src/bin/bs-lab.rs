use std::path::PathBuf;
use std::process::ExitCode;

use bs_lab::cli::{parse_config, run, CliError, CONFIG_ENV};

fn main() -> ExitCode {
    let env_config = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let result = parse_config(std::env::args_os(), env_config.as_deref())
        .and_then(|config| run(&config, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Help(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("bs-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
