use clap::Parser;

use dilates::Error as CoreError;
use dilates_cli::{run, Cli, CliError};

fn main() {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(CoreError::TheoremViolation { witness, .. }) = &e {
                if let Ok(json) = serde_json::to_string(witness) {
                    eprintln!("witness: {json}");
                }
            }
            e.exit_code()
        }
    };
    std::process::exit(code);
}
