use std::io;
use std::process::ExitCode;

use sgtree::cli::{self, Env};

fn main() -> ExitCode {
    let env = match Env::from_process() {
        Ok(env) => env,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(cli::EXIT_USAGE as u8);
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = cli::run(std::env::args_os(), env, &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code as u8)
}
