use std::process::ExitCode;

fn main() -> ExitCode {
    let config = match femvar::cli::parse_config(std::env::args_os()) {
        Ok(config) => config,
        Err(err) => err.exit(),
    };
    match femvar::cli::run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
