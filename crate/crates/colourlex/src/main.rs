use clap::Parser;

use colourlex::cli::{self, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| cli::execute(cli));
    std::process::exit(match outcome {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            cli::exit_code(&e)
        }
        Err(_) => 1,
    });
}
