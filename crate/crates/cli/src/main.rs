use clap::Parser;
use novelty_cli::{run, Cli, EXIT_OK};

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("novelty: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
