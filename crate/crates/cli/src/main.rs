use clap::Parser;
use kdq_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = kdq_cli::run(&cli) {
        eprintln!("kdq: {e}");
        std::process::exit(e.exit_code());
    }
}
