use clap::Parser;

fn main() {
    let cli = xxcrit_cli::args::Cli::parse();
    if let Err(e) = xxcrit_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
