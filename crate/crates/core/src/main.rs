use clap::Parser;

fn main() {
    let cli = entgap::cli::Cli::parse();
    std::process::exit(entgap::cli::run(cli));
}
