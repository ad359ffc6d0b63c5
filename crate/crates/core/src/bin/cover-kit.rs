use clap::Parser;

fn main() {
    let cli = cover_kit::cli::Cli::parse();
    std::process::exit(cover_kit::cli::run(cli));
}
