use clap::Parser;

fn main() {
    let cli = charlift::cli::Cli::parse();
    std::process::exit(charlift::cli::run(cli));
}
