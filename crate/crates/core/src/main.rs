use clap::Parser;

fn main() {
    let cli = akgeo::cli::Cli::parse();
    std::process::exit(akgeo::cli::run(&cli));
}
