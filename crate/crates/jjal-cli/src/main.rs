use clap::Parser;

use jjal_cli::args::Cli;

fn main() {
    // recorded verbatim in the result document for provenance
    let echo: String = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let cli = Cli::parse();
    if let Err(e) = jjal_cli::run(cli, echo) {
        let category = e.category();
        eprintln!("error[{}]: {e}", category.name());
        std::process::exit(category.code());
    }
}
