use clap::Parser;

fn main() {
    let cli = eegtf_cli::args::Cli::parse();
    if let Err(e) = eegtf_cli::run(cli) {
        // One line, machine-parsable: "error: <context>: <cause>".
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
