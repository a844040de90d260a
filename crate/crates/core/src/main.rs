use clap::Parser;

fn main() {
    let cli = p100::cli::Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = p100::cli::run(cli, &mut out) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
