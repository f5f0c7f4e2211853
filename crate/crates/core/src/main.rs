use clap::Parser;

use chainforge::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("chainforge: {e}");
        std::process::exit(e.exit_code());
    }
}
