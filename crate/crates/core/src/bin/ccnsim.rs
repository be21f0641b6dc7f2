use clap::Parser;

use ccnsim::cli::{env_seed, main_with, Cli};

fn main() {
    let cli = Cli::parse();
    let seed = env_seed();
    let code = main_with(&cli, seed.as_deref(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
