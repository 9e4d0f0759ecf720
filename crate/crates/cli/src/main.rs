use clap::Parser;

use minionlab_cli::{execute, failure::code, Cli};

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if n == 0 {
            eprintln!("minionlab: --threads must be positive");
            std::process::exit(code::USAGE);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("the global pool is configured once");
    }
    std::process::exit(execute(&cli));
}
