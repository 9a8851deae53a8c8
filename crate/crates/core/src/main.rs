use clap::Parser;

use regdessin::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let code = run(&config, &mut std::io::stdout().lock());
    std::process::exit(code);
}
