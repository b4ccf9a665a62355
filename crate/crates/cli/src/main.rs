use clap::Parser;
use qgrowth_cli::{execute, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    std::process::exit(execute(&cfg));
}
