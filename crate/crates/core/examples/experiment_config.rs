//! Drives a full experiment from a JSON config, as the `check` subcommand
//! does, and prints where the artifacts went.
//!
//!     cargo run --example experiment_config [path/to/config.json]

use nonexp_fp::cli::{self, ExperimentConfig};

const DEFAULT: &str = include_str!("configs/disk_projection.json");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let exp = ExperimentConfig::from_json(&text)?.build()?;
    let dir = std::env::temp_dir().join("nonexp_fp_experiment");
    let outcome = cli::check(&exp, &dir)?;
    for r in &outcome.reports {
        println!(
            "{:<20} pass = {:<5} expected = {:<5} worst = {:.3e}",
            r.name, r.pass, r.expected_pass, r.worst_value
        );
    }
    println!("artifacts: {:#?}", outcome.artifacts);
    println!("exit code would be {}", outcome.exit_code());
    Ok(())
}
