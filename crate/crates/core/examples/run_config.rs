//! Running a CLI experiment from an in-memory TOML config.

use cayley_sieve::cli::{execute, Command, ExperimentConfig};

const CONFIG: &str = r#"
command = "gap"
generators = "elementary2"

[gap]
primes = [5, 7]
lazy = true
"#;

fn main() -> cayley_sieve::Result<()> {
    let cfg = ExperimentConfig::parse(CONFIG)?;
    let run = execute(
        Command::Gap,
        &cfg,
        std::path::Path::new("."),
        std::path::Path::new("out"),
    )?;
    for f in &run.files {
        if f.name.ends_with(".csv") {
            print!("{}", String::from_utf8_lossy(&f.bytes));
        }
    }
    Ok(())
}
