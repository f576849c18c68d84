//! Runs the small smoke experiment and writes its rows as CSV.
//!
//! ```text
//! cargo run --release --example smoke_csv -- [out.csv]
//! ```

use std::path::PathBuf;

use fas_chanest::harness::{emit, preset, run_experiment, Format};

fn main() -> fas_chanest::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("smoke.csv"));
    let spec = preset("smoke")?;
    let rows = run_experiment(&spec)?;
    emit(&rows, Format::Csv, &out)?;
    print!("{}", std::fs::read_to_string(&out).map_err(|source| fas_chanest::Error::Io {
        path: out.clone(),
        source,
    })?);
    eprintln!("written to {}", out.display());
    Ok(())
}
