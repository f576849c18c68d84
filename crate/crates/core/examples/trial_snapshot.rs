//! Dumps every intermediate of one trial (true paths, EL estimates, peaks,
//! rotations, recovered paths, chosen ports) as JSON, the same document the
//! `inspect` subcommand prints.

use fas_chanest::harness::{inspect_trial, preset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let index: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    let detail = inspect_trial(&preset("smoke")?, index)?;

    let est = &detail.sparse_estimates[0];
    eprintln!(
        "user 0: {} true paths, {} detected at bins {:?}, NMSE {:.3e}",
        detail.true_paths[0].len(),
        est.l_hat(),
        est.peaks.indices,
        detail.record.nmse_l3scr.unwrap_or(f64::NAN)
    );
    println!("{}", serde_json::to_string_pretty(&detail)?);
    Ok(())
}
