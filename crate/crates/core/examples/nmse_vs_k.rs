//! NMSE and sum-rate versus the number of estimating locations K, for a few
//! BS array sizes, printed as a table.
//!
//! ```text
//! cargo run --release --example nmse_vs_k -- [trials] [known-l|threshold:ALPHA]
//! ```

use fas_chanest::harness::{preset, run_experiment, DetectorMode, Sweep, SweepParam};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let trials: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(50);
    let detector: DetectorMode = args
        .next()
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or_default();

    let mut spec = preset("fig2")?;
    spec.trials = trials;
    spec.detector = detector;
    spec.sweep = Sweep::new(SweepParam::K, vec![2.0, 4.0, 6.0, 8.0, 10.0, 12.0]);

    println!("{:<14} {:>4} {:>8} {:>12} {:>10} {:>9}", "series", "K", "method", "NMSE", "lg NMSE", "rate");
    for row in run_experiment(&spec)? {
        let nmse = row.mean_nmse.unwrap_or(f64::NAN);
        println!(
            "{:<14} {:>4} {:>8} {:>12.4e} {:>10.3} {:>9.3}",
            row.sweep_name,
            row.sweep_value,
            row.method,
            nmse,
            nmse.log10(),
            row.mean_rate.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
