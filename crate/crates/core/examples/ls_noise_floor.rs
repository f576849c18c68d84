//! LS estimation over all N ports: NMSE against SNR for one and two pilot
//! repetitions. The curve falls one decade per 10 dB and doubling T buys 3 dB.
//!
//! ```text
//! cargo run --release --example ls_noise_floor -- [trials]
//! ```

use fas_chanest::harness::{preset, run_experiment, Method, Sweep, SweepParam};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(100);
    let mut spec = preset("fig3")?;
    spec.trials = trials;
    spec.methods = vec![Method::Ls];
    spec.sweep = Sweep::new(SweepParam::RhoDb, vec![0.0, 5.0, 10.0, 15.0, 20.0]);

    println!("{:<10} {:>7} {:>10} {:>10} {:>10}", "series", "rho dB", "NMSE", "lg NMSE", "1/(T p)");
    for row in run_experiment(&spec)? {
        let t = if row.sweep_name.contains("T=2") { 2.0 } else { 1.0 };
        let nmse = row.mean_nmse.unwrap_or(f64::NAN);
        println!(
            "{:<10} {:>7} {:>10.5} {:>10.3} {:>10.5}",
            row.sweep_name,
            row.sweep_value,
            nmse,
            nmse.log10(),
            1.0 / (t * 10f64.powf(row.sweep_value / 10.0))
        );
    }
    Ok(())
}
