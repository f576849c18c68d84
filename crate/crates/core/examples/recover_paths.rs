//! One user, one channel draw: estimate from K = 8 locations at 10 dB and
//! compare the recovered paths with the truth.

use fas_chanest::evaluation::nmse;
use fas_chanest::geometry::{channel_at_positions, generate_paths};
use fas_chanest::l3scr::{L3scr, PeakMode};
use fas_chanest::pilot::{ls_sweep, LsMode};
use fas_chanest::SystemConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fas_chanest::Result<()> {
    let cfg = SystemConfig { m: 128, k: 8, u: 1, p: vec![10.0], l: 4, ..SystemConfig::default() };
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let truth = generate_paths(&cfg, &mut rng);
    let el = channel_at_positions(&truth, &cfg.el_positions(), cfg.m, cfg.d, cfg.lambda);
    let ports = channel_at_positions(&truth, &cfg.port_positions(), cfg.m, cfg.d, cfg.lambda);
    let noisy = ls_sweep(&[el], &cfg, &mut rng, LsMode::Full)?.remove(0).estimate;

    let estimator = L3scr::new(&cfg, PeakMode::Threshold(0.05))?;
    let (sparse, full) = estimator.estimate(&noisy)?;

    println!("true paths (AoA, AoD, |gain|):");
    let mut order: Vec<usize> = (0..truth.len()).collect();
    order.sort_by(|&a, &b| truth.aoas[a].total_cmp(&truth.aoas[b]));
    for l in order {
        println!("  {:.4}  {:.4}  {:.4}", truth.aoas[l], truth.aods[l], truth.gains[l].norm());
    }
    println!("estimated paths (L_hat = {}):", sparse.l_hat());
    let mut order: Vec<usize> = (0..sparse.l_hat()).collect();
    order.sort_by(|&a, &b| sparse.paths.aoas[a].total_cmp(&sparse.paths.aoas[b]));
    for l in order {
        println!(
            "  {:.4}  {:.4}  {:.4}   bin {}, rotation {:+.5}",
            sparse.paths.aoas[l],
            sparse.paths.aods[l],
            sparse.paths.gains[l].norm(),
            sparse.peaks.indices[l],
            sparse.rotation.psi[l]
        );
    }
    println!("NMSE over all {} ports: {:.4e}", cfg.n, nmse(&[ports], &[full])?);
    Ok(())
}
