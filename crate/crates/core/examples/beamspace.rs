//! What the BS sees in the DFT beamspace: an on-grid path occupies one bin,
//! an off-grid path leaks into its neighbours, and the phase rotation pulls
//! that leakage back so the AoA can be read off with sub-bin precision.

use fas_chanest::geometry::channel_at_positions;
use fas_chanest::l3scr::{coarse_aoa, dft_transform, refine_aoa, rotate_and_project, DftOperator};
use fas_chanest::{PathSet, SystemConfig};
use num_complex::Complex64;

fn main() -> fas_chanest::Result<()> {
    let cfg = SystemConfig { m: 32, k: 6, ..SystemConfig::default() };
    let dft = DftOperator::new(cfg.m);

    for (label, offset) in [("on-grid", 0.0), ("off-grid by 0.4 bin", 0.4)] {
        // spatial frequency (d/lambda) cos(phi) = (6 + offset) / M
        let phi = (2.0 * (6.0 + offset) / cfg.m as f64).acos();
        let path = PathSet::new(vec![Complex64::new(1.0, 0.0)], vec![phi], vec![1.2])?;
        let h = channel_at_positions(&path, &cfg.el_positions(), cfg.m, cfg.d, cfg.lambda);
        let beams = dft_transform(&dft, &h.entries);

        println!("{label}: true AoA {phi:.5} rad");
        for bin in 3..10 {
            let power: f64 = beams.row(bin).iter().map(|z| z.norm_sqr()).sum();
            println!("  bin {bin:>2}  {:<40} {power:.4}", "#".repeat((power * 40.0).round() as usize));
        }
        let (psi, refined) = refine_aoa(&h.entries, 6, cfg.d, cfg.lambda, cfg.rotation_step());
        println!(
            "  coarse AoA {:.5}, rotation {psi:+.5} (bin power {:.4} -> {:.4}), refined AoA {refined:.5}\n",
            coarse_aoa(6, cfg.m, cfg.d, cfg.lambda)?,
            rotate_and_project(&h.entries, 0.0, 6),
            rotate_and_project(&h.entries, psi, 6),
        );
    }
    Ok(())
}
