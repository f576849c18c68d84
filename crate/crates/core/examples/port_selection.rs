//! Port choice for two users under perfect, LS and L3SCR channel knowledge.
//! The decision uses each method's channels; the rate is measured on the truth.

use fas_chanest::harness::{run_trial, Method, TrialSeeds};
use fas_chanest::l3scr::{L3scr, PeakMode};
use fas_chanest::pilot::LsMode;
use fas_chanest::SystemConfig;

fn main() -> fas_chanest::Result<()> {
    let cfg = SystemConfig { m: 64, k: 8, seed: 3, ..SystemConfig::default() };
    cfg.validate()?;
    let estimator = L3scr::new(&cfg, PeakMode::Threshold(0.05))?;

    for trial in 0..4 {
        let seeds = TrialSeeds::for_trial(cfg.seed, None, 0.0, trial);
        let detail = run_trial(&cfg, &Method::ALL, Some(&estimator), LsMode::Fast, seeds)?;
        let r = &detail.record;
        println!("trial {trial}");
        for (name, sel) in [
            ("perfect", &r.ports_perfect),
            ("ls", &r.ports_ls),
            ("l3scr", &r.ports_l3scr),
        ] {
            let sel = sel.as_ref().expect("all methods ran");
            println!(
                "  {name:<8} ports {:?}  predicted {:>6.3}  achieved {:>6.3} bit/s/Hz",
                sel.ports, sel.decision_rate, sel.achieved_rate
            );
        }
    }
    Ok(())
}
