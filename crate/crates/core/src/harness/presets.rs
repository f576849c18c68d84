use crate::config::SystemConfig;
use crate::error::{Error, Result};

use super::{ExperimentSpec, Method, Sweep, SweepParam};

pub const PRESET_NAMES: [&str; 5] = ["fig1", "fig2", "fig3", "fig3-slope", "smoke"];

const DEFAULT_SEED: u64 = 20_240_101;

fn range(lo: i32, hi: i32, step: i32) -> Vec<f64> {
    (lo..=hi).step_by(step as usize).map(f64::from).collect()
}

/// Built-in experiments. All use 28 GHz, U = 2, W = 10, N = 100, delta =
/// lambda/2, L = 5 and C = 10^4 unless noted.
///
/// * `fig1`, `fig2`: NMSE (and rate) versus K in 2..=12 for M in {32, 64, 128}
///   at 10 dB, T = 1.
/// * `fig3`: NMSE versus SNR in 0..=20 dB at M = 64, K = 10, for T in {1, 2}.
/// * `fig3-slope`: LS only, SNR in {0, 5, 10, 15, 20} dB, 500 trials.
/// * `smoke`: a tiny scenario (M = 16, N = 20, K = 4, L = 2, C = 500, 10 trials).
pub fn preset(name: &str) -> Result<ExperimentSpec> {
    let base = SystemConfig {
        seed: DEFAULT_SEED,
        ..SystemConfig::default()
    };
    let spec = match name {
        "fig1" | "fig2" => {
            let mut spec = ExperimentSpec::new(name, base, Sweep::new(SweepParam::K, range(2, 12, 1)));
            spec.series = Some(Sweep::new(SweepParam::M, vec![32.0, 64.0, 128.0]));
            spec.methods = if name == "fig1" {
                vec![Method::Ls, Method::L3scr]
            } else {
                Method::ALL.to_vec()
            };
            spec
        }
        "fig3" => {
            let base = SystemConfig { m: 64, k: 10, ..base };
            let mut spec = ExperimentSpec::new(name, base, Sweep::new(SweepParam::RhoDb, range(0, 20, 2)));
            spec.series = Some(Sweep::new(SweepParam::T, vec![1.0, 2.0]));
            spec.methods = vec![Method::Ls, Method::L3scr];
            spec
        }
        "fig3-slope" => {
            let base = SystemConfig { m: 64, k: 10, t: 1, ..base };
            let mut spec = ExperimentSpec::new(name, base, Sweep::new(SweepParam::RhoDb, range(0, 20, 5)));
            spec.methods = vec![Method::Ls];
            spec.trials = 500;
            spec
        }
        "smoke" => {
            let base = SystemConfig {
                m: 16,
                n: 20,
                k: 4,
                l: 2,
                c: 500,
                ..base
            };
            let mut spec = ExperimentSpec::new(name, base, Sweep::new(SweepParam::K, vec![4.0]));
            spec.trials = 10;
            spec
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(spec)
}
