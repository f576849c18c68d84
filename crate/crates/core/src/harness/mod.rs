//! Seeded Monte-Carlo experiments over one swept parameter.
//!
//! Every trial draws fresh paths for all users, builds the true port channels
//! and EL channels, runs the requested estimators, and records NMSE plus the
//! sum-rate achieved by exhaustive port selection. Trial `i` uses the same
//! channel realization at every sweep point (only the estimation noise is
//! redrawn), so neighbouring points differ by the swept parameter rather than
//! by channel luck. Trials run on a rayon pool;
//! results are reduced in trial order so the output does not depend on
//! scheduling.

mod config_file;
mod output;
mod presets;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config_file::{parse_config, read_config};
pub use output::{emit, format_sig, read_json, Format};
pub use presets::{preset, PRESET_NAMES};

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::evaluation::{best_ports, nmse, TrialRecord};
use crate::geometry::{channel_at_positions, generate_user_paths, ChannelMatrix, PathSet};
use crate::l3scr::{DftOperator, Dictionary, L3scr, PeakMode, SparseEstimate};
use crate::pilot::{ls_sweep, LsMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ls,
    L3scr,
    Perfect,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Ls, Method::L3scr, Method::Perfect];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ls => "ls",
            Method::L3scr => "l3scr",
            Method::Perfect => "perfect",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "ls" => Ok(Method::Ls),
            "l3scr" => Ok(Method::L3scr),
            "perfect" => Ok(Method::Perfect),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    K,
    M,
    RhoDb,
    T,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::K => "K",
            SweepParam::M => "M",
            SweepParam::RhoDb => "rho_db",
            SweepParam::T => "T",
        }
    }

    /// Writes `value` into `config`. Dimensions are rounded to integers.
    pub fn apply(self, config: &mut SystemConfig, value: f64) {
        match self {
            SweepParam::K => config.k = value.round() as usize,
            SweepParam::M => config.m = value.round() as usize,
            SweepParam::RhoDb => config.set_snr_db(value),
            SweepParam::T => config.t = value.round() as usize,
        }
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "K" | "k" => Ok(SweepParam::K),
            "M" | "m" => Ok(SweepParam::M),
            "rho_db" | "rho" => Ok(SweepParam::RhoDb),
            "T" | "t" => Ok(SweepParam::T),
            other => Err(format!("cannot sweep `{other}` (expected K, M, rho_db or T)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl Sweep {
    pub fn new(param: SweepParam, values: Vec<f64>) -> Self {
        Sweep { param, values }
    }
}

/// Peak detector used by the L3SCR runs of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DetectorMode {
    Threshold(f64),
    /// Keep as many peaks as the scenario has paths.
    KnownL,
}

impl DetectorMode {
    pub fn peak_mode(self, config: &SystemConfig) -> PeakMode {
        match self {
            DetectorMode::Threshold(alpha) => PeakMode::Threshold(alpha),
            DetectorMode::KnownL => PeakMode::KnownL(config.l),
        }
    }
}

impl Default for DetectorMode {
    fn default() -> Self {
        DetectorMode::Threshold(0.05)
    }
}

impl FromStr for DetectorMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s == "known-l" || s == "known_l" {
            return Ok(DetectorMode::KnownL);
        }
        if let Some(alpha) = s.strip_prefix("threshold:") {
            let alpha: f64 = alpha
                .parse()
                .map_err(|_| format!("bad threshold `{alpha}`"))?;
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(format!("threshold must lie in (0, 1), got {alpha}"));
            }
            return Ok(DetectorMode::Threshold(alpha));
        }
        Err(format!("unknown detector `{s}` (expected threshold:ALPHA or known-l)"))
    }
}

/// A full experiment: base scenario, swept parameter and run settings.
///
/// `series` adds an optional outer parameter (for example one curve per M);
/// its value is folded into the sweep name of each output row.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub base: SystemConfig,
    pub sweep: Sweep,
    pub series: Option<Sweep>,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub output_path: Option<PathBuf>,
    pub detector: DetectorMode,
    pub ls_mode: LsMode,
    /// Worker threads; `None` uses rayon's global pool.
    pub threads: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(name: &str, base: SystemConfig, sweep: Sweep) -> Self {
        ExperimentSpec {
            name: name.to_string(),
            base,
            sweep,
            series: None,
            trials: 200,
            methods: Method::ALL.to_vec(),
            output_path: None,
            detector: DetectorMode::default(),
            ls_mode: LsMode::Fast,
            threads: None,
        }
    }

    pub fn runs(&self, method: Method) -> bool {
        self.methods.contains(&method)
    }

    /// Checks the run settings and the scenario at every sweep point.
    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        if self.trials == 0 {
            return Err(Error::Experiment("trials must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Experiment("no methods selected".into()));
        }
        if self.sweep.values.is_empty() {
            return Err(Error::Experiment("sweep has no values".into()));
        }
        let series: Vec<Option<f64>> = match &self.series {
            Some(s) if s.values.is_empty() => {
                return Err(Error::Experiment("series has no values".into()))
            }
            Some(s) => s.values.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let mut points = Vec::new();
        for series_value in series {
            for &value in &self.sweep.values {
                let mut config = self.base.clone();
                if let (Some(s), Some(v)) = (&self.series, series_value) {
                    s.param.apply(&mut config, v);
                }
                self.sweep.param.apply(&mut config, value);
                config.validate()?;
                let label = match (&self.series, series_value) {
                    (Some(s), Some(v)) => {
                        format!("{}[{}={}]", self.sweep.param.name(), s.param.name(), format_sig(v))
                    }
                    _ => self.sweep.param.name().to_string(),
                };
                points.push(SweepPoint {
                    label,
                    series_value,
                    value,
                    config,
                });
            }
        }
        Ok(points)
    }
}

/// One resolved scenario of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub label: String,
    pub series_value: Option<f64>,
    pub value: f64,
    pub config: SystemConfig,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of the estimation noise in one trial, mixed from the master seed, the
/// sweep coordinates and the trial index.
pub fn trial_seed(master: u64, series_value: Option<f64>, value: f64, index: usize) -> u64 {
    let mut h = splitmix64(master);
    h = splitmix64(h ^ series_value.map_or(0x5EED, f64::to_bits));
    h = splitmix64(h ^ value.to_bits());
    splitmix64(h ^ index as u64)
}

/// Seed of the channel realization in one trial. It ignores the sweep
/// coordinates, so trial `i` sees the same paths at every sweep point.
pub fn channel_seed(master: u64, index: usize) -> u64 {
    splitmix64(splitmix64(master ^ 0xC4A2_77E1) ^ index as u64)
}

/// Seeds driving one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSeeds {
    pub channel: u64,
    pub noise: u64,
}

impl TrialSeeds {
    pub fn for_trial(master: u64, series_value: Option<f64>, value: f64, index: usize) -> Self {
        TrialSeeds {
            channel: channel_seed(master, index),
            noise: trial_seed(master, series_value, value, index),
        }
    }
}

// Independent ChaCha streams per trial so method subsets see identical draws.
const STREAM_PORT_NOISE: u64 = 1;
const STREAM_EL_NOISE: u64 = 2;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Everything one trial produced, for inspection and snapshots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialDetail {
    pub record: TrialRecord,
    pub seeds: TrialSeeds,
    pub config: SystemConfig,
    pub true_paths: Vec<PathSet>,
    pub true_channels: Vec<ChannelMatrix>,
    pub el_estimates: Vec<ChannelMatrix>,
    pub sparse_estimates: Vec<SparseEstimate>,
}

/// Runs one realization. `estimator` is required when L3SCR is among `methods`.
pub fn run_trial(
    config: &SystemConfig,
    methods: &[Method],
    estimator: Option<&L3scr>,
    ls_mode: LsMode,
    seeds: TrialSeeds,
) -> Result<TrialDetail> {
    let paths = generate_user_paths(config, &mut ChaCha8Rng::seed_from_u64(seeds.channel));
    let seed = seeds.noise;
    let ports = config.port_positions();
    let truth: Vec<ChannelMatrix> = paths
        .iter()
        .map(|p| channel_at_positions(p, &ports, config.m, config.d, config.lambda))
        .collect();

    let mut record = TrialRecord {
        seed: seeds.noise,
        nmse_ls: None,
        nmse_l3scr: None,
        rate_perfect: None,
        rate_ls: None,
        rate_l3scr: None,
        ports_perfect: None,
        ports_ls: None,
        ports_l3scr: None,
    };
    let mut el_estimates = Vec::new();
    let mut sparse_estimates = Vec::new();

    if methods.contains(&Method::Ls) {
        let est: Vec<ChannelMatrix> =
            ls_sweep(&truth, config, &mut stream(seed, STREAM_PORT_NOISE), ls_mode)?
                .into_iter()
                .map(|e| e.estimate)
                .collect();
        record.nmse_ls = Some(nmse(&truth, &est)?);
        let sel = best_ports(&est, &truth, &config.p)?;
        record.rate_ls = Some(sel.achieved_rate);
        record.ports_ls = Some(sel);
    }

    if methods.contains(&Method::L3scr) {
        let estimator = estimator
            .ok_or_else(|| Error::Experiment("L3SCR requested without an estimator".into()))?;
        let els = config.el_positions();
        let el_truth: Vec<ChannelMatrix> = paths
            .iter()
            .map(|p| channel_at_positions(p, &els, config.m, config.d, config.lambda))
            .collect();
        el_estimates = ls_sweep(&el_truth, config, &mut stream(seed, STREAM_EL_NOISE), ls_mode)?
            .into_iter()
            .map(|e| e.estimate)
            .collect();
        let mut full = Vec::with_capacity(config.u);
        for h in &el_estimates {
            let (sparse, g) = estimator.estimate(h)?;
            sparse_estimates.push(sparse);
            full.push(g);
        }
        record.nmse_l3scr = Some(nmse(&truth, &full)?);
        let sel = best_ports(&full, &truth, &config.p)?;
        record.rate_l3scr = Some(sel.achieved_rate);
        record.ports_l3scr = Some(sel);
    }

    if methods.contains(&Method::Perfect) {
        let sel = best_ports(&truth, &truth, &config.p)?;
        record.rate_perfect = Some(sel.achieved_rate);
        record.ports_perfect = Some(sel);
    }

    Ok(TrialDetail {
        record,
        seeds,
        config: config.clone(),
        true_paths: paths,
        true_channels: truth,
        el_estimates,
        sparse_estimates,
    })
}

/// Per-method summary of one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub sweep_name: String,
    pub sweep_value: f64,
    pub method: Method,
    pub mean_nmse: Option<f64>,
    pub se_nmse: Option<f64>,
    pub mean_rate: Option<f64>,
    pub se_rate: Option<f64>,
    pub trials: usize,
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, (var / n).sqrt()))
}

fn aggregate(point: &SweepPoint, methods: &[Method], records: &[TrialRecord]) -> Vec<AggregateRow> {
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    methods
        .into_iter()
        .map(|method| {
            let pick = |f: fn(&TrialRecord) -> Option<f64>| -> Vec<f64> {
                records.iter().filter_map(f).collect()
            };
            let (nmse_vals, rate_vals) = match method {
                Method::Ls => (pick(|r| r.nmse_ls), pick(|r| r.rate_ls)),
                Method::L3scr => (pick(|r| r.nmse_l3scr), pick(|r| r.rate_l3scr)),
                Method::Perfect => (Vec::new(), pick(|r| r.rate_perfect)),
            };
            let nmse_stats = mean_and_se(&nmse_vals);
            let rate_stats = mean_and_se(&rate_vals);
            AggregateRow {
                sweep_name: point.label.clone(),
                sweep_value: point.value,
                method,
                mean_nmse: nmse_stats.map(|s| s.0),
                se_nmse: nmse_stats.map(|s| s.1),
                mean_rate: rate_stats.map(|s| s.0),
                se_rate: rate_stats.map(|s| s.1),
                trials: records.len(),
            }
        })
        .collect()
}

/// Runs all trials of one sweep point and returns the per-trial records in
/// trial order.
pub fn run_point(spec: &ExperimentSpec, point: &SweepPoint) -> Result<Vec<TrialRecord>> {
    let config = &point.config;
    let estimator = if spec.runs(Method::L3scr) {
        let dict = Dictionary::new(config.c, config.k, config.delta, config.lambda)?;
        Some(L3scr::with_parts(
            config,
            spec.detector.peak_mode(config),
            Arc::new(DftOperator::new(config.m)),
            Arc::new(dict),
        ))
    } else {
        None
    };
    let job = || {
        (0..spec.trials)
            .into_par_iter()
            .map(|i| {
                let seeds = TrialSeeds::for_trial(config.seed, point.series_value, point.value, i);
                run_trial(config, &spec.methods, estimator.as_ref(), spec.ls_mode, seeds)
                    .map(|d| d.record)
            })
            .collect::<Result<Vec<_>>>()
    };
    match spec.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Experiment(format!("thread pool: {e}")))?
            .install(job),
        None => job(),
    }
}

/// Runs every sweep point and aggregates one row per (point, method).
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<AggregateRow>> {
    let mut rows = Vec::new();
    for point in spec.points()? {
        let records = run_point(spec, &point)?;
        rows.extend(aggregate(&point, &spec.methods, &records));
    }
    Ok(rows)
}

/// Re-runs a single trial of the first sweep point with full diagnostics.
pub fn inspect_trial(spec: &ExperimentSpec, index: usize) -> Result<TrialDetail> {
    let point = spec
        .points()?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Experiment("no sweep points".into()))?;
    let config = &point.config;
    let estimator = if spec.runs(Method::L3scr) {
        Some(L3scr::new(config, spec.detector.peak_mode(config))?.keep_responses(true))
    } else {
        None
    };
    let seeds = TrialSeeds::for_trial(config.seed, point.series_value, point.value, index);
    run_trial(config, &spec.methods, estimator.as_ref(), spec.ls_mode, seeds)
}
