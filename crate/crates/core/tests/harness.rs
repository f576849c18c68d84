use std::collections::HashSet;
use std::time::Instant;

use fas_chanest::harness::{
    emit, parse_config, preset, read_json, run_experiment, run_point, trial_seed, ExperimentSpec,
    Format, Method, Sweep, SweepParam, PRESET_NAMES,
};
use fas_chanest::{ConfigError, Error, SystemConfig};

fn tiny(methods: Vec<Method>, values: Vec<f64>) -> ExperimentSpec {
    let base = SystemConfig { m: 8, n: 10, k: 4, l: 2, c: 200, seed: 99, ..SystemConfig::default() };
    let mut spec = ExperimentSpec::new("tiny", base, Sweep::new(SweepParam::K, values));
    spec.methods = methods;
    spec.trials = 6;
    spec
}

#[test]
fn perfect_only_single_trial_has_no_nmse() {
    let mut spec = tiny(vec![Method::Perfect], vec![4.0]);
    spec.trials = 1;
    let rows = run_experiment(&spec).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].mean_nmse, None);
    assert!(rows[0].mean_rate.unwrap() > 0.0);
    assert_eq!(rows[0].trials, 1);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    emit(&rows, Format::Csv, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let line = text.lines().nth(1).unwrap();
    assert!(line.starts_with("K,4,perfect,,,"), "{line}");
}

#[test]
fn same_spec_gives_identical_bytes() {
    let spec = tiny(Method::ALL.to_vec(), vec![3.0, 4.0]);
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    emit(&run_experiment(&spec).unwrap(), Format::Csv, &a).unwrap();
    emit(&run_experiment(&spec).unwrap(), Format::Csv, &b).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn two_values_two_methods_give_four_rows() {
    let spec = tiny(vec![Method::Ls, Method::L3scr], vec![3.0, 4.0]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    emit(&run_experiment(&spec).unwrap(), Format::Csv, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "sweep_name,sweep_value,method,mean_nmse,se_nmse,mean_rate,se_rate,trials"
    );
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn json_output_round_trips() {
    let rows = run_experiment(&tiny(Method::ALL.to_vec(), vec![4.0])).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.json");
    emit(&rows, Format::Json, &path).unwrap();
    assert_eq!(read_json(&path).unwrap(), rows);
}

#[test]
fn thread_count_does_not_change_results() {
    let mut spec = tiny(Method::ALL.to_vec(), vec![4.0]);
    spec.trials = 24;
    let point = spec.points().unwrap().remove(0);
    spec.threads = Some(1);
    let serial = run_point(&spec, &point).unwrap();
    spec.threads = Some(4);
    let parallel = run_point(&spec, &point).unwrap();
    assert_eq!(serial, parallel);
}

#[test]
fn trial_seeds_are_distinct() {
    let seeds: HashSet<u64> = (0..1000)
        .flat_map(|i| [trial_seed(1, None, 4.0, i), trial_seed(1, None, 6.0, i), trial_seed(1, Some(64.0), 4.0, i)])
        .collect();
    assert_eq!(seeds.len(), 3000);
}

#[test]
fn channel_draws_are_shared_across_sweep_points() {
    let spec = tiny(vec![Method::Perfect], vec![3.0, 4.0]);
    let points = spec.points().unwrap();
    let a = fas_chanest::harness::run_point(&spec, &points[0]).unwrap();
    let b = fas_chanest::harness::run_point(&spec, &points[1]).unwrap();
    // K does not affect the perfect-CSI rate, so a shared channel gives equal rates
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.rate_perfect, y.rate_perfect);
    }
}

fn config_error(spec: &ExperimentSpec) -> ConfigError {
    match spec.points() {
        Err(Error::Config(e)) => e,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn invalid_sweep_points_are_named() {
    let one_el = tiny(vec![Method::Ls], vec![1.0]);
    assert_eq!(config_error(&one_el).code(), "el-count");

    let mut wide = tiny(vec![Method::Ls], vec![4.0]);
    wide.base.delta = wide.base.lambda;
    assert_eq!(config_error(&wide).code(), "el-spacing-wavelength");

    // delta = 0.9 lambda needs (K-1) * 0.9 <= W = 10, so K = 13 fails
    let mut long = tiny(vec![Method::Ls], vec![12.0, 13.0]);
    long.base.delta = 0.9 * long.base.lambda;
    assert_eq!(config_error(&long).code(), "el-spacing-aperture");
}

#[test]
fn presets_match_the_reference_scenarios() {
    for name in PRESET_NAMES {
        let spec = preset(name).unwrap();
        spec.points().unwrap();
    }
    assert_eq!(preset("fig1").unwrap().base.n, 100);
    assert_eq!(preset("fig3").unwrap().base.k, 10);
    assert_eq!(preset("fig3").unwrap().base.m, 64);
    assert!(matches!(preset("fig9"), Err(Error::UnknownPreset(_))));
}

#[test]
fn smoke_preset_is_quick() {
    let start = Instant::now();
    let rows = run_experiment(&preset("smoke").unwrap()).unwrap();
    assert!(!rows.is_empty());
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn config_file_drives_an_experiment() {
    let text = "\
# small sweep
name = from-file
M = 8
N = 10
K = 4
L = 2
C = 200
rho_db = 15
delta = 0.5lambda
trials = 3
methods = ls, perfect
sweep = K: 3, 4
";
    let spec = parse_config(text, std::path::Path::new("inline.cfg")).unwrap();
    assert_eq!(spec.name, "from-file");
    assert_eq!(spec.methods, vec![Method::Ls, Method::Perfect]);
    assert!((spec.base.p[0] - 10f64.powf(1.5)).abs() < 1e-9);
    assert!((spec.base.delta - spec.base.lambda / 2.0).abs() < 1e-15);
    assert_eq!(run_experiment(&spec).unwrap().len(), 4);

    let bad = parse_config("M = sixty", std::path::Path::new("bad.cfg"));
    assert!(matches!(bad, Err(Error::Parse { line: 1, .. })));
}
