//! Flat `key = value` experiment files.
//!
//! Scenario keys mirror [`SystemConfig`] (`M`, `N`, `K`, `U`, `W`, `lambda`,
//! `d`, `delta`, `T`, `p`, `L`, `C`, `epsilon`, `seed`) plus `rho_db` as an
//! alternative to `p`. Lengths `d` and `delta` accept a `lambda` suffix, e.g.
//! `delta = 0.5lambda`. Experiment keys: `name`, `trials`, `methods`,
//! `detector`, `sweep`, `series`. `#` starts a comment.
//!
//! ```text
//! M = 64
//! K = 6
//! rho_db = 10
//! delta = 0.5lambda
//! sweep = K: 4, 6, 8
//! methods = ls, l3scr
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{db_to_linear, SystemConfig};
use crate::error::{Error, Result};

use super::{ExperimentSpec, Method, Sweep, SweepParam};

enum Length {
    Meters(f64),
    Wavelengths(f64),
}

fn parse_length(v: &str) -> std::result::Result<Length, String> {
    match v.strip_suffix("lambda") {
        Some(factor) => {
            let factor = factor.trim().trim_end_matches('*').trim();
            let f = if factor.is_empty() { Ok(1.0) } else { factor.parse() };
            f.map(Length::Wavelengths).map_err(|_| format!("bad length `{v}`"))
        }
        None => v.parse().map(Length::Meters).map_err(|_| format!("bad length `{v}`")),
    }
}

fn parse_sweep(v: &str) -> std::result::Result<Sweep, String> {
    let (param, values) = v
        .split_once(':')
        .ok_or_else(|| format!("sweep `{v}` must look like `K: 2, 4, 6`"))?;
    let param: SweepParam = param.parse()?;
    let values = values
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad sweep value `{s}`")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Sweep::new(param, values))
}

fn num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse().map_err(|_| format!("bad number `{v}`"))
}

/// Parses an experiment file body. `path` is only used in error messages.
pub fn parse_config(text: &str, path: &Path) -> Result<ExperimentSpec> {
    let mut base = SystemConfig::default();
    let mut spec_name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "config".into());
    let mut trials = 200;
    let mut methods = Method::ALL.to_vec();
    let mut detector = Default::default();
    let mut sweep = None;
    let mut series = None;
    let mut d = None;
    let mut delta = None;
    let mut powers: Option<Vec<f64>> = None;
    let mut rho_db = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fail = |msg: String| Error::Parse {
            path: PathBuf::from(path),
            line: lineno + 1,
            msg,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| fail(format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let parsed: std::result::Result<(), String> = (|| {
            match key {
                "M" | "m" => base.m = num(value)?,
                "N" | "n" => base.n = num(value)?,
                "K" | "k" => base.k = num(value)?,
                "U" | "u" => base.u = num(value)?,
                "W" | "w" => base.w = num(value)?,
                "lambda" => base.lambda = num(value)?,
                "d" => d = Some(parse_length(value)?),
                "delta" => delta = Some(parse_length(value)?),
                "T" | "t" => base.t = num(value)?,
                "L" | "l" => base.l = num(value)?,
                "C" | "c" => base.c = num(value)?,
                "epsilon" => base.epsilon = Some(num(value)?),
                "seed" => base.seed = num(value)?,
                "p" => {
                    powers = Some(
                        value
                            .split(',')
                            .map(|s| num(s.trim()))
                            .collect::<std::result::Result<_, _>>()?,
                    )
                }
                "rho_db" => rho_db = Some(num::<f64>(value)?),
                "name" => spec_name = value.to_string(),
                "trials" => trials = num(value)?,
                "methods" => {
                    methods = value
                        .split(',')
                        .map(str::parse)
                        .collect::<std::result::Result<_, _>>()?
                }
                "detector" => detector = value.parse()?,
                "sweep" => sweep = Some(parse_sweep(value)?),
                "series" => series = Some(parse_sweep(value)?),
                other => return Err(format!("unknown key `{other}`")),
            }
            Ok(())
        })();
        parsed.map_err(fail)?;
    }

    let resolve = |len: Option<Length>, default: f64| match len {
        None => default,
        Some(Length::Meters(x)) => x,
        Some(Length::Wavelengths(f)) => f * base.lambda,
    };
    base.d = resolve(d, base.lambda / 2.0);
    base.delta = resolve(delta, base.lambda / 2.0);
    base.p = match (powers, rho_db) {
        (Some(_), Some(_)) => {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 0,
                msg: "set either `p` or `rho_db`, not both".into(),
            })
        }
        (Some(p), None) if p.len() == 1 => vec![p[0]; base.u],
        (Some(p), None) => p,
        (None, rho) => vec![db_to_linear(rho.unwrap_or(10.0)); base.u],
    };

    let sweep = sweep.unwrap_or_else(|| Sweep::new(SweepParam::T, vec![base.t as f64]));
    let mut spec = ExperimentSpec::new(&spec_name, base, sweep);
    spec.series = series;
    spec.trials = trials;
    spec.methods = methods;
    spec.detector = detector;
    Ok(spec)
}

pub fn read_config(path: &Path) -> Result<ExperimentSpec> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, path)
}
