use std::path::PathBuf;

use thiserror::Error;

/// A violated scenario constraint. Each variant carries a stable identifier
/// (see [`ConfigError::code`]) so callers and scripts can tell them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("BS antenna count M must be at least 1")]
    NoAntennas,
    #[error("FAS port count N must be at least 2 (got {0})")]
    TooFewPorts(usize),
    #[error("estimating-location count K must be at least 2 (got {0})")]
    TooFewLocations(usize),
    #[error("user count U must be at least 1")]
    NoUsers,
    #[error("path count L must be at least 1")]
    NoPaths,
    #[error("pilot repetitions T must be at least 1")]
    NoRepetitions,
    #[error("dictionary size C must be at least 2 (got {0})")]
    DictionaryTooSmall(usize),
    #[error("wavelength must be positive and finite (got {0})")]
    BadWavelength(f64),
    #[error("normalized FAS size W must be positive (got {0})")]
    BadApertureSize(f64),
    #[error("BS antenna spacing must satisfy 0 < d/lambda <= 1 (got d/lambda = {0})")]
    AntennaSpacing(f64),
    #[error("EL spacing must satisfy 0 < delta < lambda (got delta/lambda = {0})")]
    LocationSpacingWavelength(f64),
    #[error("EL spacing delta = {delta} exceeds W*lambda/(K-1) = {limit}")]
    LocationSpacingAperture { delta: f64, limit: f64 },
    #[error("power vector has {got} entries but U = {expected}")]
    PowerCount { expected: usize, got: usize },
    #[error("transmit powers must be positive (got {0})")]
    BadPower(f64),
    #[error("rotation step epsilon must lie in (0, 1/M] (got {0})")]
    BadRotationStep(f64),
}

impl ConfigError {
    pub fn code(&self) -> &'static str {
        match self {
            ConfigError::NoAntennas => "antenna-count",
            ConfigError::TooFewPorts(_) => "port-count",
            ConfigError::TooFewLocations(_) => "el-count",
            ConfigError::NoUsers => "user-count",
            ConfigError::NoPaths => "path-count",
            ConfigError::NoRepetitions => "pilot-repetitions",
            ConfigError::DictionaryTooSmall(_) => "dictionary-size",
            ConfigError::BadWavelength(_) => "wavelength",
            ConfigError::BadApertureSize(_) => "fas-size",
            ConfigError::AntennaSpacing(_) => "antenna-spacing",
            ConfigError::LocationSpacingWavelength(_) => "el-spacing-wavelength",
            ConfigError::LocationSpacingAperture { .. } => "el-spacing-aperture",
            ConfigError::PowerCount { .. } => "power-count",
            ConfigError::BadPower(_) => "power",
            ConfigError::BadRotationStep(_) => "rotation-step",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration [{code}]: {source}", code = .0.code(), source = .0)]
    Config(#[from] ConfigError),
    #[error("angle {0} rad is outside [0, pi]")]
    AngleOutOfRange(f64),
    #[error("arccos argument {arg} for bin {bin} is outside [-1, 1]; the peak lies in the unreachable band")]
    UnreachableBin { bin: usize, arg: f64 },
    #[error("peak-detection threshold must lie in (0, 1) (got {0})")]
    BadThreshold(f64),
    #[error("cannot normalize against a zero-power channel")]
    ZeroChannel,
    #[error("MRC receiver undefined for a zero channel vector")]
    ZeroVector,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unknown preset `{0}` (expected fig1, fig2, fig3, fig3-slope or smoke)")]
    UnknownPreset(String),
    #[error("{path}: line {line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("invalid experiment: {0}")]
    Experiment(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
