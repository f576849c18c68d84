//! Low-sample-size sparse channel reconstruction.
//!
//! From an LS estimate over K estimating locations, the estimator
//!
//! 1. moves to the DFT beamspace of the BS array and picks the dominant rows
//!    (path count and coarse AoAs),
//! 2. refines each AoA with a fractional-bin phase rotation,
//! 3. projects onto the AoA steering subspace and matched-filters each column
//!    against an AoD dictionary (AoDs and gains),
//! 4. rebuilds the channel over all N ports from the recovered paths.
//!
//! Each user is handled independently.

mod beamspace;
mod dictionary;

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use beamspace::{
    coarse_aoa, detect_peaks, dft_transform, refine_aoa, rotate_and_project, rotation_grid,
    DftOperator, PeakMode, PeakReport, RotationResult,
};
pub use dictionary::{estimate_aod_gain, AodGainEstimate, Dictionary};

use crate::config::SystemConfig;
use crate::error::Result;
use crate::geometry::{channel_at_positions, steering_rx, ChannelMatrix, PathSet};

/// Recovered paths plus every intermediate decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseEstimate {
    pub paths: PathSet,
    pub peaks: PeakReport,
    pub rotation: RotationResult,
    /// Matched-filter winning column per path (zero-based).
    pub dictionary_columns: Vec<usize>,
    /// Matched-filter magnitude response per path. Empty unless requested.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dictionary_responses: Vec<Vec<f64>>,
}

impl SparseEstimate {
    pub fn l_hat(&self) -> usize {
        self.paths.len()
    }
}

/// Rebuilds the N-port channel from estimated paths on the port grid
/// `{0, W lambda/(N-1), ..., W lambda}`. No paths gives the zero channel.
pub fn reconstruct_full(paths: &PathSet, config: &SystemConfig) -> ChannelMatrix {
    let positions = config.port_positions();
    if paths.is_empty() {
        return ChannelMatrix::zeros(config.m, positions);
    }
    channel_at_positions(paths, &positions, config.m, config.d, config.lambda)
}

/// Reusable estimator state for one scenario: the DFT operator and the AoD
/// dictionary only depend on M, K, delta and C.
#[derive(Debug, Clone)]
pub struct L3scr {
    config: SystemConfig,
    dft: Arc<DftOperator>,
    dictionary: Arc<Dictionary>,
    mode: PeakMode,
    keep_responses: bool,
}

impl L3scr {
    pub fn new(config: &SystemConfig, mode: PeakMode) -> Result<Self> {
        config.validate()?;
        let dictionary = Dictionary::new(config.c, config.k, config.delta, config.lambda)?;
        Ok(Self::with_parts(
            config,
            mode,
            Arc::new(DftOperator::new(config.m)),
            Arc::new(dictionary),
        ))
    }

    /// Builds an estimator around operators shared with other estimators.
    pub fn with_parts(
        config: &SystemConfig,
        mode: PeakMode,
        dft: Arc<DftOperator>,
        dictionary: Arc<Dictionary>,
    ) -> Self {
        L3scr {
            config: config.clone(),
            dft,
            dictionary,
            mode,
            keep_responses: false,
        }
    }

    /// Keep the full matched-filter responses in the diagnostics.
    pub fn keep_responses(mut self, keep: bool) -> Self {
        self.keep_responses = keep;
        self
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dictionary
    }

    /// Runs the full pipeline on one user's M x K LS estimate.
    pub fn estimate(&self, h_ls: &ChannelMatrix) -> Result<(SparseEstimate, ChannelMatrix)> {
        let cfg = &self.config;
        let h = &h_ls.entries;
        let beams = dft_transform(&self.dft, h);
        let peaks = detect_peaks(&beams, self.mode)?;

        let (psi, aoas): (Vec<f64>, Vec<f64>) = peaks
            .indices
            .iter()
            .map(|&bin| refine_aoa(h, bin, cfg.d, cfg.lambda, cfg.rotation_step()))
            .unzip();

        let mut a_r_hat = Array2::<Complex64>::zeros((cfg.m, aoas.len()));
        for (l, &phi) in aoas.iter().enumerate() {
            a_r_hat
                .column_mut(l)
                .assign(&steering_rx(phi, cfg.m, cfg.d, cfg.lambda)?);
        }
        let aod = if aoas.is_empty() {
            AodGainEstimate {
                thetas: Vec::new(),
                gammas: Vec::new(),
                columns: Vec::new(),
                responses: Vec::new(),
            }
        } else {
            estimate_aod_gain(h, &a_r_hat, &self.dictionary)?
        };

        let paths = PathSet {
            gains: aod.gammas,
            aoas: aoas.clone(),
            aods: aod.thetas,
        };
        let full = reconstruct_full(&paths, cfg);
        let estimate = SparseEstimate {
            paths,
            peaks,
            rotation: RotationResult {
                psi,
                refined_aoas: aoas,
            },
            dictionary_columns: aod.columns,
            dictionary_responses: if self.keep_responses {
                aod.responses
            } else {
                Vec::new()
            },
        };
        Ok((estimate, full))
    }
}

/// One-shot convenience wrapper that builds the operators for `config`.
pub fn run_l3scr(
    h_ls: &ChannelMatrix,
    config: &SystemConfig,
    mode: PeakMode,
) -> Result<(SparseEstimate, ChannelMatrix)> {
    L3scr::new(config, mode)?.estimate(h_ls)
}
