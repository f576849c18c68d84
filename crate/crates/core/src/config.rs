//! Scenario parameters shared by every stage of the simulation.

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Uplink carrier frequency used by the presets (Hz).
pub const CARRIER_HZ: f64 = 28.0e9;

/// Converts an SNR in dB to a linear transmit power (unit noise power).
pub fn db_to_linear(rho_db: f64) -> f64 {
    10f64.powf(rho_db / 10.0)
}

/// One uplink scenario: BS array, FAS geometry, pilot training and estimator
/// settings.
///
/// Field names follow the usual symbols (`m` antennas, `n` ports, `k` ELs,
/// and so on) so that config files read naturally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// BS antenna count.
    pub m: usize,
    /// FAS port count.
    pub n: usize,
    /// Estimating locations visited during training.
    pub k: usize,
    /// Users.
    pub u: usize,
    /// Normalized FAS size; the FAS spans `w * lambda` meters.
    pub w: f64,
    /// Carrier wavelength (m).
    pub lambda: f64,
    /// BS antenna spacing (m).
    pub d: f64,
    /// EL spacing (m).
    pub delta: f64,
    /// Pilot repetitions per position.
    pub t: usize,
    /// Per-user transmit power, linear scale.
    pub p: Vec<f64>,
    /// Paths per user.
    pub l: usize,
    /// AoD dictionary size.
    pub c: usize,
    /// Rotation search step. `None` selects `1 / (100 M)`.
    pub epsilon: Option<f64>,
    pub seed: u64,
}

impl Default for SystemConfig {
    /// The reference scenario at 28 GHz, 10 dB SNR.
    fn default() -> Self {
        let lambda = SPEED_OF_LIGHT / CARRIER_HZ;
        let u = 2;
        SystemConfig {
            m: 64,
            n: 100,
            k: 6,
            u,
            w: 10.0,
            lambda,
            d: lambda / 2.0,
            delta: lambda / 2.0,
            t: 1,
            p: vec![db_to_linear(10.0); u],
            l: 5,
            c: 10_000,
            epsilon: None,
            seed: 0,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.m < 1 {
            return Err(ConfigError::NoAntennas);
        }
        if self.n < 2 {
            return Err(ConfigError::TooFewPorts(self.n));
        }
        if self.k < 2 {
            return Err(ConfigError::TooFewLocations(self.k));
        }
        if self.u < 1 {
            return Err(ConfigError::NoUsers);
        }
        if self.l < 1 {
            return Err(ConfigError::NoPaths);
        }
        if self.t < 1 {
            return Err(ConfigError::NoRepetitions);
        }
        if self.c < 2 {
            return Err(ConfigError::DictionaryTooSmall(self.c));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(ConfigError::BadWavelength(self.lambda));
        }
        if !(self.w.is_finite() && self.w > 0.0) {
            return Err(ConfigError::BadApertureSize(self.w));
        }
        let d_ratio = self.d / self.lambda;
        if !(d_ratio > 0.0 && d_ratio <= 1.0) {
            return Err(ConfigError::AntennaSpacing(d_ratio));
        }
        let delta_ratio = self.delta / self.lambda;
        if !(delta_ratio > 0.0 && delta_ratio < 1.0) {
            return Err(ConfigError::LocationSpacingWavelength(delta_ratio));
        }
        let limit = self.w * self.lambda / (self.k - 1) as f64;
        if self.delta > limit * (1.0 + 1e-12) {
            return Err(ConfigError::LocationSpacingAperture {
                delta: self.delta,
                limit,
            });
        }
        if self.p.len() != self.u {
            return Err(ConfigError::PowerCount {
                expected: self.u,
                got: self.p.len(),
            });
        }
        if let Some(&bad) = self.p.iter().find(|&&p| !(p > 0.0)) {
            return Err(ConfigError::BadPower(bad));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps <= 1.0 / self.m as f64) {
                return Err(ConfigError::BadRotationStep(eps));
            }
        }
        Ok(())
    }

    pub fn rotation_step(&self) -> f64 {
        self.epsilon.unwrap_or(1.0 / (100.0 * self.m as f64))
    }

    /// Spacing between adjacent FAS ports (m).
    pub fn port_spacing(&self) -> f64 {
        self.w * self.lambda / (self.n - 1) as f64
    }

    /// Port positions `{0, W lambda/(N-1), ..., W lambda}`.
    pub fn port_positions(&self) -> Vec<f64> {
        let step = self.port_spacing();
        (0..self.n).map(|i| i as f64 * step).collect()
    }

    /// EL positions `{0, delta, ..., (K-1) delta}`; they share the port grid's origin.
    pub fn el_positions(&self) -> Vec<f64> {
        (0..self.k).map(|i| i as f64 * self.delta).collect()
    }

    /// Sets every user's power from an SNR in dB.
    pub fn set_snr_db(&mut self, rho_db: f64) {
        self.p = vec![db_to_linear(rho_db); self.u];
    }
}
