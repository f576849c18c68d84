//! Array geometry and the planar-wave sparse channel model.
//!
//! The BS carries an M-element ULA with spacing `d`; each user carries a
//! linear fluid antenna whose positions are measured along its axis from a
//! common origin `x = 0`. A channel with `L` paths is
//!
//! ```text
//! H[m, k] = sum_l gamma_l * exp(-j 2pi/lambda * m * d * cos(phi_l))
//!                         * exp(+j 2pi/lambda * x_k * cos(theta_l))
//! ```
//!
//! with `m` counted from zero. Evaluated on K evenly spaced positions this is
//! `sqrt(MK) * A_R * diag(gamma) * A_T^H` built from unit-norm steering vectors
//! (the transmit side enters conjugated).

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::SystemConfig;
use crate::error::{Error, Result};

fn check_angle(angle: f64) -> Result<()> {
    if (0.0..=PI).contains(&angle) {
        Ok(())
    } else {
        Err(Error::AngleOutOfRange(angle))
    }
}

fn ula_response(angle: f64, len: usize, spacing: f64, lambda: f64) -> Array1<Complex64> {
    let scale = 1.0 / (len as f64).sqrt();
    let phase_step = -2.0 * PI / lambda * spacing * angle.cos();
    Array1::from_iter((0..len).map(|i| Complex64::from_polar(scale, phase_step * i as f64)))
}

/// Unit-norm receive steering vector of the BS ULA toward AoA `phi`.
pub fn steering_rx(phi: f64, m: usize, d: f64, lambda: f64) -> Result<Array1<Complex64>> {
    check_angle(phi)?;
    Ok(ula_response(phi, m, d, lambda))
}

/// Unit-norm transmit steering vector over `p` evenly spaced FAS positions.
///
/// With `spacing = W lambda / (N - 1)` and `p = N` this is the port-grid
/// vector used to rebuild the full channel.
pub fn steering_tx(theta: f64, p: usize, spacing: f64, lambda: f64) -> Result<Array1<Complex64>> {
    check_angle(theta)?;
    Ok(ula_response(theta, p, spacing, lambda))
}

/// Draws a sample from CN(0, variance): total variance `variance`, half per component.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Sparse parameters of one user's channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSet {
    #[serde(with = "complex_vec")]
    pub gains: Vec<Complex64>,
    pub aoas: Vec<f64>,
    pub aods: Vec<f64>,
}

impl PathSet {
    pub fn new(gains: Vec<Complex64>, aoas: Vec<f64>, aods: Vec<f64>) -> Result<Self> {
        if gains.len() != aoas.len() || gains.len() != aods.len() {
            return Err(Error::Shape(format!(
                "path vectors have lengths {}, {}, {}",
                gains.len(),
                aoas.len(),
                aods.len()
            )));
        }
        for &a in aoas.iter().chain(&aods) {
            check_angle(a)?;
        }
        Ok(PathSet { gains, aoas, aods })
    }

    pub fn empty() -> Self {
        PathSet {
            gains: Vec::new(),
            aoas: Vec::new(),
            aods: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }
}

/// Complex channel coefficients between the BS antennas (rows) and a set of
/// transmit positions (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    pub entries: Array2<Complex64>,
    pub positions: Vec<f64>,
}

impl ChannelMatrix {
    pub fn new(entries: Array2<Complex64>, positions: Vec<f64>) -> Result<Self> {
        if entries.ncols() != positions.len() {
            return Err(Error::Shape(format!(
                "{} columns but {} positions",
                entries.ncols(),
                positions.len()
            )));
        }
        if positions.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Shape("positions must be strictly increasing".into()));
        }
        Ok(ChannelMatrix { entries, positions })
    }

    pub fn zeros(m: usize, positions: Vec<f64>) -> Self {
        ChannelMatrix {
            entries: Array2::zeros((m, positions.len())),
            positions,
        }
    }

    pub fn antennas(&self) -> usize {
        self.entries.nrows()
    }

    pub fn num_positions(&self) -> usize {
        self.entries.ncols()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Draws one user's paths: gains CN(0, 1/L), AoAs and AoDs uniform on [0, pi].
pub fn generate_paths<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> PathSet {
    let l = config.l;
    let var = 1.0 / l as f64;
    let mut gains = Vec::with_capacity(l);
    let mut aoas = Vec::with_capacity(l);
    let mut aods = Vec::with_capacity(l);
    for _ in 0..l {
        gains.push(complex_gaussian(rng, var));
        aoas.push(rng.random_range(0.0..=PI));
        aods.push(rng.random_range(0.0..=PI));
    }
    PathSet { gains, aoas, aods }
}

/// Draws independent paths for every user.
pub fn generate_user_paths<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> Vec<PathSet> {
    (0..config.u).map(|_| generate_paths(config, rng)).collect()
}

/// Evaluates the geometric channel at arbitrary FAS positions.
///
/// # Panics
///
/// Panics if `positions` is empty or not strictly increasing.
pub fn channel_at_positions(
    paths: &PathSet,
    positions: &[f64],
    m: usize,
    d: f64,
    lambda: f64,
) -> ChannelMatrix {
    assert!(!positions.is_empty(), "channel needs at least one position");
    let wavenumber = 2.0 * PI / lambda;
    let mut entries = Array2::<Complex64>::zeros((m, positions.len()));
    for ((&gain, &phi), &theta) in paths.gains.iter().zip(&paths.aoas).zip(&paths.aods) {
        let rx: Vec<Complex64> = (0..m)
            .map(|i| Complex64::from_polar(1.0, -wavenumber * i as f64 * d * phi.cos()))
            .collect();
        let tx: Vec<Complex64> = positions
            .iter()
            .map(|&x| gain * Complex64::from_polar(1.0, wavenumber * x * theta.cos()))
            .collect();
        for (i, r) in rx.iter().enumerate() {
            for (k, t) in tx.iter().enumerate() {
                entries[(i, k)] += r * t;
            }
        }
    }
    ChannelMatrix::new(entries, positions.to_vec()).expect("positions must be strictly increasing")
}

/// Serde adapter: complex vectors as arrays of `[re, im]` pairs.
pub(crate) mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| [z.re, z.im]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Complex64>, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelMatrixRepr {
    rows: usize,
    cols: usize,
    positions: Vec<f64>,
    #[serde(with = "complex_vec")]
    entries: Vec<Complex64>,
}

impl Serialize for ChannelMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChannelMatrixRepr {
            rows: self.entries.nrows(),
            cols: self.entries.ncols(),
            positions: self.positions.clone(),
            entries: self.entries.iter().copied().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChannelMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ChannelMatrixRepr::deserialize(d)?;
        let entries = Array2::from_shape_vec((repr.rows, repr.cols), repr.entries)
            .map_err(D::Error::custom)?;
        ChannelMatrix::new(entries, repr.positions).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn norm(v: &Array1<Complex64>) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn broadside_steering_is_flat() {
        let v = steering_rx(PI / 2.0, 4, 0.5, 1.0).unwrap();
        for z in &v {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
        let v = steering_tx(PI / 2.0, 3, 0.5, 1.0).unwrap();
        for z in &v {
            assert!((z.re - 1.0 / 3f64.sqrt()).abs() < 1e-15 && z.im.abs() < 1e-15);
        }
    }

    #[test]
    fn endfire_half_wavelength_alternates() {
        let s = 1.0 / 2f64.sqrt();
        for v in [
            steering_rx(0.0, 2, 0.5, 1.0).unwrap(),
            steering_tx(0.0, 2, 0.5, 1.0).unwrap(),
        ] {
            assert!((v[0] - Complex64::new(s, 0.0)).norm() < 1e-15);
            assert!((v[1] - Complex64::new(-s, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn unit_norm_for_large_arrays() {
        for phi in [0.0, 0.3, 1.7, PI] {
            assert!((norm(&steering_rx(phi, 64, 0.5, 1.0).unwrap()) - 1.0).abs() < 1e-12);
            assert!((norm(&steering_tx(phi, 100, 0.1, 1.0).unwrap()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_angles_outside_half_circle() {
        assert!(matches!(steering_rx(-0.1, 4, 0.5, 1.0), Err(Error::AngleOutOfRange(_))));
        assert!(matches!(steering_tx(3.2, 4, 0.5, 1.0), Err(Error::AngleOutOfRange(_))));
    }

    #[test]
    fn port_grid_form_matches_reconstruction_formula() {
        let (n, w) = (100usize, 10.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let theta: f64 = rng.random_range(0.0..PI);
            let v = steering_tx(theta, n, w / (n - 1) as f64, 1.0).unwrap();
            for (i, z) in v.iter().enumerate() {
                let expect = Complex64::from_polar(
                    1.0 / (n as f64).sqrt(),
                    -2.0 * PI * w / (n - 1) as f64 * i as f64 * theta.cos(),
                );
                assert!((z - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn generated_paths_shape_and_determinism() {
        let mut cfg = SystemConfig::default();
        cfg.l = 5;
        let a = generate_paths(&cfg, &mut ChaCha8Rng::seed_from_u64(9));
        let b = generate_paths(&cfg, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(a.aoas.iter().chain(&a.aods).all(|x| (0.0..=PI).contains(x)));
    }

    #[test]
    fn single_broadside_path_is_all_ones() {
        let paths = PathSet::new(vec![Complex64::new(1.0, 0.0)], vec![PI / 2.0], vec![PI / 2.0]).unwrap();
        let h = channel_at_positions(&paths, &[0.0, 0.2, 0.7], 4, 0.5, 1.0);
        for z in &h.entries {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn channel_json_round_trip() {
        let cfg = SystemConfig { l: 2, ..SystemConfig::default() };
        let paths = generate_paths(&cfg, &mut ChaCha8Rng::seed_from_u64(1));
        let h = channel_at_positions(&paths, &[0.0, 1.0], 3, 0.5, 1.0);
        let text = serde_json::to_string(&h).unwrap();
        let back: ChannelMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
        let text = serde_json::to_string(&paths).unwrap();
        assert!(text.starts_with("{\"gains\":[["));
        let back: PathSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, paths);
    }

    #[test]
    fn rejects_mismatched_or_unordered_matrices() {
        assert!(ChannelMatrix::new(Array2::zeros((2, 2)), vec![0.0]).is_err());
        assert!(ChannelMatrix::new(Array2::zeros((2, 2)), vec![1.0, 0.0]).is_err());
        assert!(PathSet::new(vec![Complex64::new(1.0, 0.0)], vec![], vec![0.1]).is_err());
    }
}
