//! Path count and AoA estimation in the DFT beamspace of the BS array.
//!
//! Bins are zero-based: bin `b` corresponds to the normalized spatial
//! frequency `b / M`.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalized M-point DFT matrix, entry `(a, b) = exp(-j 2pi a b / M) / sqrt(M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DftOperator {
    pub size: usize,
    pub matrix: Array2<Complex64>,
    adjoint: Array2<Complex64>,
}

impl DftOperator {
    pub fn new(size: usize) -> Self {
        let scale = 1.0 / (size as f64).sqrt();
        let matrix = Array2::from_shape_fn((size, size), |(a, b)| {
            // reduce the exponent modulo M before scaling to keep the phase exact
            let k = (a * b) % size;
            Complex64::from_polar(scale, -2.0 * PI * k as f64 / size as f64)
        });
        let adjoint = matrix.t().mapv(|z| z.conj());
        DftOperator {
            size,
            matrix,
            adjoint,
        }
    }

    /// `Omega^H x`.
    pub fn apply_adjoint(&self, x: &Array2<Complex64>) -> Array2<Complex64> {
        self.adjoint.dot(x)
    }
}

/// Beamspace image `(1/sqrt(MK)) Omega^H H` of an M x K estimate.
pub fn dft_transform(dft: &DftOperator, h_ls: &Array2<Complex64>) -> Array2<Complex64> {
    let (m, k) = h_ls.dim();
    let scale = 1.0 / ((m * k) as f64).sqrt();
    dft.apply_adjoint(h_ls).mapv(|z| z * scale)
}

/// How many peaks to keep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PeakMode {
    /// Keep local maxima whose row power is at least `alpha` times the largest.
    Threshold(f64),
    /// Keep exactly the `L` strongest local maxima (fewer if there are not enough).
    KnownL(usize),
}

impl Default for PeakMode {
    fn default() -> Self {
        PeakMode::Threshold(0.05)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    /// Detected bins, ascending.
    pub indices: Vec<usize>,
    pub row_powers: Vec<f64>,
    pub l_hat: usize,
}

fn cyclic_distance(a: usize, b: usize, m: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(m - d)
}

/// Finds the dominant rows of a beamspace image.
///
/// Candidates are cyclic local maxima of the row power. They are accepted
/// strongest first (lower bin on ties), skipping any candidate adjacent to an
/// accepted one, so DFT leakage next to a true peak is not counted twice.
pub fn detect_peaks(beamspace: &Array2<Complex64>, mode: PeakMode) -> Result<PeakReport> {
    if let PeakMode::Threshold(alpha) = mode {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::BadThreshold(alpha));
        }
    }
    let row_powers: Vec<f64> = beamspace
        .rows()
        .into_iter()
        .map(|r| r.iter().map(|z| z.norm_sqr()).sum())
        .collect();
    let m = row_powers.len();
    let max = row_powers.iter().copied().fold(0.0, f64::max);
    if m == 0 || max <= 0.0 {
        return Ok(PeakReport {
            indices: Vec::new(),
            row_powers,
            l_hat: 0,
        });
    }

    let mut candidates: Vec<usize> = (0..m)
        .filter(|&b| {
            let r = row_powers[b];
            r >= row_powers[(b + m - 1) % m] && r >= row_powers[(b + 1) % m]
        })
        .collect();
    if let PeakMode::Threshold(alpha) = mode {
        candidates.retain(|&b| row_powers[b] >= alpha * max);
    }
    // stable sort keeps lower bins first among equal powers
    candidates.sort_by(|&a, &b| row_powers[b].total_cmp(&row_powers[a]));

    let limit = match mode {
        PeakMode::Threshold(_) => usize::MAX,
        PeakMode::KnownL(l) => l,
    };
    let mut accepted: Vec<usize> = Vec::new();
    for b in candidates {
        if accepted.len() == limit {
            break;
        }
        if accepted.iter().all(|&a| cyclic_distance(a, b, m) >= 2) {
            accepted.push(b);
        }
    }
    accepted.sort_unstable();
    Ok(PeakReport {
        l_hat: accepted.len(),
        indices: accepted,
        row_powers,
    })
}

// The branch follows the (possibly fractional) bin itself, so a rotation that
// carries the peak across M d / lambda lands on the aliased side continuously.
fn aoa_argument(shifted_bin: f64, m: usize, d: f64, lambda: f64) -> f64 {
    let m_f = m as f64;
    if shifted_bin / m_f <= d / lambda {
        shifted_bin * lambda / (m_f * d)
    } else {
        (shifted_bin - m_f) * lambda / (m_f * d)
    }
}

/// AoA implied by an on-grid peak at `bin`.
///
/// Bins above `M d / lambda` wrap around to negative spatial frequencies,
/// which correspond to obtuse angles.
pub fn coarse_aoa(bin: usize, m: usize, d: f64, lambda: f64) -> Result<f64> {
    let arg = aoa_argument(bin as f64, m, d, lambda);
    if arg.abs() > 1.0 + 1e-12 {
        return Err(Error::UnreachableBin { bin, arg });
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}

/// Power of beamspace row `bin` after rotating the array phase by `psi`:
/// `|| row_bin((1/sqrt(MK)) Omega^H Psi(psi)^H H) ||^2`.
///
/// Only the single required row of `Omega^H Psi^H` is formed, so the cost is O(MK).
pub fn rotate_and_project(h_ls: &Array2<Complex64>, psi: f64, bin: usize) -> f64 {
    let (m, k) = h_ls.dim();
    let freq = bin as f64 / m as f64 - psi;
    let scale = 1.0 / ((m * m * k) as f64).sqrt();
    let row: Vec<Complex64> = (0..m)
        .map(|i| Complex64::from_polar(scale, 2.0 * PI * i as f64 * freq))
        .collect();
    h_ls.columns()
        .into_iter()
        .map(|col| {
            row.iter()
                .zip(col.iter())
                .map(|(r, h)| r * h)
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum()
}

/// Rotation candidates `{-1/(2M), -1/(2M) + eps, ..., 1/(2M)}`.
///
/// The step is snapped to `1/(M * round(1/(M eps)))` so both endpoints (and
/// zero, for an even count) land exactly on the grid.
pub fn rotation_grid(m: usize, epsilon: f64) -> Vec<f64> {
    let steps = ((1.0 / (m as f64 * epsilon)).round() as i64).max(1);
    let denom = 2.0 * steps as f64 * m as f64;
    (0..=steps).map(|i| (2 * i - steps) as f64 / denom).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationResult {
    pub psi: Vec<f64>,
    pub refined_aoas: Vec<f64>,
}

/// Searches the rotation grid for the phase ramp that maximizes the power at
/// `bin`, then converts the fractional bin `bin - M psi` into an AoA.
///
/// Ties go to the smaller `|psi|`, then the smaller `psi`. The arccos argument
/// is clamped to [-1, 1].
pub fn refine_aoa(
    h_ls: &Array2<Complex64>,
    bin: usize,
    d: f64,
    lambda: f64,
    epsilon: f64,
) -> (f64, f64) {
    let m = h_ls.nrows();
    let mut best_psi = 0.0f64;
    let mut best_power = f64::NEG_INFINITY;
    for psi in rotation_grid(m, epsilon) {
        let power = rotate_and_project(h_ls, psi, bin);
        let better = power > best_power
            || (power == best_power
                && (psi.abs() < best_psi.abs() || (psi.abs() == best_psi.abs() && psi < best_psi)));
        if better {
            best_power = power;
            best_psi = psi;
        }
    }
    let shifted = bin as f64 - m as f64 * best_psi;
    let arg = aoa_argument(shifted, m, d, lambda);
    (best_psi, arg.clamp(-1.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::steering_rx;
    use ndarray::Axis;

    #[test]
    fn dft_is_unitary() {
        for m in [1, 2, 7, 16, 64] {
            let op = DftOperator::new(m);
            let gram = op.adjoint.dot(&op.matrix);
            for ((a, b), z) in gram.indexed_iter() {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((z - Complex64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_input_gives_zero_beamspace() {
        let op = DftOperator::new(8);
        let out = dft_transform(&op, &Array2::zeros((8, 3)));
        assert!(out.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn coarse_aoa_grid_values() {
        let (d, lambda) = (0.5, 1.0);
        assert!((coarse_aoa(16, 64, d, lambda).unwrap() - PI / 3.0).abs() < 1e-12);
        assert!((coarse_aoa(48, 64, d, lambda).unwrap() - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((coarse_aoa(0, 64, d, lambda).unwrap() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn coarse_aoa_rejects_unreachable_band() {
        // d = lambda/4 only reaches spatial frequencies in [-1/4, 1/4]
        assert!(matches!(
            coarse_aoa(20, 64, 0.25, 1.0),
            Err(Error::UnreachableBin { bin: 20, .. })
        ));
    }

    #[test]
    fn rotation_grid_size() {
        for m in [16, 64, 128] {
            let eps = 1.0 / (100.0 * m as f64);
            let grid = rotation_grid(m, eps);
            assert_eq!(grid.len(), 101);
            assert_eq!(grid[50], 0.0);
            assert_eq!(grid[0], -1.0 / (2.0 * m as f64));
            assert_eq!(grid[100], 1.0 / (2.0 * m as f64));
        }
        assert_eq!(rotation_grid(64, 1.0 / (64.0 * 8.0)).len(), 9);
    }

    #[test]
    fn detect_peaks_tie_break_and_errors() {
        let flat = Array2::from_elem((8, 2), Complex64::new(1.0, 0.0));
        let report = detect_peaks(&flat, PeakMode::KnownL(1)).unwrap();
        assert_eq!(report.indices, vec![0]);
        assert!(detect_peaks(&flat, PeakMode::Threshold(1.5)).is_err());
        let zero = Array2::<Complex64>::zeros((8, 2));
        assert_eq!(detect_peaks(&zero, PeakMode::Threshold(0.1)).unwrap().l_hat, 0);
    }

    #[test]
    fn merge_guard_keeps_the_stronger_neighbour() {
        // bins 3 and 4 are both local maxima of a plateau; only one survives
        let mut b = Array2::<Complex64>::zeros((16, 1));
        b[(3, 0)] = Complex64::new(1.0, 0.0);
        b[(4, 0)] = Complex64::new(1.0, 0.0);
        b[(10, 0)] = Complex64::new(0.8, 0.0);
        let report = detect_peaks(&b, PeakMode::Threshold(0.05)).unwrap();
        assert_eq!(report.indices, vec![3, 10]);
        assert_eq!(report.l_hat, 2);
    }

    #[test]
    fn zero_rotation_matches_plain_dft_row_power() {
        let m = 16;
        let a = steering_rx(1.1, m, 0.5, 1.0).unwrap();
        let h = a.insert_axis(Axis(1)).to_owned();
        let beam = dft_transform(&DftOperator::new(m), &h);
        for bin in 0..m {
            let direct: f64 = beam.row(bin).iter().map(|z| z.norm_sqr()).sum();
            assert!((rotate_and_project(&h, 0.0, bin) - direct).abs() < 1e-12);
        }
    }
}
