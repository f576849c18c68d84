//! Matched-filter recovery of AoDs and gains on the EL grid.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{ConfigError, Error, Result};
use crate::geometry::steering_tx;

/// Transmit steering vectors over the K estimating locations for the angles
/// `{0, pi/C, ..., (C-1) pi/C}`, one per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    pub c: usize,
    pub angles: Vec<f64>,
    /// K x C.
    pub matrix: Array2<Complex64>,
    adjoint: Array2<Complex64>,
}

impl Dictionary {
    /// Fails for `K < 2` (every column would look the same) and for
    /// `delta >= lambda` (grating ambiguity between distinct angles).
    pub fn new(c: usize, k: usize, delta: f64, lambda: f64) -> Result<Self> {
        if k < 2 {
            return Err(ConfigError::TooFewLocations(k).into());
        }
        if !(delta > 0.0 && delta < lambda) {
            return Err(ConfigError::LocationSpacingWavelength(delta / lambda).into());
        }
        if c < 2 {
            return Err(ConfigError::DictionaryTooSmall(c).into());
        }
        let angles: Vec<f64> = (0..c).map(|i| i as f64 * PI / c as f64).collect();
        let mut matrix = Array2::<Complex64>::zeros((k, c));
        for (col, &theta) in angles.iter().enumerate() {
            matrix
                .column_mut(col)
                .assign(&steering_tx(theta, k, delta, lambda)?);
        }
        let adjoint = matrix.t().mapv(|z| z.conj());
        Ok(Dictionary {
            c,
            angles,
            matrix,
            adjoint,
        })
    }

    pub fn locations(&self) -> usize {
        self.matrix.nrows()
    }

    /// `D^H v`.
    pub fn correlate(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        self.adjoint.dot(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AodGainEstimate {
    pub thetas: Vec<f64>,
    pub gammas: Vec<Complex64>,
    /// Winning dictionary column per path (zero-based).
    pub columns: Vec<usize>,
    /// Matched-filter magnitudes `|D^H p_l|` per path.
    pub responses: Vec<Vec<f64>>,
}

/// Projects the EL-grid estimate onto the estimated AoA subspace and runs the
/// dictionary matched filter on each projected column.
///
/// Column `l` of `(1/sqrt(MK)) H^H A_R` is approximately `conj(gamma_l) a_T(theta_l)`,
/// so the gain estimate is the conjugate of the matched-filter peak.
pub fn estimate_aod_gain(
    h_ls: &Array2<Complex64>,
    a_r_hat: &Array2<Complex64>,
    dict: &Dictionary,
) -> Result<AodGainEstimate> {
    let (m, k) = h_ls.dim();
    if k != dict.locations() {
        return Err(Error::Shape(format!(
            "estimate has {k} EL columns but the dictionary has {} rows",
            dict.locations()
        )));
    }
    if a_r_hat.nrows() != m {
        return Err(Error::Shape(format!(
            "steering matrix has {} rows, expected {m}",
            a_r_hat.nrows()
        )));
    }
    let scale = 1.0 / ((m * k) as f64).sqrt();
    let projected = h_ls.t().mapv(|z| z.conj()).dot(a_r_hat).mapv(|z| z * scale);

    let mut out = AodGainEstimate {
        thetas: Vec::with_capacity(a_r_hat.ncols()),
        gammas: Vec::with_capacity(a_r_hat.ncols()),
        columns: Vec::with_capacity(a_r_hat.ncols()),
        responses: Vec::with_capacity(a_r_hat.ncols()),
    };
    for col in projected.columns() {
        let response = dict.correlate(&col.to_owned());
        let mags: Vec<f64> = response.iter().map(|z| z.norm()).collect();
        let mut best = 0;
        for (c, &v) in mags.iter().enumerate() {
            if v > mags[best] {
                best = c;
            }
        }
        out.thetas.push(dict.angles[best]);
        out.gammas.push(response[best].conj());
        out.columns.push(best);
        out.responses.push(mags);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_grid_definition() {
        let d = Dictionary::new(4, 3, 0.5, 1.0).unwrap();
        let expect = [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0];
        for (a, e) in d.angles.iter().zip(expect) {
            assert!((a - e).abs() < 1e-15);
        }
    }

    #[test]
    fn columns_have_unit_norm() {
        let d = Dictionary::new(50, 6, 0.5, 1.0).unwrap();
        for col in d.matrix.columns() {
            let n: f64 = col.iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn construction_enforces_el_constraints() {
        assert!(matches!(
            Dictionary::new(10, 1, 0.5, 1.0),
            Err(Error::Config(ConfigError::TooFewLocations(1)))
        ));
        assert!(matches!(
            Dictionary::new(10, 4, 1.0, 1.0),
            Err(Error::Config(ConfigError::LocationSpacingWavelength(_)))
        ));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let d = Dictionary::new(10, 4, 0.5, 1.0).unwrap();
        let h = Array2::<Complex64>::zeros((8, 5));
        let a = Array2::<Complex64>::zeros((8, 1));
        assert!(matches!(estimate_aod_gain(&h, &a, &d), Err(Error::Shape(_))));
    }
}
