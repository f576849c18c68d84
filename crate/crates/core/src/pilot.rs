//! Orthogonal-pilot uplink training and least-squares channel estimation.
//!
//! Every user sits at the same position index while the BS collects `T`
//! subframes of `U` pilot slots. Correlating with a user's pilot column removes
//! the other users exactly and leaves per-entry noise of variance `1/(T p_u)`.

use std::f64::consts::PI;

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;
use rand::Rng;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::geometry::{complex_gaussian, ChannelMatrix};

/// Columns of a unitary matrix, one pilot sequence per user.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotBook {
    pub q: Array2<Complex64>,
}

impl PilotBook {
    pub fn users(&self) -> usize {
        self.q.ncols()
    }

    pub fn column(&self, u: usize) -> ArrayView1<'_, Complex64> {
        self.q.column(u)
    }
}

/// The U-point unitary DFT as a pilot book.
pub fn make_pilots(u: usize) -> PilotBook {
    let scale = 1.0 / (u as f64).sqrt();
    let q = Array2::from_shape_fn((u, u), |(r, c)| {
        Complex64::from_polar(scale, -2.0 * PI * (r * c) as f64 / u as f64)
    });
    PilotBook { q }
}

/// How [`ls_sweep`] produces its estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsMode {
    /// Simulate every pilot subframe and correlate.
    Full,
    /// Truth plus CN(0, 1/(T p_u)) noise, equal in distribution to `Full`.
    Fast,
    /// No noise at all (the infinite-power limit).
    Noiseless,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsEstimate {
    pub estimate: ChannelMatrix,
    /// Per-entry variance of the estimation error.
    pub noise_variance: f64,
}

/// One pilot subframe received at the BS: `sum_u sqrt(p_u) g_u q_u^H + Z`.
///
/// `channels[u]` is user `u`'s channel at the common position. With
/// `noisy = false` the noise matrix is omitted.
pub fn simulate_pilot_rx<R: Rng + ?Sized>(
    channels: &[ArrayView1<'_, Complex64>],
    pilots: &PilotBook,
    powers: &[f64],
    noisy: bool,
    rng: &mut R,
) -> Array2<Complex64> {
    let m = channels[0].len();
    let slots = pilots.q.nrows();
    let mut y = Array2::<Complex64>::zeros((m, slots));
    for (u, g) in channels.iter().enumerate() {
        let amp = powers[u].sqrt();
        for s in 0..slots {
            let q = pilots.q[(s, u)].conj();
            for i in 0..m {
                y[(i, s)] += amp * g[i] * q;
            }
        }
    }
    if noisy {
        y.mapv_inplace(|z| z + complex_gaussian(rng, 1.0));
    }
    y
}

/// Per-user LS estimates `(1/(T sqrt(p_u))) sum_t Y(t) q_u` from `T` subframes.
pub fn ls_estimate(
    received: &[Array2<Complex64>],
    pilots: &PilotBook,
    powers: &[f64],
) -> Vec<Array1<Complex64>> {
    let t = received.len() as f64;
    let mut sum = received[0].clone();
    for y in &received[1..] {
        sum += y;
    }
    (0..pilots.users())
        .map(|u| {
            let scale = 1.0 / (t * powers[u].sqrt());
            sum.dot(&pilots.column(u)).mapv(|z| z * scale)
        })
        .collect()
}

/// LS estimates for all users over every column of their true channels.
///
/// The channels must share one position grid, either the N ports or the K
/// estimating locations.
pub fn ls_sweep<R: Rng + ?Sized>(
    true_channels: &[ChannelMatrix],
    config: &SystemConfig,
    rng: &mut R,
    mode: LsMode,
) -> Result<Vec<LsEstimate>> {
    if true_channels.len() != config.p.len() {
        return Err(Error::Shape(format!(
            "{} channels but {} power entries",
            true_channels.len(),
            config.p.len()
        )));
    }
    let first = &true_channels[0];
    if true_channels
        .iter()
        .any(|c| c.entries.dim() != first.entries.dim() || c.positions != first.positions)
    {
        return Err(Error::Shape("user channels must share one position grid".into()));
    }
    let t = config.t;
    let variance = |p: f64| match mode {
        LsMode::Noiseless => 0.0,
        _ => 1.0 / (t as f64 * p),
    };

    let estimates = match mode {
        LsMode::Noiseless => true_channels.iter().map(|c| c.entries.clone()).collect(),
        LsMode::Fast => true_channels
            .iter()
            .zip(&config.p)
            .map(|(c, &p)| {
                let var = variance(p);
                c.entries.mapv(|z| z + complex_gaussian(rng, var))
            })
            .collect(),
        LsMode::Full => {
            let pilots = make_pilots(true_channels.len());
            let (m, cols) = first.entries.dim();
            let mut out = vec![Array2::<Complex64>::zeros((m, cols)); true_channels.len()];
            for n in 0..cols {
                let columns: Vec<_> = true_channels.iter().map(|c| c.entries.column(n)).collect();
                let received: Vec<_> = (0..t)
                    .map(|_| simulate_pilot_rx(&columns, &pilots, &config.p, true, rng))
                    .collect();
                for (u, g) in ls_estimate(&received, &pilots, &config.p).into_iter().enumerate() {
                    out[u].column_mut(n).assign(&g);
                }
            }
            out
        }
    };

    Ok(estimates
        .into_iter()
        .zip(&config.p)
        .map(|(entries, &p)| LsEstimate {
            estimate: ChannelMatrix {
                entries,
                positions: first.positions.clone(),
            },
            noise_variance: variance(p),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_unitary(book: &PilotBook) {
        let gram = book.q.t().mapv(|z| z.conj()).dot(&book.q);
        for ((r, c), z) in gram.indexed_iter() {
            let expect = if r == c { 1.0 } else { 0.0 };
            assert!((z - Complex64::new(expect, 0.0)).norm() < 1e-12, "({r},{c}) = {z}");
        }
    }

    #[test]
    fn pilot_books_are_unitary() {
        for u in 1..=6 {
            assert_unitary(&make_pilots(u));
        }
        assert_eq!(make_pilots(1).q[(0, 0)], Complex64::new(1.0, 0.0));
        let two = make_pilots(2);
        let s = 1.0 / 2f64.sqrt();
        assert!((two.q[(1, 1)] - Complex64::new(-s, 0.0)).norm() < 1e-15);
        assert!((two.q[(0, 1)] - Complex64::new(s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn noiseless_single_user_is_scaled_channel() {
        let g = Array1::from(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let y = simulate_pilot_rx(&[g.view()], &make_pilots(1), &[4.0], false, &mut rng);
        for i in 0..2 {
            assert!((y[(i, 0)] - 2.0 * g[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn orthogonal_pilots_separate_two_users() {
        let g1 = Array1::from(vec![Complex64::new(1.0, -1.0), Complex64::new(0.3, 0.2)]);
        let g2 = Array1::from(vec![Complex64::new(-2.0, 0.5), Complex64::new(0.0, 1.0)]);
        let book = make_pilots(2);
        let powers = [3.0, 7.0];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let y = simulate_pilot_rx(&[g1.view(), g2.view()], &book, &powers, false, &mut rng);
        let proj = y.dot(&book.column(0));
        for i in 0..2 {
            assert!((proj[i] - powers[0].sqrt() * g1[i]).norm() < 1e-12);
        }
        let est = ls_estimate(&[y.clone(), y], &book, &powers);
        for i in 0..2 {
            assert!((est[0][i] - g1[i]).norm() < 1e-12);
            assert!((est[1][i] - g2[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn noise_energy_matches_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (m, u) = (8, 3);
        let zero = Array1::<Complex64>::zeros(m);
        let views = vec![zero.view(); u];
        let book = make_pilots(u);
        let draws = 1000;
        let total: f64 = (0..draws)
            .map(|_| {
                simulate_pilot_rx(&views, &book, &[1.0; 3], true, &mut rng)
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum::<f64>()
            })
            .sum();
        let mean = total / draws as f64;
        assert!((mean / (m * u) as f64 - 1.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn ls_sweep_shapes_and_noiseless_identity() {
        let cfg = SystemConfig { m: 4, n: 100, ..SystemConfig::default() };
        let truth: Vec<_> = (0..cfg.u)
            .map(|u| {
                ChannelMatrix::new(
                    Array2::from_elem((4, 100), Complex64::new(u as f64, 1.0)),
                    cfg.port_positions(),
                )
                .unwrap()
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let est = ls_sweep(&truth, &cfg, &mut rng, LsMode::Noiseless).unwrap();
        assert_eq!(est[1].estimate, truth[1]);
        assert_eq!(est[1].noise_variance, 0.0);
        let est = ls_sweep(&truth, &cfg, &mut rng, LsMode::Fast).unwrap();
        assert_eq!(est[0].estimate.num_positions(), 100);
        assert!((est[0].noise_variance - 0.1).abs() < 1e-12);
    }
}
