//! Estimation error, MRC sum-rate and exhaustive FAS port selection.
//!
//! Rates are in bits/s/Hz (log base 2) with unit noise power. Port decisions
//! and receivers may come from estimated channels, but achieved rates are
//! always evaluated against the true channels.

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ChannelMatrix;

/// `sum_u ||G_u - G^_u||_F^2 / sum_u ||G_u||_F^2` for one realization.
pub fn nmse(true_channels: &[ChannelMatrix], estimates: &[ChannelMatrix]) -> Result<f64> {
    if true_channels.len() != estimates.len() {
        return Err(Error::Shape(format!(
            "{} true channels but {} estimates",
            true_channels.len(),
            estimates.len()
        )));
    }
    let mut err = 0.0;
    let mut power = 0.0;
    for (g, e) in true_channels.iter().zip(estimates) {
        if g.entries.dim() != e.entries.dim() {
            return Err(Error::Shape(format!(
                "estimate is {:?}, truth is {:?}",
                e.entries.dim(),
                g.entries.dim()
            )));
        }
        err += g
            .entries
            .iter()
            .zip(e.entries.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>();
        power += g.frobenius_sq();
    }
    if power == 0.0 {
        return Err(Error::ZeroChannel);
    }
    Ok(err / power)
}

/// Unit-norm maximum-ratio combiner `g / ||g||`.
pub fn mrc_receiver(g: ArrayView1<'_, Complex64>) -> Result<Array1<Complex64>> {
    let norm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(g.mapv(|z| z / norm))
}

fn inner(w: &Array1<Complex64>, g: ArrayView1<'_, Complex64>) -> Complex64 {
    w.iter().zip(g.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Uplink sum-rate with linear receivers.
///
/// User `u` transmits from port `ports[u]` of `true_channels[u]` and is
/// detected with `receivers[u]`. A zero receiver contributes zero rate.
pub fn sum_rate(
    true_channels: &[ChannelMatrix],
    receivers: &[Array1<Complex64>],
    ports: &[usize],
    powers: &[f64],
) -> f64 {
    let columns: Vec<_> = true_channels
        .iter()
        .zip(ports)
        .map(|(g, &n)| g.entries.column(n))
        .collect();
    receivers
        .iter()
        .enumerate()
        .map(|(u, w)| {
            let w_norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>();
            if w_norm == 0.0 {
                return 0.0;
            }
            let signal = powers[u] * inner(w, columns[u]).norm_sqr();
            let interference: f64 = columns
                .iter()
                .enumerate()
                .filter(|&(v, _)| v != u)
                .map(|(v, g)| powers[v] * inner(w, *g).norm_sqr())
                .sum();
            (1.0 + signal / (interference + w_norm)).log2()
        })
        .sum()
}

/// Ports chosen by exhaustive search on some channel knowledge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortSelection {
    /// Zero-based port per user.
    pub ports: Vec<usize>,
    /// Rate on the true channels with these ports and decision-side receivers.
    pub achieved_rate: f64,
    /// Rate the decision channels predicted for these ports.
    pub decision_rate: f64,
}

/// Metrics from one channel realization; `None` where a method was not run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub nmse_ls: Option<f64>,
    pub nmse_l3scr: Option<f64>,
    pub rate_perfect: Option<f64>,
    pub rate_ls: Option<f64>,
    pub rate_l3scr: Option<f64>,
    pub ports_perfect: Option<PortSelection>,
    pub ports_ls: Option<PortSelection>,
    pub ports_l3scr: Option<PortSelection>,
}

/// Exhaustive search over all `N^U` port tuples.
///
/// Receivers are MRC on the decision channels (zero where a decision column
/// vanishes), the tuple maximizing the decision-side sum-rate wins, and ties
/// go to the lexicographically smallest tuple. The returned
/// `achieved_rate` re-evaluates that choice on `true_channels`.
pub fn best_ports(
    decision: &[ChannelMatrix],
    true_channels: &[ChannelMatrix],
    powers: &[f64],
) -> Result<PortSelection> {
    let users = decision.len();
    if users == 0 || true_channels.len() != users || powers.len() != users {
        return Err(Error::Shape(format!(
            "{users} decision channels, {} true channels, {} powers",
            true_channels.len(),
            powers.len()
        )));
    }
    let (m, n) = decision[0].entries.dim();
    if decision
        .iter()
        .chain(true_channels)
        .any(|g| g.entries.dim() != (m, n))
    {
        return Err(Error::Shape("all channels must be M x N with equal shape".into()));
    }

    // unit-norm MRC per (user, port) as rows of an N x M matrix of w^H;
    // a zero decision column keeps a zero receiver and zero own gain
    let mut receivers_h = Vec::with_capacity(users);
    let mut own = Vec::with_capacity(users);
    for (g, &p) in decision.iter().zip(powers) {
        let mut wh = Array2::<Complex64>::zeros((n, m));
        let mut gains = vec![0.0; n];
        for (port, col) in g.entries.columns().into_iter().enumerate() {
            if let Ok(w) = mrc_receiver(col) {
                wh.row_mut(port).assign(&w.mapv(|z| z.conj()));
                gains[port] = p * col.iter().map(|z| z.norm_sqr()).sum::<f64>();
            }
        }
        receivers_h.push(wh);
        own.push(gains);
    }
    // cross[u][v][(n_u, n_v)] = p_v |w_{u,n_u}^H g_{v,n_v}|^2
    let cross: Vec<Vec<Option<Array2<f64>>>> = (0..users)
        .map(|u| {
            (0..users)
                .map(|v| {
                    (u != v).then(|| {
                        receivers_h[u]
                            .dot(&decision[v].entries)
                            .mapv(|z| powers[v] * z.norm_sqr())
                    })
                })
                .collect()
        })
        .collect();

    let mut tuple = vec![0usize; users];
    let mut best_tuple = tuple.clone();
    let mut best_rate = f64::NEG_INFINITY;
    loop {
        let rate: f64 = (0..users)
            .map(|u| {
                let nu = tuple[u];
                let interference: f64 = (0..users)
                    .filter(|&v| v != u)
                    .map(|v| cross[u][v].as_ref().map_or(0.0, |c| c[(nu, tuple[v])]))
                    .sum();
                (1.0 + own[u][nu] / (interference + 1.0)).log2()
            })
            .sum();
        if rate > best_rate {
            best_rate = rate;
            best_tuple.copy_from_slice(&tuple);
        }
        // odometer, last user fastest: lexicographic order
        let mut pos = users;
        loop {
            if pos == 0 {
                let receivers: Vec<Array1<Complex64>> = (0..users)
                    .map(|u| receivers_h[u].row(best_tuple[u]).mapv(|z| z.conj()))
                    .collect();
                let achieved = sum_rate(true_channels, &receivers, &best_tuple, powers);
                return Ok(PortSelection {
                    ports: best_tuple,
                    achieved_rate: achieved,
                    decision_rate: best_rate,
                });
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single(entries: Array2<Complex64>) -> ChannelMatrix {
        let cols = entries.ncols();
        ChannelMatrix::new(entries, (0..cols).map(|i| i as f64).collect()).unwrap()
    }

    #[test]
    fn nmse_basic_cases() {
        let g = single(array![[c(1.0, 0.0), c(0.0, 2.0)], [c(-1.0, 1.0), c(0.5, 0.0)]]);
        assert_eq!(nmse(&[g.clone()], &[g.clone()]).unwrap(), 0.0);
        let zero = single(Array2::zeros((2, 2)));
        assert!((nmse(&[g.clone()], &[zero.clone()]).unwrap() - 1.0).abs() < 1e-15);
        // ||G||^2 = 1 + 4 + 2 + 0.25 = 7.25, ||E||^2 = 0.01 + 0.25 = 0.26
        let mut e = g.clone();
        e.entries[(0, 0)] += c(0.1, 0.0);
        e.entries[(1, 1)] += c(0.0, -0.5);
        assert!((nmse(&[g.clone()], &[e]).unwrap() - 0.26 / 7.25).abs() < 1e-12);
        assert!(matches!(nmse(&[zero.clone()], &[zero]), Err(Error::ZeroChannel)));
    }

    #[test]
    fn mrc_is_unit_norm() {
        let w = mrc_receiver(array![c(1.0, 0.0), c(0.0, 0.0)].view()).unwrap();
        assert_eq!(w, array![c(1.0, 0.0), c(0.0, 0.0)]);
        let w = mrc_receiver(array![c(3.0, -1.0), c(0.2, 2.0), c(-1.0, 0.5)].view()).unwrap();
        assert!((w.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(matches!(
            mrc_receiver(array![c(0.0, 0.0)].view()),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn single_user_closed_form() {
        let g = single(array![[c(1.0, 1.0)], [c(0.5, -2.0)]]);
        let w = mrc_receiver(g.entries.column(0)).unwrap();
        let norm_sq = 2.0 + 0.25 + 4.0;
        let r = sum_rate(&[g], &[w], &[0], &[3.0]);
        assert!((r - (1.0f64 + 3.0 * norm_sq).log2()).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_users_do_not_interfere() {
        let g1 = single(array![[c(1.0, 0.0)], [c(0.0, 0.0)]]);
        let g2 = single(array![[c(0.0, 0.0)], [c(0.0, 1.0)]]);
        let ws: Vec<_> = [&g1, &g2]
            .iter()
            .map(|g| mrc_receiver(g.entries.column(0)).unwrap())
            .collect();
        let r = sum_rate(&[g1, g2], &ws, &[0, 0], &[10.0, 10.0]);
        assert!((r - 2.0 * 11f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn rate_is_invariant_to_receiver_scale() {
        let g1 = single(array![[c(1.0, 0.3)], [c(0.4, -0.2)]]);
        let g2 = single(array![[c(-0.7, 0.1)], [c(0.9, 0.9)]]);
        let w1 = mrc_receiver(g1.entries.column(0)).unwrap();
        let w2 = mrc_receiver(g2.entries.column(0)).unwrap();
        let chans = [g1, g2];
        let a = sum_rate(&chans, &[w1.clone(), w2.clone()], &[0, 0], &[2.0, 5.0]);
        let b = sum_rate(&chans, &[w1.mapv(|z| z * 2.0), w2], &[0, 0], &[2.0, 5.0]);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn picks_the_stronger_port_for_one_user() {
        let g = single(array![[c(0.1, 0.0), c(1.0, 0.0)], [c(0.0, 0.1), c(0.0, 1.0)]]);
        let sel = best_ports(&[g.clone()], &[g], &[1.0]).unwrap();
        assert_eq!(sel.ports, vec![1]);
        assert!((sel.achieved_rate - sel.decision_rate).abs() < 1e-12);
    }

    #[test]
    fn zero_decision_channel_yields_zero_rate() {
        let truth = single(array![[c(1.0, 0.0), c(1.0, 0.0)]]);
        let zero = single(Array2::zeros((1, 2)));
        let sel = best_ports(&[zero], &[truth], &[1.0]).unwrap();
        assert_eq!(sel.ports, vec![0]);
        assert_eq!(sel.achieved_rate, 0.0);
    }
}
