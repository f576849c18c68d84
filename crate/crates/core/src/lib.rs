//! Channel estimation for fluid-antenna (FAS) multiuser mmWave uplinks.
//!
//! Users carry a linear fluid antenna with N preset ports; the BS has an
//! M-element ULA. Measuring every port (the LS benchmark) costs N antenna
//! switches. L3SCR instead measures only K estimating locations, extracts
//! the sparse path parameters (count, AoAs, AoDs, gains) and rebuilds the
//! full M x N channel from them.
//!
//! * [`geometry`]: steering vectors and the planar-wave channel model
//! * [`pilot`]: orthogonal pilots and LS estimation
//! * [`l3scr`]: the sparse estimator
//! * [`evaluation`]: NMSE, MRC sum-rate, exhaustive port selection
//! * [`harness`]: seeded Monte-Carlo experiments and CSV/JSON output
//!
//! ```
//! use fas_chanest::config::SystemConfig;
//! use fas_chanest::geometry::{channel_at_positions, generate_paths};
//! use fas_chanest::l3scr::{run_l3scr, PeakMode};
//! use rand::SeedableRng;
//!
//! let cfg = SystemConfig { m: 32, c: 1000, ..SystemConfig::default() };
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let paths = generate_paths(&cfg, &mut rng);
//! let h = channel_at_positions(&paths, &cfg.el_positions(), cfg.m, cfg.d, cfg.lambda);
//! let (sparse, g_hat) = run_l3scr(&h, &cfg, PeakMode::KnownL(cfg.l)).unwrap();
//! assert_eq!(g_hat.entries.dim(), (32, 100));
//! assert!(sparse.l_hat() <= cfg.l);
//! ```

pub mod config;
pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod harness;
pub mod l3scr;
pub mod pilot;

pub use config::SystemConfig;
pub use error::{ConfigError, Error, Result};
pub use geometry::{ChannelMatrix, PathSet};
