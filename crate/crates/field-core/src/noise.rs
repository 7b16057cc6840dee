//! Seeded Gaussian noise streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::Grid;

/// Deterministic stream of standard-normal samples (Box-Muller over a
/// counter-based generator). Two streams built from the same seed produce
/// bit-identical sequences.
#[derive(Debug, Clone)]
pub struct GaussStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussStream {
    pub fn from_seed(seed: u64) -> Self {
        GaussStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Next standard-normal sample.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // Box-Muller; u1 in (0,1] to keep the log finite.
        let u1: f64 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Adds `amp * xi` to every cell, with xi drawn per cell.
    pub fn add_to(&mut self, grid: &mut Grid, amp: f64) {
        if amp == 0.0 {
            return;
        }
        for v in grid.as_mut_slice() {
            *v += amp * self.next_normal();
        }
    }
}

/// Derives a stable per-component seed from a master seed and a tag.
///
/// FNV-1a over the tag, mixed into the master with a splitmix finalizer, so
/// component streams stay decorrelated and reproducible across runs.
pub fn derive_seed(master: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    let mut z = master ^ h;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
