//! Seeded random streams and samplers on the sorted simplex.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp1, Gamma};

use crate::dist::sort_desc;
use crate::error::{Error, Result};

pub type StreamRng = ChaCha8Rng;

/// Independent stream `index` under `seed`.
///
/// Work item `i` always draws from `stream(seed, i)`, so results do not depend
/// on how items are scheduled.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Symmetric Dirichlet draw sorted in decreasing order.
pub fn sorted_dirichlet<R: Rng + ?Sized>(rng: &mut R, k: usize, concentration: f64) -> Vec<f64> {
    let mut g: Vec<f64> = if concentration == 1.0 {
        (0..k).map(|_| Exp1.sample(rng)).collect()
    } else {
        let gamma = Gamma::new(concentration, 1.0).expect("positive concentration");
        (0..k).map(|_| gamma.sample(rng)).collect()
    };
    let total: f64 = g.iter().sum();
    for x in g.iter_mut() {
        *x /= total;
    }
    sort_desc(&mut g);
    g
}

/// Smallest consecutive gap, with the last entry counted as its gap to zero.
pub fn min_gap(p: &[f64]) -> f64 {
    let inner = p.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
    inner.min(*p.last().unwrap_or(&0.0))
}

/// Sorted Dirichlet(1) draw whose consecutive gaps and last entry are all at
/// least `gap`.
pub fn sample_sorted<R: Rng + ?Sized>(rng: &mut R, k: usize, gap: f64, max_attempts: usize) -> Result<Vec<f64>> {
    for _ in 0..max_attempts {
        let p = sorted_dirichlet(rng, k, 1.0);
        if min_gap(&p) >= gap && p.iter().all(|&x| x > 0.0) {
            return Ok(p);
        }
    }
    Err(Error::SamplingFailed { attempts: max_attempts })
}

/// `r` distinct orders drawn uniformly in `[lo, hi]`, sorted.
pub fn random_orders<R: Rng + ?Sized>(rng: &mut R, r: usize, lo: f64, hi: f64) -> Vec<f64> {
    loop {
        let mut m: Vec<f64> = (0..r).map(|_| rng.random_range(lo..hi)).collect();
        m.sort_by(f64::total_cmp);
        if m.windows(2).all(|w| w[1] > w[0]) {
            return m;
        }
    }
}
