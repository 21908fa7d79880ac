//! Signature-based goodness-of-fit and two-sample tests on count data.
//!
//! Counts are canonicalized by sorting before anything is computed, so every
//! statistic and p-value is bit-identical under relabeling of categories.
//! Alphabets of different sizes compare directly through their signatures.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Binomial, Distribution as _};

use crate::dist::{sort_desc, Distribution, GseSignature, OrderSet};
use crate::entropy::{gse_logs, logs};
use crate::error::{Error, Result};
use crate::rng::stream;

/// Smallest admitted number of bootstrap replicates.
pub const MIN_REPLICATES: usize = 99;

/// Nonnegative category counts with at least two positive entries.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "CountsRepr", into = "CountsRepr"))]
pub struct CountVector {
    counts: Vec<u64>,
    total: u64,
}

impl CountVector {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        let positive = counts.iter().filter(|&&c| c > 0).count();
        if positive < 2 {
            return Err(Error::TooFewCategories { field: "counts", min: 2, found: positive });
        }
        let total = counts.iter().sum();
        Ok(CountVector { counts, total })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Positive counts in decreasing order.
    pub fn canonical(&self) -> Vec<u64> {
        let mut c: Vec<u64> = self.counts.iter().copied().filter(|&c| c > 0).collect();
        c.sort_unstable_by(|a, b| b.cmp(a));
        c
    }

    /// Empirical distribution with zero categories dropped, sorted.
    pub fn empirical(&self) -> Distribution {
        let n = self.total as f64;
        Distribution::new(self.canonical().iter().map(|&c| c as f64 / n).collect())
            .expect("two positive counts give a valid distribution")
    }
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct CountsRepr {
    counts: Vec<u64>,
}

#[cfg(feature = "serde")]
impl TryFrom<CountsRepr> for CountVector {
    type Error = Error;
    fn try_from(r: CountsRepr) -> Result<Self> {
        CountVector::new(r.counts)
    }
}

#[cfg(feature = "serde")]
impl From<CountVector> for CountsRepr {
    fn from(c: CountVector) -> Self {
        CountsRepr { counts: c.counts }
    }
}

/// Plug-in values for sorted positive counts; a single occupied category has
/// entropy zero at every order.
fn plugin_values(sorted: &[u64], total: u64, orders: &[f64]) -> Vec<f64> {
    let occupied: Vec<f64> = sorted.iter().filter(|&&c| c > 0).map(|&c| c as f64 / total as f64).collect();
    if occupied.len() < 2 {
        return alloc::vec![0.0; orders.len()];
    }
    let lp = logs(&occupied);
    orders.iter().map(|&m| gse_logs(&lp, None, m)).collect()
}

/// Signature of the empirical distribution.
pub fn plugin_signature(c: &CountVector, orders: &OrderSet) -> Result<GseSignature> {
    GseSignature::new(orders.clone(), plugin_values(&c.canonical(), c.total, orders.as_slice()))
}

/// Multinomial draw by sequential binomials, written into `out` sorted.
fn multinomial<R: Rng + ?Sized>(rng: &mut R, n: u64, probs: &[f64], out: &mut Vec<u64>) {
    out.clear();
    let mut left = n;
    let mut mass = 1.0f64;
    for (i, &p) in probs.iter().enumerate() {
        if i + 1 == probs.len() {
            out.push(left);
            break;
        }
        let x = if left == 0 || mass <= 0.0 {
            0
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q).expect("valid binomial").sample(rng)
        };
        out.push(x);
        left -= x;
        mass -= p;
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TestMethod {
    ParametricBootstrap,
    RecenteredBootstrap,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TestReport {
    pub statistic: f64,
    /// `(1 + #{replicate >= statistic}) / (B + 1)`.
    pub p_value: f64,
    pub replicates: usize,
    pub exceedances: usize,
    pub seed: u64,
    pub orders: OrderSet,
    pub method: TestMethod,
    /// Plug-in signature of the (first) sample.
    pub observed: Vec<f64>,
    /// Null signature, or the plug-in signature of the second sample.
    pub reference: Vec<f64>,
}

fn check_replicates(b: usize) -> Result<()> {
    if b < MIN_REPLICATES {
        return Err(Error::OutOfRange { field: "B", value: b as f64, range: ">= 99" });
    }
    Ok(())
}

fn replicate_stats(b: usize, f: impl Fn(usize) -> f64 + Sync + Send) -> Vec<f64> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..b).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..b).map(f).collect()
    }
}

fn report(statistic: f64, stats: &[f64], seed: u64, orders: &OrderSet, method: TestMethod, observed: Vec<f64>, reference: Vec<f64>) -> TestReport {
    let exceed = stats.iter().filter(|&&s| s >= statistic).count();
    TestReport {
        statistic,
        p_value: (1 + exceed) as f64 / (stats.len() + 1) as f64,
        replicates: stats.len(),
        exceedances: exceed,
        seed,
        orders: orders.clone(),
        method,
        observed,
        reference,
    }
}

/// Tests `c ~ Multinomial(N, q)` with `D = sum_m (H_hat^(m) - H^(m)(q))^2`
/// against a parametric bootstrap from `q`.
pub fn gof_test(c: &CountVector, q: &Distribution, orders: &OrderSet, b: usize, seed: u64) -> Result<TestReport> {
    check_replicates(b)?;
    let m = orders.as_slice();
    let mut qs = q.probs().to_vec();
    sort_desc(&mut qs);
    let lq = logs(&qs);
    let reference: Vec<f64> = m.iter().map(|&o| gse_logs(&lq, None, o)).collect();
    let observed = plugin_values(&c.canonical(), c.total, m);
    let dist = |s: &[f64]| s.iter().zip(&reference).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    let statistic = dist(&observed);
    let n = c.total;
    let stats = replicate_stats(b, |i| {
        let mut rng = stream(seed, i as u64);
        let mut draw = Vec::with_capacity(qs.len());
        multinomial(&mut rng, n, &qs, &mut draw);
        dist(&plugin_values(&draw, n, m))
    });
    Ok(report(statistic, &stats, seed, orders, TestMethod::ParametricBootstrap, observed, reference))
}

fn l2(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Compares two samples, possibly over different alphabets, with
/// `D = ||s_a - s_b||_2` and a recentered bootstrap: each side is resampled
/// from its own empirical distribution and
/// `D* = ||(s*_a - s_a) - (s*_b - s_b)||_2`.
pub fn two_sample_test(a: &CountVector, b: &CountVector, orders: &OrderSet, reps: usize, seed: u64) -> Result<TestReport> {
    check_replicates(reps)?;
    let m = orders.as_slice();
    let (ca, cb) = (a.canonical(), b.canonical());
    let sa = plugin_values(&ca, a.total, m);
    let sb = plugin_values(&cb, b.total, m);
    let statistic = l2(&sa, &sb);
    let pa: Vec<f64> = ca.iter().map(|&c| c as f64 / a.total as f64).collect();
    let pb: Vec<f64> = cb.iter().map(|&c| c as f64 / b.total as f64).collect();
    let stats = replicate_stats(reps, |i| {
        let mut rng = stream(seed, i as u64);
        let mut draw = Vec::with_capacity(pa.len().max(pb.len()));
        multinomial(&mut rng, a.total, &pa, &mut draw);
        let ra = plugin_values(&draw, a.total, m);
        multinomial(&mut rng, b.total, &pb, &mut draw);
        let rb = plugin_values(&draw, b.total, m);
        let da: Vec<f64> = ra.iter().zip(&sa).map(|(x, y)| x - y).collect();
        let db: Vec<f64> = rb.iter().zip(&sb).map(|(x, y)| x - y).collect();
        l2(&da, &db)
    });
    Ok(report(statistic, &stats, seed, orders, TestMethod::RecenteredBootstrap, sa, sb))
}
