//! Distinct distributions with equal signatures when `|M| <= K - 2`.
//!
//! Paths on a fiber `T_M^{-1}(y)` are traced by predictor-corrector
//! continuation in the open simplex, in the chart `(p_2, ..., p_K)` of the
//! start's own labeling. Points are reported sorted. Working with labels
//! rather than inside the sorted region lets a path cross tie strata, where
//! the sorted representative merely reflects.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::dist::{make_sorted, OrderSet, SortedDistribution};
use crate::entropy::{gse_logs, gse_signature, logs};
use crate::error::{Error, Result};
use crate::rng::{sample_sorted, stream};
use crate::tp::chart_jacobian;

/// Skew-ray scales tried in order; the ray is `eps_k = eps * RHO^(k-2)`.
pub const EPSILON_SCHEDULE: [f64; 5] = [0.05, 0.1, 0.2, 0.3, 0.02];
pub const RHO: f64 = 0.4;
pub const STEP: f64 = 1e-2;
pub const CORRECTOR_TOL: f64 = 1e-12;
const CORRECTOR_ITERS: usize = 30;
const HALVINGS: usize = 12;
const MAX_STEPS: usize = 2000;
const RANDOM_STARTS: u64 = 20;

/// Singular values of `j` (padded to square with zero rows when wide) in
/// decreasing order, with matching right singular vectors.
fn right_svd(j: &DMatrix<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let n = j.ncols();
    let mut a = DMatrix::zeros(n.max(j.nrows()), n);
    a.view_mut((0, 0), (j.nrows(), n)).copy_from(j);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut pairs: Vec<(f64, DVector<f64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, vt.row(i).transpose()))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs.into_iter().take(n).unzip()
}

fn rank_of(sv: &[f64], rel: f64) -> usize {
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * smax).count()
}

/// `ncols - rank`, singular values at most `rel * sigma_max` counted as zero.
pub fn null_space_dimension(j: &DMatrix<f64>, rel: f64) -> usize {
    let (sv, _) = right_svd(j);
    j.ncols() - rank_of(&sv, rel)
}

/// Orthonormal null-space basis, first nonzero component of each vector
/// made positive.
pub fn null_space(j: &DMatrix<f64>, rel: f64) -> Vec<DVector<f64>> {
    let (sv, vs) = right_svd(j);
    let rank = rank_of(&sv, rel);
    vs.into_iter()
        .skip(rank)
        .map(|mut v| {
            if let Some(&c) = v.iter().find(|c| c.abs() > 1e-12) {
                if c < 0.0 {
                    v.neg_mut();
                }
            }
            v
        })
        .collect()
}

struct Fiber<'a> {
    orders: &'a [f64],
    target: Vec<f64>,
}

impl Fiber<'_> {
    fn full(x: &[f64]) -> Vec<f64> {
        let mut p = Vec::with_capacity(x.len() + 1);
        p.push(1.0 - x.iter().sum::<f64>());
        p.extend_from_slice(x);
        p
    }

    fn residual(&self, p: &[f64]) -> DVector<f64> {
        let lp = logs(p);
        DVector::from_iterator(
            self.orders.len(),
            self.orders.iter().zip(&self.target).map(|(&m, &t)| gse_logs(&lp, None, m) - t),
        )
    }

    fn jacobian(&self, p: &[f64]) -> DMatrix<f64> {
        chart_jacobian(&logs(p), None, self.orders)
    }

    fn tangent(&self, p: &[f64], prev: Option<&DVector<f64>>) -> Option<DVector<f64>> {
        let basis = null_space(&self.jacobian(p), 1e-12);
        let first = basis.first()?.clone();
        let t = match prev {
            Some(prev) => {
                let mut t = DVector::zeros(prev.len());
                for v in &basis {
                    t += v * v.dot(prev);
                }
                if t.norm() < 1e-8 {
                    first
                } else {
                    t
                }
            }
            None => first,
        };
        // unit step in the sup norm of the full vector (p_1 moves by -sum t)
        let s = t.iter().sum::<f64>().abs().max(t.amax());
        Some(t / s)
    }

    /// Minimum-norm Gauss-Newton back onto the fiber.
    fn correct(&self, mut x: Vec<f64>) -> Option<Vec<f64>> {
        for _ in 0..CORRECTOR_ITERS {
            let p = Self::full(&x);
            if p.iter().any(|&v| !(v > 0.0)) {
                return None;
            }
            let f = self.residual(&p);
            if f.amax() <= CORRECTOR_TOL {
                return Some(x);
            }
            let j = self.jacobian(&p);
            let svd = j.clone().svd(true, true);
            let smax = svd.singular_values.max();
            let d = svd.solve(&(-f), smax * 1e-14).ok()?;
            for (a, b) in x.iter_mut().zip(d.iter()) {
                *a += b;
            }
        }
        let p = Self::full(&x);
        (p.iter().all(|&v| v > 0.0) && self.residual(&p).amax() <= CORRECTOR_TOL).then_some(x)
    }
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |s, (x, y)| s.max((x - y).abs()))
}

/// Walks along the fiber through `start`, calling `visit` on each accepted
/// labeled point until it returns `false` or `steps` points were produced.
fn walk(
    orders: &[f64],
    start: &[f64],
    steps: usize,
    step_size: f64,
    reverse: bool,
    mut visit: impl FnMut(&[f64]) -> bool,
) -> Result<usize> {
    let fiber = Fiber { orders, target: {
        let lp = logs(start);
        orders.iter().map(|&m| gse_logs(&lp, None, m)).collect()
    } };
    let j0 = fiber.jacobian(start);
    let (sv, _) = right_svd(&j0);
    let rank = rank_of(&sv, 1e-12);
    if rank < orders.len() {
        return Err(Error::RankDeficient { singular_values: sv });
    }
    let mut x: Vec<f64> = start[1..].to_vec();
    let mut prev: Option<DVector<f64>> = None;
    for done in 0..steps {
        let p = Fiber::full(&x);
        let Some(mut t) = fiber.tangent(&p, prev.as_ref()) else {
            return Err(Error::RankDeficient { singular_values: sv });
        };
        if prev.is_none() && reverse {
            t.neg_mut();
        }
        let mut h = 0.95 * step_size;
        let mut next = None;
        for _ in 0..HALVINGS {
            let pred: Vec<f64> = x.iter().zip(t.iter()).map(|(a, b)| a + h * b).collect();
            if let Some(xc) = fiber.correct(pred) {
                let pc = Fiber::full(&xc);
                if sup_dist(&pc, &p) <= step_size {
                    next = Some(xc);
                    break;
                }
            }
            h *= 0.5;
        }
        let Some(xn) = next else {
            return Err(Error::BoundaryExit { completed: done });
        };
        let dir = DVector::from_iterator(x.len(), xn.iter().zip(&x).map(|(a, b)| a - b));
        prev = Some(if dir.norm() > 0.0 { dir } else { t });
        x = xn;
        if !visit(&Fiber::full(&x)) {
            return Ok(done + 1);
        }
    }
    Ok(steps)
}

fn check_regime(k: usize, orders: &OrderSet) -> Result<()> {
    if k < 3 || orders.len() + 2 > k {
        return Err(Error::Injective { orders: orders.len(), k });
    }
    Ok(())
}

/// A discrete path of `steps + 1` sorted points on the fiber through `start`.
///
/// The first null-space direction (sign fixed by a positive first nonzero
/// component) is followed at the start; later tangents are the projection of
/// the previous direction onto the new null space.
pub fn level_set_trace(
    k: usize,
    orders: &OrderSet,
    start: &SortedDistribution,
    steps: usize,
    step_size: f64,
) -> Result<Vec<SortedDistribution>> {
    check_regime(k, orders)?;
    if start.len() != k {
        return Err(Error::LengthMismatch { field: "start", expected: k, found: start.len() });
    }
    if !(step_size > 0.0) || !step_size.is_finite() {
        return Err(Error::OutOfRange { field: "step_size", value: step_size, range: "(0, inf)" });
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(start.clone());
    let mut err = None;
    walk(orders.as_slice(), start.probs(), steps, step_size, false, |p| match make_sorted(p) {
        Ok(s) => {
            out.push(s);
            true
        }
        Err(e) => {
            err = Some(e);
            false
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Two sorted distributions with (numerically) equal signatures.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CollisionPair {
    pub p: SortedDistribution,
    pub q: SortedDistribution,
    /// `||T_M(p) - T_M(q)||_inf`, recomputed from the sorted vectors.
    pub signature_gap: f64,
    /// `||p - q||_inf`.
    pub separation: f64,
    pub orders: OrderSet,
    /// Skew-ray scale of the start; `None` for a random fallback start.
    pub epsilon: Option<f64>,
    /// Continuation steps from `p` to `q`.
    pub steps: usize,
}

/// `(1 - sum, eps, eps rho, eps rho^2, ...)`.
pub fn skew_ray(k: usize, eps: f64, rho: f64) -> Result<SortedDistribution> {
    let tail: Vec<f64> = (0..k - 1).map(|i| eps * libm::pow(rho, i as f64)).collect();
    let mut p = Vec::with_capacity(k);
    p.push(1.0 - tail.iter().sum::<f64>());
    p.extend(tail);
    SortedDistribution::new(p)
}

fn collide_from(orders: &OrderSet, start: &SortedDistribution, min_sep: f64, epsilon: Option<f64>) -> Option<CollisionPair> {
    if start.has_multiplicity() {
        return None;
    }
    let sig_p = gse_signature(start, orders).ok()?;
    let origin = start.probs().to_vec();
    for reverse in [false, true] {
        let mut found: Option<(SortedDistribution, usize)> = None;
        let mut count = 0;
        let res = walk(orders.as_slice(), &origin, MAX_STEPS, STEP, reverse, |p| {
            count += 1;
            // a closed fiber brings the path back to its start
            if count > 10 && sup_dist(p, &origin) < STEP / 2.0 {
                return false;
            }
            let Ok(q) = make_sorted(p) else { return true };
            if !q.has_multiplicity() && sup_dist(q.probs(), start.probs()) >= min_sep {
                found = Some((q, count));
                return false;
            }
            true
        });
        if res.is_err() && found.is_none() {
            continue;
        }
        if let Some((q, steps)) = found {
            let sig_q = gse_signature(&q, orders).ok()?;
            let gap = sig_p.max_abs_diff(&sig_q);
            let sep = sup_dist(q.probs(), start.probs());
            if gap <= 1e-10 && sep >= min_sep {
                return Some(CollisionPair {
                    p: start.clone(),
                    q,
                    signature_gap: gap,
                    separation: sep,
                    orders: orders.clone(),
                    epsilon,
                    steps,
                });
            }
        }
    }
    None
}

/// Starts on the skew ray for each scale in [`EPSILON_SCHEDULE`] and follows
/// the fiber both ways until the sorted endpoint is `min_separation` away.
/// If no ray start works, sorted Dirichlet starts drawn from `seed` are tried.
pub fn find_collision(k: usize, orders: &OrderSet, min_separation: f64, seed: u64) -> Result<CollisionPair> {
    check_regime(k, orders)?;
    if !(min_separation > 0.0 && min_separation <= 0.2) {
        return Err(Error::OutOfRange { field: "min_separation", value: min_separation, range: "(0, 0.2]" });
    }
    for eps in EPSILON_SCHEDULE {
        let Ok(start) = skew_ray(k, eps, RHO) else { continue };
        if let Some(pair) = collide_from(orders, &start, min_separation, Some(eps)) {
            return Ok(pair);
        }
    }
    for i in 0..RANDOM_STARTS {
        let mut rng = stream(seed, i);
        let Ok(p) = sample_sorted(&mut rng, k, 1e-3, 10_000) else { continue };
        let Ok(start) = SortedDistribution::new(p) else { continue };
        if let Some(pair) = collide_from(orders, &start, min_separation, None) {
            return Ok(pair);
        }
    }
    Err(Error::CollisionNotFound { min_separation })
}
