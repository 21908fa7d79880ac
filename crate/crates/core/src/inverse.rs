//! Inversion of signatures back to sorted distributions.
//!
//! The unknowns are the distinct values `a_1 > ... > a_s` of a sorted
//! distribution with known group sizes `n_j` (all ones in the generic case).
//! The chart is `(a_2, ..., a_s)` with `a_1 = (1 - sum_{j>=2} n_j a_j) / n_1`,
//! and the residual is `T_M(a) - target`.
//!
//! Local solves are damped Gauss-Newton (fraction-to-boundary truncation,
//! Armijo backtracking) with a Levenberg-Marquardt fallback. Starts come from
//! a pool of sorted Dirichlet draws ranked by residual. A start that stalls
//! next to a tie is split apart and retried, since the Jacobian has two equal
//! columns on a tie and the merit has spurious stationary points there.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::dist::{GseSignature, OrderSet, SortedDistribution, DEFAULT_TIE_TOL, SUM_TOL};
use crate::entropy::{check_order, gse_logs};
use crate::error::{Error, Result};
use crate::rng::{sorted_dirichlet, stream};
use crate::tp::chart_jacobian;

const CONCENTRATIONS: [f64; 5] = [0.3, 1.0, 3.0, 10.0, 30.0];
const SPLITS: [f64; 4] = [0.5, 0.1, 0.02, 0.004];
const SPLIT_DEPTH: usize = 3;
const MAX_LOCAL_SOLVES: usize = 400;
const POLISH_STEPS: usize = 6;
const FLOOR: f64 = 1e-15;
const ARMIJO: f64 = 1e-4;
const BOUNDARY_FRACTION: f64 = 0.995;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecoverOptions {
    /// Per-component signature match required for success.
    pub tol: f64,
    /// `||F||_inf` at which a local solve counts as converged.
    pub stop_tol: f64,
    /// Step norm below which a local solve stops.
    pub step_tol: f64,
    /// Number of ranked candidate starts tried.
    pub max_restarts: usize,
    /// Size of the candidate pool the starts are drawn from.
    pub candidates: usize,
    pub max_iter: usize,
    /// Iterates keep every gap (and the last value) at least this large.
    pub min_gap: f64,
    pub tie_tol: f64,
    pub seed: u64,
    pub trace: bool,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        RecoverOptions {
            tol: 1e-9,
            stop_tol: 1e-11,
            step_tol: 1e-14,
            max_restarts: 20,
            candidates: 2000,
            max_iter: 200,
            min_gap: 1e-14,
            tie_tol: DEFAULT_TIE_TOL,
            seed: 42,
            trace: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum LocalSolver {
    GaussNewton,
    LevenbergMarquardt,
}

/// One accepted step of a local solve.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceEntry {
    /// Index of the local solve this step belongs to.
    pub solve: usize,
    pub solver: LocalSolver,
    pub iteration: usize,
    /// `0.5 ||F||^2` after the step.
    pub merit: f64,
    pub step_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecoveryResult {
    pub distribution: SortedDistribution,
    /// `||T_M(result) - target||_inf`.
    pub residual_norm: f64,
    pub iterations: usize,
    pub restarts_used: usize,
    pub converged: bool,
    /// The result sits on a tie stratum (some gap within `tie_tol`).
    pub multiplicity: bool,
    /// Smallest singular value of the chart Jacobian at the result.
    pub sigma_min: Option<f64>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none", default))]
    pub trace: Option<Vec<TraceEntry>>,
}

/// Group sizes `n_j` and distinct values `a_1 > ... > a_s`, `sum n_j a_j = 1`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultiplicityStructure {
    pub counts: Vec<usize>,
    pub values: Vec<f64>,
}

impl MultiplicityStructure {
    pub fn new(counts: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        check_counts(&counts)?;
        if values.len() != counts.len() {
            return Err(Error::LengthMismatch { field: "values", expected: counts.len(), found: values.len() });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::BadEntry { field: "values", index, value, reason: "must be positive" });
            }
        }
        if let Some(i) = values.windows(2).position(|w| w[1] >= w[0]) {
            return Err(Error::NotSorted { field: "values", index: i + 1 });
        }
        let sum: f64 = counts.iter().zip(&values).map(|(&n, &a)| n as f64 * a).sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::NotNormalized { field: "values", sum });
        }
        Ok(MultiplicityStructure { counts, values })
    }

    pub fn k(&self) -> usize {
        self.counts.iter().sum()
    }

    /// The full sorted vector with every value repeated `n_j` times.
    pub fn expand(&self) -> Vec<f64> {
        self.counts
            .iter()
            .zip(&self.values)
            .flat_map(|(&n, &a)| core::iter::repeat(a).take(n))
            .collect()
    }
}

fn check_counts(counts: &[usize]) -> Result<()> {
    if counts.is_empty() {
        return Err(Error::TooFewCategories { field: "counts", min: 1, found: 0 });
    }
    if let Some((index, _)) = counts.iter().enumerate().find(|(_, &n)| n == 0) {
        return Err(Error::BadEntry { field: "counts", index, value: 0.0, reason: "must be positive" });
    }
    if counts.iter().sum::<usize>() < 2 {
        return Err(Error::TooFewCategories { field: "counts", min: 2, found: counts.iter().sum() });
    }
    Ok(())
}

/// Residual and Jacobian of the signature map in the multiplicity chart.
struct Chart<'a> {
    n: Vec<f64>,
    orders: &'a [f64],
    target: &'a [f64],
    min_gap: f64,
}

impl Chart<'_> {
    fn values(&self, x: &[f64]) -> Vec<f64> {
        let rest: f64 = x.iter().zip(&self.n[1..]).map(|(a, n)| a * n).sum();
        let mut a = Vec::with_capacity(x.len() + 1);
        a.push((1.0 - rest) / self.n[0]);
        a.extend_from_slice(x);
        a
    }

    fn gaps(&self, x: &[f64]) -> Vec<f64> {
        let a = self.values(x);
        let mut g: Vec<f64> = a.windows(2).map(|w| w[0] - w[1]).collect();
        g.push(a[a.len() - 1]);
        g
    }

    fn feasible(&self, x: &[f64]) -> bool {
        x.iter().all(|v| v.is_finite()) && self.gaps(x).iter().all(|&g| g >= self.min_gap)
    }

    fn log_values(&self, x: &[f64]) -> Vec<f64> {
        self.values(x).iter().map(|&v| libm::log(v)).collect()
    }

    fn residual(&self, x: &[f64]) -> DVector<f64> {
        let lp = self.log_values(x);
        DVector::from_iterator(
            self.orders.len(),
            self.orders.iter().zip(self.target).map(|(&m, &t)| gse_logs(&lp, Some(&self.n), m) - t),
        )
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        chart_jacobian(&self.log_values(x), Some(&self.n), self.orders)
    }

    /// Largest `t <= 1` keeping `x + t d` at least `min_gap` from the boundary.
    fn max_step(&self, x: &[f64], d: &DVector<f64>) -> f64 {
        let g0 = self.gaps(x);
        let xd: Vec<f64> = x.iter().zip(d.iter()).map(|(a, b)| a + b).collect();
        let g1 = self.gaps(&xd);
        let mut t = 1.0f64;
        for (a, b) in g0.iter().zip(&g1) {
            let dg = b - a;
            if dg < 0.0 {
                t = t.min(BOUNDARY_FRACTION * (a - self.min_gap).max(0.0) / -dg);
            }
        }
        t
    }
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |s, x| s.max(x.abs()))
}

fn lstsq(j: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = j.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |s, &x| s.max(x));
    let eps = smax * j.nrows().max(j.ncols()) as f64 * f64::EPSILON;
    svd.solve(rhs, eps).ok()
}

struct Local {
    x: Vec<f64>,
    res: f64,
    iters: usize,
}

struct Log<'a> {
    solve: usize,
    entries: Option<&'a mut Vec<TraceEntry>>,
}

impl Log<'_> {
    fn push(&mut self, solver: LocalSolver, iteration: usize, merit: f64, step_norm: f64) {
        if let Some(e) = self.entries.as_mut() {
            e.push(TraceEntry { solve: self.solve, solver, iteration, merit, step_norm });
        }
    }
}

/// Counts the steps taken after `stop_tol` was reached.
struct Polish {
    reached: bool,
    steps: usize,
}

impl Polish {
    fn done(&mut self, res: f64, stop_tol: f64) -> bool {
        if res <= FLOOR {
            return true;
        }
        if res <= stop_tol {
            if self.reached {
                self.steps += 1;
            }
            self.reached = true;
        }
        self.reached && self.steps >= POLISH_STEPS
    }
}

fn gauss_newton(chart: &Chart, x0: &[f64], opts: &RecoverOptions, log: &mut Log) -> Local {
    let mut x = x0.to_vec();
    let mut f_vec = chart.residual(&x);
    let mut f = 0.5 * f_vec.norm_squared();
    let mut polish = Polish { reached: false, steps: 0 };
    let mut iters = 0;
    while iters < opts.max_iter {
        if polish.done(inf_norm(&f_vec), opts.stop_tol) {
            break;
        }
        let j = chart.jacobian(&x);
        let Some(d) = lstsq(&j, &(-&f_vec)) else { break };
        let slope = f_vec.dot(&(&j * &d));
        if !(slope < 0.0) {
            break;
        }
        let mut t = chart.max_step(&x, &d);
        let mut accepted = None;
        for _ in 0..60 {
            if t <= 0.0 {
                break;
            }
            let xn: Vec<f64> = x.iter().zip(d.iter()).map(|(a, b)| a + t * b).collect();
            if chart.feasible(&xn) {
                let fv = chart.residual(&xn);
                let fnew = 0.5 * fv.norm_squared();
                if fnew <= f + ARMIJO * t * slope {
                    accepted = Some((xn, fv, fnew));
                    break;
                }
            }
            t *= 0.5;
        }
        iters += 1;
        let Some((xn, fv, fnew)) = accepted else { break };
        let step = x.iter().zip(&xn).fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
        x = xn;
        f_vec = fv;
        f = fnew;
        log.push(LocalSolver::GaussNewton, iters, f, step);
        if step <= opts.step_tol {
            break;
        }
    }
    Local { res: inf_norm(&f_vec), x, iters }
}

fn levenberg_marquardt(chart: &Chart, x0: &[f64], opts: &RecoverOptions, log: &mut Log) -> Local {
    let mut x = x0.to_vec();
    let mut f_vec = chart.residual(&x);
    let mut f = 0.5 * f_vec.norm_squared();
    let mut lambda = 1e-3;
    let mut polish = Polish { reached: false, steps: 0 };
    let mut iters = 0;
    let n = x.len();
    while iters < opts.max_iter.max(500) {
        if polish.done(inf_norm(&f_vec), opts.stop_tol) {
            break;
        }
        let j = chart.jacobian(&x);
        let a = j.transpose() * &j;
        let g = j.transpose() * &f_vec;
        let mut accepted = None;
        for _ in 0..40 {
            let mut m = a.clone();
            for i in 0..n {
                m[(i, i)] += lambda * a[(i, i)].max(1e-300);
            }
            if let Some(d) = m.cholesky().map(|c| c.solve(&(-&g))) {
                let xn: Vec<f64> = x.iter().zip(d.iter()).map(|(a, b)| a + b).collect();
                if chart.feasible(&xn) {
                    let fv = chart.residual(&xn);
                    let fnew = 0.5 * fv.norm_squared();
                    if fnew < f {
                        accepted = Some((xn, fv, fnew));
                        break;
                    }
                }
            }
            lambda *= 4.0;
        }
        iters += 1;
        let Some((xn, fv, fnew)) = accepted else { break };
        let step = x.iter().zip(&xn).fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
        x = xn;
        f_vec = fv;
        f = fnew;
        lambda = (lambda / 5.0).max(1e-12);
        log.push(LocalSolver::LevenbergMarquardt, iters, f, step);
        if step <= opts.step_tol {
            break;
        }
    }
    Local { res: inf_norm(&f_vec), x, iters }
}

/// Pulls the two closest adjacent values apart by several fractions of the
/// room they have.
fn split_starts(chart: &Chart, x: &[f64]) -> Vec<Vec<f64>> {
    let a = chart.values(x);
    let s = a.len();
    if s < 2 {
        return Vec::new();
    }
    let i = (0..s - 1)
        .min_by(|&i, &j| (a[i] - a[i + 1]).total_cmp(&(a[j] - a[j + 1])))
        .unwrap_or(0);
    let lo = if i + 2 < s { a[i + 2] } else { 0.0 };
    let hi = if i > 0 { a[i - 1] } else { 1.0 };
    let room = (hi - a[i]).min(a[i + 1] - lo);
    SPLITS
        .iter()
        .filter_map(|&d| {
            let mut b = a.clone();
            b[i] += d * room / 2.0;
            b[i + 1] -= d * room / 2.0;
            let xs = b[1..].to_vec();
            chart.feasible(&xs).then_some(xs)
        })
        .collect()
}

struct Solved {
    x: Vec<f64>,
    res: f64,
    iterations: usize,
    restarts: usize,
    trace: Option<Vec<TraceEntry>>,
}

/// Multi-start solve in the chart of `counts`.
fn solve_chart(counts: &[usize], orders: &[f64], target: &[f64], opts: &RecoverOptions) -> Result<Solved> {
    let s = counts.len();
    let chart = Chart {
        n: counts.iter().map(|&n| n as f64).collect(),
        orders,
        target,
        min_gap: opts.min_gap,
    };
    let mut rng = stream(opts.seed, 0);
    let mut pool: Vec<(f64, usize, Vec<f64>)> = Vec::with_capacity(opts.candidates);
    let mut idx = 0;
    let mut attempts = 0;
    while pool.len() < opts.candidates.max(1) {
        attempts += 1;
        if attempts > 100 * opts.candidates.max(1) {
            return Err(Error::SamplingFailed { attempts });
        }
        let conc = CONCENTRATIONS[idx % CONCENTRATIONS.len()];
        idx += 1;
        let mut a = sorted_dirichlet(&mut rng, s, conc);
        let z: f64 = a.iter().zip(&chart.n).map(|(v, n)| v * n).sum();
        for v in a.iter_mut() {
            *v /= z;
        }
        let x = a[1..].to_vec();
        if !chart.feasible(&x) || crate::rng::min_gap(&a) < 1e-9 {
            continue;
        }
        let r = inf_norm(&chart.residual(&x));
        if r.is_finite() {
            pool.push((r, pool.len(), x));
        }
    }
    pool.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut trace = opts.trace.then(Vec::new);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut iterations = 0;
    let mut solves = 0;
    for (start, (_, _, x0)) in pool.iter().take(opts.max_restarts).enumerate() {
        let mut queue: Vec<Vec<f64>> = alloc::vec![x0.clone()];
        let mut head = 0;
        let mut depth = 0;
        while head < queue.len() && solves < MAX_LOCAL_SOLVES {
            let st = queue[head].clone();
            head += 1;
            let mut last = st.clone();
            for solver in [LocalSolver::GaussNewton, LocalSolver::LevenbergMarquardt] {
                let mut log = Log { solve: solves, entries: trace.as_mut() };
                let out = match solver {
                    LocalSolver::GaussNewton => gauss_newton(&chart, &st, opts, &mut log),
                    LocalSolver::LevenbergMarquardt => levenberg_marquardt(&chart, &st, opts, &mut log),
                };
                solves += 1;
                iterations += out.iters;
                if best.as_ref().map_or(true, |b| out.res < b.0) {
                    best = Some((out.res, out.x.clone()));
                }
                if out.res <= opts.stop_tol {
                    // damped steps crawl when the Jacobian is poorly conditioned;
                    // finish with undamped ones
                    let mut log = Log { solve: solves, entries: trace.as_mut() };
                    let pol = gauss_newton(&chart, &out.x, opts, &mut log);
                    iterations += pol.iters;
                    let (x, res) = if pol.res <= out.res { (pol.x, pol.res) } else { (out.x, out.res) };
                    return Ok(Solved { x, res, iterations, restarts: start + 1, trace });
                }
                last = out.x;
            }
            if depth < SPLIT_DEPTH {
                queue.extend(split_starts(&chart, &last));
            }
            depth += 1;
        }
    }
    match best {
        Some((res, x)) if res <= opts.tol => Ok(Solved {
            x,
            res,
            iterations,
            restarts: opts.max_restarts.min(pool.len()),
            trace,
        }),
        Some((res, _)) => Err(Error::NoConvergence { best_residual: res, starts: solves }),
        None => Err(Error::NoConvergence { best_residual: f64::INFINITY, starts: solves }),
    }
}

fn sigma_min(j: &DMatrix<f64>) -> Option<f64> {
    if j.ncols() == 0 {
        return None;
    }
    let sv = j.clone().svd(false, false).singular_values;
    let k = j.nrows().min(j.ncols());
    let mut v: Vec<f64> = sv.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    // A wide Jacobian has a nontrivial kernel; report zero then.
    if j.ncols() > j.nrows() {
        return Some(0.0);
    }
    v.get(k - 1).copied()
}

fn check_target(orders: &OrderSet, target: &GseSignature, k: usize, tol: f64) -> Result<()> {
    if target.orders.as_slice() != orders.as_slice() {
        return Err(Error::Invalid("target orders differ from the requested order set"));
    }
    let ln_k = libm::log(k as f64);
    for (index, &value) in target.values.iter().enumerate() {
        if value < -tol || value > ln_k + tol {
            return Err(Error::BadEntry { field: "values", index, value, reason: "must lie in [0, ln K]" });
        }
    }
    Ok(())
}

fn finish(
    counts: &[usize],
    orders: &OrderSet,
    target: &GseSignature,
    solved: Solved,
    opts: &RecoverOptions,
) -> Result<(MultiplicityStructure, RecoveryResult)> {
    let chart = Chart {
        n: counts.iter().map(|&n| n as f64).collect(),
        orders: orders.as_slice(),
        target: &target.values,
        min_gap: opts.min_gap,
    };
    let values = chart.values(&solved.x);
    let sigma = sigma_min(&chart.jacobian(&solved.x));
    let structure = MultiplicityStructure { counts: counts.to_vec(), values };
    let p = SortedDistribution::with_tie_tol(structure.expand(), opts.tie_tol)?;
    let multiplicity = crate::rng::min_gap(&structure.values) <= opts.tie_tol && structure.values.len() > 1;
    let res = RecoveryResult {
        multiplicity: multiplicity || p.has_multiplicity(),
        distribution: p,
        residual_norm: solved.res,
        iterations: solved.iterations,
        restarts_used: solved.restarts,
        converged: true,
        sigma_min: sigma,
        trace: solved.trace,
    };
    Ok((structure, res))
}

/// Recovers the sorted distribution with signature `target` from `K - 1` or
/// more orders.
pub fn recover(k: usize, orders: &OrderSet, target: &GseSignature, opts: &RecoverOptions) -> Result<RecoveryResult> {
    if k < 2 {
        return Err(Error::TooFewCategories { field: "K", min: 2, found: k });
    }
    if orders.len() < k - 1 {
        return Err(Error::UnderDetermined { orders: orders.len(), needed: k - 1 });
    }
    check_target(orders, target, k, opts.tol)?;
    let ln_k = libm::log(k as f64);
    let uniform_gap = target.values.iter().fold(0.0f64, |s, v| s.max((v - ln_k).abs()));
    if uniform_gap <= opts.tol {
        return Ok(RecoveryResult {
            distribution: SortedDistribution::uniform(k)?,
            residual_norm: uniform_gap,
            iterations: 0,
            restarts_used: 0,
            converged: true,
            multiplicity: true,
            sigma_min: Some(0.0),
            trace: opts.trace.then(Vec::new),
        });
    }
    let counts = alloc::vec![1usize; k];
    let solved = solve_chart(&counts, orders.as_slice(), &target.values, opts)?;
    Ok(finish(&counts, orders, target, solved, opts)?.1)
}

/// Result of a recovery on a known tie structure.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultiplicityRecovery {
    pub structure: MultiplicityStructure,
    pub result: RecoveryResult,
}

/// Recovers the distinct values of a distribution whose group sizes `counts`
/// are known; `s - 1` orders suffice.
pub fn recover_multiplicity(
    counts: &[usize],
    orders: &OrderSet,
    target: &GseSignature,
    opts: &RecoverOptions,
) -> Result<MultiplicityRecovery> {
    check_counts(counts)?;
    let s = counts.len();
    let k: usize = counts.iter().sum();
    if orders.len() < s - 1 {
        return Err(Error::UnderDetermined { orders: orders.len(), needed: s - 1 });
    }
    check_target(orders, target, k, opts.tol)?;
    if s == 1 {
        let ln_k = libm::log(k as f64);
        let gap = target.values.iter().fold(0.0f64, |m, v| m.max((v - ln_k).abs()));
        if gap > opts.tol {
            return Err(Error::NoConvergence { best_residual: gap, starts: 0 });
        }
        let structure = MultiplicityStructure { counts: counts.to_vec(), values: alloc::vec![1.0 / k as f64] };
        let result = RecoveryResult {
            distribution: SortedDistribution::with_tie_tol(structure.expand(), opts.tie_tol)?,
            residual_norm: gap,
            iterations: 0,
            restarts_used: 0,
            converged: true,
            multiplicity: true,
            sigma_min: None,
            trace: opts.trace.then(Vec::new),
        };
        return Ok(MultiplicityRecovery { structure, result });
    }
    let solved = solve_chart(counts, orders.as_slice(), &target.values, opts)?;
    let (structure, result) = finish(counts, orders, target, solved, opts)?;
    Ok(MultiplicityRecovery { structure, result })
}

/// Groups consecutive entries whose gap is at most `tol`; values are group
/// means rescaled so that `sum n_j a_j = 1`.
pub fn detect_multiplicity(p: &SortedDistribution, tol: f64) -> MultiplicityStructure {
    let v = p.probs();
    let mut counts = Vec::new();
    let mut sums = Vec::new();
    let (mut n, mut s) = (1usize, v[0]);
    for w in v.windows(2) {
        if w[0] - w[1] <= tol {
            n += 1;
            s += w[1];
        } else {
            counts.push(n);
            sums.push(s);
            n = 1;
            s = w[1];
        }
    }
    counts.push(n);
    sums.push(s);
    let total: f64 = sums.iter().sum();
    let values = counts.iter().zip(&sums).map(|(&n, &s)| s / n as f64 / total).collect();
    MultiplicityStructure { counts, values }
}

fn binary_gse(ln_q: f64, m: f64) -> f64 {
    let q = libm::exp(ln_q);
    gse_logs(&[libm::log1p(-q), ln_q], None, m)
}

/// `(p, 1 - p)` with `p >= 1/2` and `H^(m) = h`, by bisection on the smaller
/// component, where the map is strictly increasing.
pub fn recover_binary(m: f64, h: f64) -> Result<SortedDistribution> {
    check_order(m)?;
    let ln2 = core::f64::consts::LN_2;
    if !(h >= 0.0 && h <= ln2) {
        return Err(Error::OutOfRange { field: "h", value: h, range: "[0, ln 2]" });
    }
    if h == ln2 {
        return SortedDistribution::new(alloc::vec![0.5, 0.5]);
    }
    if h == 0.0 {
        return Err(Error::OutOfRange { field: "h", value: h, range: "(0, ln 2] (h = 0 has no interior preimage)" });
    }
    // bisect on t = ln q over (ln q_min, ln 1/2)
    let mut lo = -745.0f64;
    let mut hi = -ln2;
    if binary_gse(lo, m) > h {
        return Err(Error::NoConvergence { best_residual: binary_gse(lo, m) - h, starts: 1 });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if binary_gse(mid, m) < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = if (binary_gse(lo, m) - h).abs() <= (binary_gse(hi, m) - h).abs() { lo } else { hi };
    let q = libm::exp(t);
    SortedDistribution::new(alloc::vec![1.0 - q, q])
}
