//! Chart Jacobian of the signature map and determinant-positivity checks.
//!
//! In the chart `(p_2, ..., p_K)` with `p_1 = 1 - sum`, the Jacobian entry for
//! order `m` and category `k` is `m^2 p_1^(m-1) / S(m) * phi_m(u_k)` with
//! `u_k = ln(p_k / p_1)`.
//!
//! On the sorted simplex `u_2 > u_3 > ... > u_K`, so category order lists the
//! kernel arguments in decreasing order. [`Orientation::SignTrue`] reverses the
//! columns to put them in increasing order, which is the arrangement the
//! exponential-kernel sign argument applies to. [`Orientation::Natural`] keeps
//! category order.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand_distr::{Distribution as _, StandardNormal};

use crate::det::{det, for_each_combination, submatrix, Positivity, Tolerance};
use crate::dist::{OrderSet, SortedDistribution};
use crate::entropy::{check_order, logs, phi_raw, Moments};
use crate::error::{Error, Result};
use crate::rng::{random_orders, sample_sorted, stream};

/// Largest matrix side for full principal-minor enumeration.
pub const PRINCIPAL_GUARD: usize = 14;
/// Largest matrix side for enumeration of every square minor.
pub const ALL_MINORS_GUARD: usize = 10;

/// Column arrangement of the Jacobian.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Orientation {
    /// Categories `2, ..., K`.
    Natural,
    /// Categories `K, ..., 2`, i.e. increasing `u`.
    #[default]
    SignTrue,
}

impl Orientation {
    /// Natural column indices in this orientation's order.
    pub fn columns(self, n: usize) -> Vec<usize> {
        match self {
            Orientation::Natural => (0..n).collect(),
            Orientation::SignTrue => (0..n).rev().collect(),
        }
    }
}

/// Chart Jacobian with the first entry of `lp` as reference coordinate.
///
/// `mult` gives group sizes when the columns stand for tied blocks; the column
/// for block `k` is then scaled by `n_k`.
pub(crate) fn chart_jacobian(lp: &[f64], mult: Option<&[f64]>, orders: &[f64]) -> DMatrix<f64> {
    let n = lp.len() - 1;
    let mut j = DMatrix::zeros(orders.len(), n);
    for (row, &m) in orders.iter().enumerate() {
        let mo = Moments::new(lp, mult, m);
        let alpha1 = mo.mu() - lp[0];
        let pre = m * m * libm::exp((m - 1.0) * lp[0] - mo.y(m));
        for c in 0..n {
            let nk = mult.map_or(1.0, |v| v[c + 1]);
            j[(row, c)] = nk * pre * phi_raw(m, lp[c + 1] - lp[0], alpha1);
        }
    }
    j
}

/// `DT_M(p)` together with its row and column labels.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JacobianMatrix {
    /// Row-major entries in natural column order.
    pub entries: Vec<Vec<f64>>,
    pub row_orders: OrderSet,
    /// Category labels `2..=K` of the natural columns.
    pub col_categories: Vec<usize>,
    pub at_point: SortedDistribution,
}

impl JacobianMatrix {
    pub fn nrows(&self) -> usize {
        self.entries.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_categories.len()
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.nrows(), self.ncols(), |i, j| self.entries[i][j])
    }

    /// Entries with columns rearranged, plus the category label of each column.
    pub fn oriented(&self, orientation: Orientation) -> (DMatrix<f64>, Vec<usize>) {
        let cols = orientation.columns(self.ncols());
        let a = DMatrix::from_fn(self.nrows(), cols.len(), |i, j| self.entries[i][cols[j]]);
        let labels = cols.iter().map(|&c| self.col_categories[c]).collect();
        (a, labels)
    }
}

/// Assembles `DT_M(p)`; `p` must be free of ties.
pub fn jacobian(p: &SortedDistribution, orders: &OrderSet) -> Result<JacobianMatrix> {
    if p.has_multiplicity() {
        return Err(Error::Multiplicity);
    }
    let lp = logs(p.probs());
    let a = chart_jacobian(&lp, None, orders.as_slice());
    Ok(JacobianMatrix {
        entries: (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect(),
        row_orders: orders.clone(),
        col_categories: (2..=p.len()).collect(),
        at_point: p.clone(),
    })
}

fn check_increasing(field: &'static str, v: &[f64]) -> Result<()> {
    if let Some((index, &value)) = v.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        return Err(Error::BadEntry { field, index, value, reason: "must be finite" });
    }
    if let Some(i) = v.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::BadEntry {
            field,
            index: i + 1,
            value: v[i + 1],
            reason: "must be strictly increasing",
        });
    }
    Ok(())
}

/// `det[exp(x_i u_j)]`, each row rescaled by its largest entry in the log
/// domain before the determinant is taken.
pub fn exp_kernel_det(xs: &[f64], us: &[f64]) -> Result<f64> {
    if xs.len() != us.len() {
        return Err(Error::LengthMismatch { field: "us", expected: xs.len(), found: us.len() });
    }
    if xs.is_empty() {
        return Err(Error::TooFewCategories { field: "xs", min: 1, found: 0 });
    }
    check_increasing("xs", xs)?;
    check_increasing("us", us)?;
    let r = xs.len();
    let mut log_scale = 0.0;
    let mut a = DMatrix::zeros(r, r);
    for i in 0..r {
        let c = us.iter().map(|&u| xs[i] * u).fold(f64::NEG_INFINITY, f64::max);
        log_scale += c;
        for j in 0..r {
            a[(i, j)] = libm::exp(xs[i] * us[j] - c);
        }
    }
    Ok(det(&a) * libm::exp(log_scale))
}

/// [`exp_kernel_det`] classified against `abs + rel * prod_i a_ii`.
///
/// For a totally positive matrix `0 < det <= prod_i a_ii`, so the diagonal is
/// the entry scale; `max^r` overstates it by orders of magnitude.
pub fn exp_kernel_signed(xs: &[f64], us: &[f64], tol: &Tolerance) -> Result<SignedDet> {
    let value = exp_kernel_det(xs, us)?;
    let log_diag: f64 = xs.iter().zip(us).map(|(x, u)| x * u).sum();
    let tolerance = tol.abs + tol.rel * libm::exp(log_diag);
    Ok(SignedDet { value, tolerance, positivity: tol.classify(value, tolerance) })
}

/// A determinant with its tolerance and sign class.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignedDet {
    pub value: f64,
    pub tolerance: f64,
    pub positivity: Positivity,
}

/// `det[phi_{m_a}(u_{c_b})]` over the given orders and categories.
///
/// `cols` are category labels in `2..=K`, strictly increasing. Under
/// [`Orientation::SignTrue`] they are laid out in reverse, so the kernel
/// arguments increase across the columns.
pub fn ect_eval_det(
    p: &SortedDistribution,
    m_sub: &OrderSet,
    cols: &[usize],
    orientation: Orientation,
    tol: &Tolerance,
) -> Result<SignedDet> {
    let k = m_sub.len();
    if cols.len() != k {
        return Err(Error::LengthMismatch { field: "cols", expected: k, found: cols.len() });
    }
    if k > p.len() - 1 {
        return Err(Error::OutOfRange { field: "k", value: k as f64, range: "[1, K-1]" });
    }
    for (index, &c) in cols.iter().enumerate() {
        if c < 2 || c > p.len() {
            return Err(Error::BadEntry { field: "cols", index, value: c as f64, reason: "category outside 2..=K" });
        }
    }
    if let Some(i) = cols.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::BadEntry {
            field: "cols",
            index: i + 1,
            value: cols[i + 1] as f64,
            reason: "categories must be strictly increasing",
        });
    }
    let lp = logs(p.probs());
    let laid: Vec<usize> = match orientation {
        Orientation::Natural => cols.to_vec(),
        Orientation::SignTrue => cols.iter().rev().copied().collect(),
    };
    let mut a = DMatrix::zeros(k, k);
    for (i, &m) in m_sub.as_slice().iter().enumerate() {
        let mo = Moments::new(&lp, None, m);
        let alpha1 = mo.mu() - lp[0];
        for (j, &c) in laid.iter().enumerate() {
            a[(i, j)] = phi_raw(m, lp[c - 1] - lp[0], alpha1);
        }
    }
    let value = det(&a);
    let tolerance = tol.for_matrix(&a);
    Ok(SignedDet { value, tolerance, positivity: tol.classify(value, tolerance) })
}

/// Which minors a report covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum MinorKind {
    Principal,
    LeadingPrincipal,
    AllSquare,
}

/// Summary of a minor scan.
///
/// `argmin_rows` are 0-based row positions (indices into the order set),
/// `argmin_cols` are category labels. The argmin is the minor with the
/// smallest ratio `det / tolerance`, so `all_positive` holds exactly when
/// `min_minor > tolerance`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinorReport {
    pub kind: MinorKind,
    pub orientation: Orientation,
    pub dimension: usize,
    pub min_minor: f64,
    pub argmin_rows: Vec<usize>,
    pub argmin_cols: Vec<usize>,
    pub tolerance: f64,
    pub all_positive: bool,
    pub checked: usize,
    pub positive: usize,
    pub indeterminate: usize,
    pub negative: usize,
    pub samples: usize,
    pub seed: Option<u64>,
    /// Point and orders at which the argmin occurred (sweeps only).
    pub argmin_point: Option<Vec<f64>>,
    pub argmin_orders: Option<Vec<f64>>,
}

#[derive(Clone, Debug)]
struct Acc {
    margin: f64,
    min_minor: f64,
    tolerance: f64,
    rows: Vec<usize>,
    cols: Vec<usize>,
    checked: usize,
    positive: usize,
    indeterminate: usize,
    negative: usize,
    point: Option<Vec<f64>>,
    orders: Option<Vec<f64>>,
}

impl Acc {
    fn new() -> Self {
        Acc {
            margin: f64::INFINITY,
            min_minor: f64::INFINITY,
            tolerance: 0.0,
            rows: Vec::new(),
            cols: Vec::new(),
            checked: 0,
            positive: 0,
            indeterminate: 0,
            negative: 0,
            point: None,
            orders: None,
        }
    }

    fn push(&mut self, a: &DMatrix<f64>, tol: &Tolerance, rows: &[usize], cols: &[usize]) {
        let d = det(a);
        let t = tol.for_matrix(a);
        self.checked += 1;
        match tol.classify(d, t) {
            Positivity::Positive => self.positive += 1,
            Positivity::Indeterminate => self.indeterminate += 1,
            Positivity::Negative => self.negative += 1,
        }
        let margin = if d.is_nan() { f64::NEG_INFINITY } else { d / t };
        if margin < self.margin {
            self.margin = margin;
            self.min_minor = d;
            self.tolerance = t;
            self.rows = rows.to_vec();
            self.cols = cols.to_vec();
        }
    }

    fn merge(&mut self, other: Acc) {
        self.checked += other.checked;
        self.positive += other.positive;
        self.indeterminate += other.indeterminate;
        self.negative += other.negative;
        if other.margin < self.margin {
            self.margin = other.margin;
            self.min_minor = other.min_minor;
            self.tolerance = other.tolerance;
            self.rows = other.rows;
            self.cols = other.cols;
            self.point = other.point;
            self.orders = other.orders;
        }
    }

    fn finish(self, kind: MinorKind, orientation: Orientation, dimension: usize, samples: usize, seed: Option<u64>) -> MinorReport {
        MinorReport {
            kind,
            orientation,
            dimension,
            all_positive: self.negative == 0 && self.indeterminate == 0,
            min_minor: self.min_minor,
            argmin_rows: self.rows,
            argmin_cols: self.cols,
            tolerance: self.tolerance,
            checked: self.checked,
            positive: self.positive,
            indeterminate: self.indeterminate,
            negative: self.negative,
            samples,
            seed,
            argmin_point: self.point,
            argmin_orders: self.orders,
        }
    }
}

fn check_square(a: &DMatrix<f64>) -> Result<()> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    Ok(())
}

fn scan_principal(a: &DMatrix<f64>, labels: &[usize], tol: &Tolerance, acc: &mut Acc) {
    let n = a.nrows();
    for k in 1..=n {
        for_each_combination(n, k, |s| {
            let cols: Vec<usize> = s.iter().map(|&i| labels[i]).collect();
            acc.push(&submatrix(a, s, s), tol, s, &cols);
        });
    }
}

fn scan_leading(a: &DMatrix<f64>, labels: &[usize], tol: &Tolerance, acc: &mut Acc) {
    for k in 1..=a.nrows() {
        let s: Vec<usize> = (0..k).collect();
        acc.push(&submatrix(a, &s, &s), tol, &s, &labels[..k]);
    }
}

fn scan_all(a: &DMatrix<f64>, labels: &[usize], tol: &Tolerance, acc: &mut Acc) {
    let (r, c) = (a.nrows(), a.ncols());
    for k in 1..=r.min(c) {
        for_each_combination(r, k, |rows| {
            for_each_combination(c, k, |cs| {
                let cols: Vec<usize> = cs.iter().map(|&i| labels[i]).collect();
                acc.push(&submatrix(a, rows, cs), tol, rows, &cols);
            });
        });
    }
}

/// Every principal minor of a square matrix; column labels are `0..n`.
pub fn principal_minors_of(a: &DMatrix<f64>, tol: &Tolerance) -> Result<MinorReport> {
    check_square(a)?;
    if a.nrows() > PRINCIPAL_GUARD {
        return Err(Error::Guard { dim: a.nrows(), max: PRINCIPAL_GUARD });
    }
    let labels: Vec<usize> = (0..a.ncols()).collect();
    let mut acc = Acc::new();
    scan_principal(a, &labels, tol, &mut acc);
    Ok(acc.finish(MinorKind::Principal, Orientation::Natural, a.nrows(), 1, None))
}

/// All `2^(K-1) - 1` principal minors of `DT_M` in the given orientation.
pub fn principal_minors(j: &JacobianMatrix, orientation: Orientation, tol: &Tolerance) -> Result<MinorReport> {
    let (a, labels) = j.oriented(orientation);
    check_square(&a)?;
    if a.nrows() > PRINCIPAL_GUARD {
        return Err(Error::Guard { dim: a.nrows(), max: PRINCIPAL_GUARD });
    }
    let mut acc = Acc::new();
    scan_principal(&a, &labels, tol, &mut acc);
    Ok(acc.finish(MinorKind::Principal, orientation, a.nrows(), 1, None))
}

/// Every square minor (any row set against any column set).
pub fn all_minors(j: &JacobianMatrix, orientation: Orientation, tol: &Tolerance) -> Result<MinorReport> {
    let (a, labels) = j.oriented(orientation);
    let dim = a.nrows().max(a.ncols());
    if dim > ALL_MINORS_GUARD {
        return Err(Error::Guard { dim, max: ALL_MINORS_GUARD });
    }
    let mut acc = Acc::new();
    scan_all(&a, &labels, tol, &mut acc);
    Ok(acc.finish(MinorKind::AllSquare, orientation, a.nrows().min(a.ncols()), 1, None))
}

/// Outcome of a sampled Fiedler-Ptak check.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiedlerPtak {
    pub passed: bool,
    pub trials: usize,
    pub violating: Option<Vec<f64>>,
}

/// Tests `max_i w_i (A w)_i > 0` on the basis vectors and then on `trials`
/// Gaussian vectors. A necessary condition for a P-matrix, not a proof.
pub fn fiedler_ptak_of(a: &DMatrix<f64>, trials: usize, seed: u64) -> Result<FiedlerPtak> {
    check_square(a)?;
    let n = a.nrows();
    let mut rng = stream(seed, 0);
    let test = |w: &nalgebra::DVector<f64>| {
        let aw = a * w;
        w.iter().zip(aw.iter()).map(|(x, y)| x * y).fold(f64::NEG_INFINITY, f64::max) > 0.0
    };
    for i in 0..n {
        let w = nalgebra::DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 });
        if !test(&w) {
            return Ok(FiedlerPtak { passed: false, trials: i + 1, violating: Some(w.iter().copied().collect()) });
        }
    }
    for t in 0..trials {
        let w = nalgebra::DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
        if w.iter().all(|&x| x == 0.0) {
            continue;
        }
        if !test(&w) {
            return Ok(FiedlerPtak { passed: false, trials: n + t + 1, violating: Some(w.iter().copied().collect()) });
        }
    }
    Ok(FiedlerPtak { passed: true, trials: n + trials, violating: None })
}

pub fn fiedler_ptak_check(j: &JacobianMatrix, orientation: Orientation, trials: usize, seed: u64) -> Result<FiedlerPtak> {
    fiedler_ptak_of(&j.oriented(orientation).0, trials, seed)
}

/// Orders used at each sweep point.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum OrderSource {
    Fixed(OrderSet),
    /// Fresh `K-1` orders drawn uniformly in `[lo, hi]` per point.
    Random { lo: f64, hi: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    pub tolerance: Tolerance,
    pub orientation: Orientation,
    /// Also scan every square minor when the side is within the guard.
    pub all_minors: bool,
    /// Draws with a smaller consecutive gap are rejected.
    pub min_gap: f64,
    pub max_attempts: usize,
    pub fiedler_ptak_trials: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            tolerance: Tolerance::default(),
            orientation: Orientation::SignTrue,
            all_minors: true,
            min_gap: 1e-6,
            max_attempts: 10_000,
            fiedler_ptak_trials: 32,
        }
    }
}

/// Aggregate of a randomized sweep over the sorted simplex.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepReport {
    pub k: usize,
    pub orders: OrderSource,
    pub samples: usize,
    pub seed: u64,
    /// Principal minors in the requested orientation.
    pub principal: MinorReport,
    /// Principal minors in category order, for comparison.
    pub natural_principal: MinorReport,
    pub all_minors: Option<MinorReport>,
    /// Points whose principal minors were all positive but which failed the
    /// Fiedler-Ptak sampler.
    pub fiedler_ptak_violations: usize,
}

impl SweepReport {
    pub fn all_positive(&self) -> bool {
        self.principal.all_positive
    }
}

struct PointScan {
    principal: Acc,
    natural: Acc,
    all: Option<Acc>,
    fp_violation: bool,
}

fn scan_point(k: usize, orders: &OrderSource, seed: u64, index: usize, opts: &SweepOptions) -> Result<PointScan> {
    let mut rng = stream(seed, index as u64);
    let p = sample_sorted(&mut rng, k, opts.min_gap, opts.max_attempts)?;
    let m = match orders {
        OrderSource::Fixed(o) => o.as_slice().to_vec(),
        OrderSource::Random { lo, hi } => random_orders(&mut rng, k - 1, *lo, *hi),
    };
    let lp = logs(&p);
    let j = chart_jacobian(&lp, None, &m);
    let n = k - 1;
    let oriented = |o: Orientation| {
        let cols = o.columns(n);
        let a = DMatrix::from_fn(n, n, |r, c| j[(r, cols[c])]);
        let labels: Vec<usize> = cols.iter().map(|&c| c + 2).collect();
        (a, labels)
    };
    let (a, labels) = oriented(opts.orientation);
    let (an, ln) = oriented(Orientation::Natural);

    let mut principal = Acc::new();
    let mut natural = Acc::new();
    if n <= PRINCIPAL_GUARD {
        scan_principal(&a, &labels, &opts.tolerance, &mut principal);
        scan_principal(&an, &ln, &opts.tolerance, &mut natural);
    } else {
        scan_leading(&a, &labels, &opts.tolerance, &mut principal);
        scan_leading(&an, &ln, &opts.tolerance, &mut natural);
    }
    let all = if opts.all_minors && n <= ALL_MINORS_GUARD {
        let mut acc = Acc::new();
        scan_all(&a, &labels, &opts.tolerance, &mut acc);
        acc.point = Some(p.clone());
        acc.orders = Some(m.clone());
        Some(acc)
    } else {
        None
    };
    let fp_violation = principal.negative == 0
        && principal.indeterminate == 0
        && !fiedler_ptak_of(&a, opts.fiedler_ptak_trials, seed ^ index as u64)?.passed;
    principal.point = Some(p.clone());
    principal.orders = Some(m.clone());
    natural.point = Some(p);
    natural.orders = Some(m);
    Ok(PointScan { principal, natural, all, fp_violation })
}

/// Samples `samples` points of the sorted simplex (sorted Dirichlet(1) draws,
/// gaps below `min_gap` rejected) and aggregates the minor scans.
///
/// Point `i` uses random stream `i`, so the report is identical for any
/// number of worker threads.
pub fn sweep_pmatrix(k: usize, orders: &OrderSource, samples: usize, seed: u64, opts: &SweepOptions) -> Result<SweepReport> {
    if k < 2 {
        return Err(Error::TooFewCategories { field: "K", min: 2, found: k });
    }
    match orders {
        OrderSource::Fixed(o) if o.len() != k - 1 => {
            return Err(Error::LengthMismatch { field: "orders", expected: k - 1, found: o.len() });
        }
        OrderSource::Random { lo, hi } => {
            check_order(*lo)?;
            if !(hi > lo) || !hi.is_finite() {
                return Err(Error::OutOfRange { field: "hi", value: *hi, range: "(lo, inf)" });
            }
        }
        _ => {}
    }

    #[cfg(feature = "parallel")]
    let scans: Vec<Result<PointScan>> = {
        use rayon::prelude::*;
        (0..samples).into_par_iter().map(|i| scan_point(k, orders, seed, i, opts)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let scans: Vec<Result<PointScan>> = (0..samples).map(|i| scan_point(k, orders, seed, i, opts)).collect();

    let mut principal = Acc::new();
    let mut natural = Acc::new();
    let mut all: Option<Acc> = None;
    let mut fp = 0;
    for s in scans {
        let s = s?;
        principal.merge(s.principal);
        natural.merge(s.natural);
        if let Some(a) = s.all {
            match all.as_mut() {
                Some(acc) => acc.merge(a),
                None => all = Some(a),
            }
        }
        fp += s.fp_violation as usize;
    }
    let n = k - 1;
    let kind = if n <= PRINCIPAL_GUARD { MinorKind::Principal } else { MinorKind::LeadingPrincipal };
    Ok(SweepReport {
        k,
        orders: orders.clone(),
        samples,
        seed,
        principal: principal.finish(kind, opts.orientation, n, samples, Some(seed)),
        natural_principal: natural.finish(kind, Orientation::Natural, n, samples, Some(seed)),
        all_minors: all.map(|a| a.finish(MinorKind::AllSquare, opts.orientation, n, samples, Some(seed))),
        fiedler_ptak_violations: fp,
    })
}
