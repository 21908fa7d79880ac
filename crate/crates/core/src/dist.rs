//! Distribution, order-set and signature types.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Tolerance on `sum p_i = 1`.
pub const SUM_TOL: f64 = 1e-12;
/// Gap at or below which two sorted entries count as tied.
pub const DEFAULT_TIE_TOL: f64 = 1e-12;
/// Largest admitted order.
pub const DEFAULT_M_MAX: f64 = 64.0;

/// Anything that exposes a validated probability vector.
pub trait AsProbs {
    fn probs(&self) -> &[f64];
}

fn check_probs(field: &'static str, probs: &[f64]) -> Result<()> {
    if probs.len() < 2 {
        return Err(Error::TooFewCategories { field, min: 2, found: probs.len() });
    }
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() || value <= 0.0 || value > 1.0 {
            return Err(Error::BadEntry { field, index, value, reason: "must lie in (0, 1]" });
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::NotNormalized { field, sum });
    }
    Ok(())
}

/// A strictly positive probability vector with `K >= 2` entries.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "ProbsRepr", into = "ProbsRepr"))]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_probs("probs", &probs)?;
        Ok(Distribution { probs })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewCategories { field: "K", min: 2, found: k });
        }
        Ok(Distribution { probs: alloc::vec![1.0 / k as f64; k] })
    }

    /// Normalizes positive weights; zeros are dropped.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let kept = positive_weights(weights)?;
        let total: f64 = kept.iter().sum();
        Distribution::new(kept.iter().map(|w| w / total).collect())
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    pub fn sorted(&self) -> SortedDistribution {
        let mut probs = self.probs.clone();
        sort_desc(&mut probs);
        SortedDistribution::from_parts(probs, DEFAULT_TIE_TOL)
    }
}

impl AsProbs for Distribution {
    fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// A probability vector in nonincreasing order.
///
/// Entries whose consecutive gap is at most `tie_tol` are kept as they are and
/// the value is flagged as carrying multiplicity.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "ProbsRepr", into = "ProbsRepr"))]
pub struct SortedDistribution {
    probs: Vec<f64>,
    tie_tol: f64,
    multiplicity: bool,
}

impl SortedDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tie_tol(probs, DEFAULT_TIE_TOL)
    }

    pub fn with_tie_tol(probs: Vec<f64>, tie_tol: f64) -> Result<Self> {
        check_probs("probs", &probs)?;
        if !(tie_tol >= 0.0) {
            return Err(Error::OutOfRange { field: "tie_tol", value: tie_tol, range: "[0, inf)" });
        }
        if let Some(i) = probs.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::NotSorted { field: "probs", index: i + 1 });
        }
        Ok(Self::from_parts(probs, tie_tol))
    }

    pub(crate) fn from_parts(probs: Vec<f64>, tie_tol: f64) -> Self {
        let multiplicity = probs.windows(2).any(|w| w[0] - w[1] <= tie_tol);
        SortedDistribution { probs, tie_tol, multiplicity }
    }

    pub fn uniform(k: usize) -> Result<Self> {
        Ok(Distribution::uniform(k)?.sorted())
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn tie_tol(&self) -> f64 {
        self.tie_tol
    }

    /// True when some consecutive gap is at most `tie_tol`.
    pub fn has_multiplicity(&self) -> bool {
        self.multiplicity
    }

    /// Group sizes of tied runs, e.g. `(1, 2)` for `(0.5, 0.25, 0.25)`.
    pub fn multiplicity_counts(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        let mut run = 1;
        for w in self.probs.windows(2) {
            if w[0] - w[1] <= self.tie_tol {
                run += 1;
            } else {
                counts.push(run);
                run = 1;
            }
        }
        counts.push(run);
        counts
    }

    pub fn to_distribution(&self) -> Distribution {
        Distribution { probs: self.probs.clone() }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

impl AsProbs for SortedDistribution {
    fn probs(&self) -> &[f64] {
        &self.probs
    }
}

fn positive_weights(weights: &[f64]) -> Result<Vec<f64>> {
    for (index, &value) in weights.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::BadEntry {
                field: "weights",
                index,
                value,
                reason: "must be finite and nonnegative",
            });
        }
    }
    let kept: Vec<f64> = weights.iter().copied().filter(|&w| w > 0.0).collect();
    if kept.len() < 2 {
        return Err(Error::TooFewCategories { field: "weights", min: 2, found: kept.len() });
    }
    Ok(kept)
}

pub(crate) fn sort_desc(v: &mut [f64]) {
    v.sort_by(|a, b| b.total_cmp(a));
}

/// Drops zeros, normalizes and sorts nonnegative weights.
pub fn make_sorted(weights: &[f64]) -> Result<SortedDistribution> {
    make_sorted_with_tol(weights, DEFAULT_TIE_TOL)
}

pub fn make_sorted_with_tol(weights: &[f64], tie_tol: f64) -> Result<SortedDistribution> {
    let mut kept = positive_weights(weights)?;
    sort_desc(&mut kept);
    let total: f64 = kept.iter().sum();
    for w in kept.iter_mut() {
        *w /= total;
    }
    SortedDistribution::with_tie_tol(kept, tie_tol)
}

/// Strictly increasing positive orders.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<f64>", into = "Vec<f64>"))]
pub struct OrderSet {
    orders: Vec<f64>,
}

impl OrderSet {
    pub fn new(orders: Vec<f64>) -> Result<Self> {
        Self::with_max(orders, DEFAULT_M_MAX)
    }

    pub fn with_max(orders: Vec<f64>, m_max: f64) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::TooFewCategories { field: "orders", min: 1, found: 0 });
        }
        for (index, &value) in orders.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::BadEntry { field: "orders", index, value, reason: "must be positive" });
            }
            if value > m_max {
                return Err(Error::BadEntry { field: "orders", index, value, reason: "exceeds m_max" });
            }
        }
        if let Some(i) = orders.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::BadEntry {
                field: "orders",
                index: i + 1,
                value: orders[i + 1],
                reason: "orders must be strictly increasing",
            });
        }
        Ok(OrderSet { orders })
    }

    /// Sorts the input first; duplicates are still rejected.
    pub fn from_unordered(mut orders: Vec<f64>) -> Result<Self> {
        orders.sort_by(f64::total_cmp);
        if let Some(i) = orders.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::BadEntry {
                field: "orders",
                index: i + 1,
                value: orders[i],
                reason: "duplicate order",
            });
        }
        Self::new(orders)
    }

    /// `{0.5 + 0.75 (j - 1)}` for `j = 1..K-1`.
    pub fn default_recovery(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewCategories { field: "K", min: 2, found: k });
        }
        Self::new((0..k - 1).map(|j| 0.5 + 0.75 * j as f64).collect())
    }

    /// `{0.5, 1, 2}`.
    pub fn default_inference() -> Self {
        OrderSet { orders: alloc::vec![0.5, 1.0, 2.0] }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// The orders at the given positions.
    pub fn subset(&self, idx: &[usize]) -> Result<Self> {
        Self::new(idx.iter().map(|&i| self.orders[i]).collect())
    }
}

impl TryFrom<Vec<f64>> for OrderSet {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        OrderSet::new(v)
    }
}

impl From<OrderSet> for Vec<f64> {
    fn from(o: OrderSet) -> Self {
        o.orders
    }
}

/// GSE values at an order set, in nats.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "SignatureRepr"))]
pub struct GseSignature {
    pub orders: OrderSet,
    pub values: Vec<f64>,
}

impl GseSignature {
    pub fn new(orders: OrderSet, values: Vec<f64>) -> Result<Self> {
        if values.len() != orders.len() {
            return Err(Error::LengthMismatch {
                field: "values",
                expected: orders.len(),
                found: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::BadEntry { field: "values", index, value, reason: "must be finite" });
        }
        Ok(GseSignature { orders, values })
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, other: &GseSignature) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Scalar quantities of the escort family at one order.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalarProfile {
    pub m: f64,
    /// `S = sum p_i^m`.
    pub s: f64,
    /// `y = ln S`.
    pub y: f64,
    /// Escort mean of `ln p_i`.
    pub mu: f64,
    /// `mu - ln p_1`.
    pub alpha: f64,
    /// Escort variance of `ln p_i`.
    pub alpha_prime: f64,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct ProbsRepr {
    probs: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<ProbsRepr> for Distribution {
    type Error = Error;
    fn try_from(r: ProbsRepr) -> Result<Self> {
        Distribution::new(r.probs)
    }
}

#[cfg(feature = "serde")]
impl From<Distribution> for ProbsRepr {
    fn from(d: Distribution) -> Self {
        ProbsRepr { probs: d.probs }
    }
}

#[cfg(feature = "serde")]
impl TryFrom<ProbsRepr> for SortedDistribution {
    type Error = Error;
    fn try_from(r: ProbsRepr) -> Result<Self> {
        SortedDistribution::new(r.probs)
    }
}

#[cfg(feature = "serde")]
impl From<SortedDistribution> for ProbsRepr {
    fn from(d: SortedDistribution) -> Self {
        ProbsRepr { probs: d.probs }
    }
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct SignatureRepr {
    orders: OrderSet,
    values: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<SignatureRepr> for GseSignature {
    type Error = Error;
    fn try_from(r: SignatureRepr) -> Result<Self> {
        GseSignature::new(r.orders, r.values)
    }
}
