//! Log-domain evaluation of the escort family and its entropy.
//!
//! With `L = max ln p_i`, `d_i = ln p_i - L`, `z_i = exp(m d_i)` and
//! `Z = sum z_i`, the power sum is `y = m L + ln Z`, the escort mean of the
//! log-probabilities is `mu = L + alpha` with `alpha = sum w_i d_i`, and
//! `H = y - m mu = ln Z - m alpha`. Every quantity stays finite for any
//! positive input and any admitted order.

use alloc::vec::Vec;

use crate::dist::{sort_desc, AsProbs, Distribution, GseSignature, OrderSet, ScalarProfile, SortedDistribution};
use crate::error::{Error, Result};

pub(crate) fn check_order(m: f64) -> Result<()> {
    if m.is_finite() && m > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange { field: "m", value: m, range: "(0, inf)" })
    }
}

/// Single pass over log-values with optional integer multiplicities.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Moments {
    pub l: f64,
    pub ln_z: f64,
    /// `sum w_i (lp_i - l)`.
    pub alpha: f64,
}

impl Moments {
    pub fn new(lp: &[f64], mult: Option<&[f64]>, m: f64) -> Self {
        let l = lp.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        let mut zd = 0.0;
        for (i, &v) in lp.iter().enumerate() {
            let d = v - l;
            let n = mult.map_or(1.0, |n| n[i]);
            let e = n * libm::exp(m * d);
            z += e;
            zd += e * d;
        }
        Moments { l, ln_z: libm::log(z), alpha: zd / z }
    }

    pub fn gse(&self, m: f64) -> f64 {
        self.ln_z - m * self.alpha
    }

    /// `y = ln sum p_i^m`.
    pub fn y(&self, m: f64) -> f64 {
        m * self.l + self.ln_z
    }

    pub fn mu(&self) -> f64 {
        self.l + self.alpha
    }
}

pub(crate) fn logs(p: &[f64]) -> Vec<f64> {
    p.iter().map(|&x| libm::log(x)).collect()
}

fn sorted_logs(p: &[f64]) -> Vec<f64> {
    let mut v = p.to_vec();
    sort_desc(&mut v);
    logs(&v)
}

/// `H^(m)` from log-values, no validation.
pub(crate) fn gse_logs(lp: &[f64], mult: Option<&[f64]>, m: f64) -> f64 {
    Moments::new(lp, mult, m).gse(m)
}

/// Escort distribution `p_i^m / sum_j p_j^m` in the input order.
pub fn escort<P: AsProbs>(p: &P, m: f64) -> Result<Distribution> {
    check_order(m)?;
    let lp = logs(p.probs());
    let mo = Moments::new(&lp, None, m);
    let w: Vec<f64> = lp
        .iter()
        .map(|&v| libm::exp(m * (v - mo.l) - mo.ln_z))
        .collect();
    if w.contains(&0.0) {
        return Err(Error::Underflow { order: m });
    }
    Distribution::new(w)
}

/// Power sum, escort mean and variance of `ln p_i`, and `alpha = mu - ln p_1`.
pub fn scalar_profile(p: &SortedDistribution, m: f64) -> Result<ScalarProfile> {
    check_order(m)?;
    let lp = logs(p.probs());
    let mo = Moments::new(&lp, None, m);
    let mut var = 0.0;
    for &v in &lp {
        let d = v - mo.l;
        let w = libm::exp(m * d - mo.ln_z);
        var += w * (d - mo.alpha) * (d - mo.alpha);
    }
    let y = mo.y(m);
    let mu = mo.mu();
    Ok(ScalarProfile {
        m,
        s: libm::exp(y),
        y,
        mu,
        alpha: mu - lp[0],
        alpha_prime: var,
    })
}

/// Shannon entropy of the order-`m` escort, in nats.
///
/// The input is sorted before summation, so the value is exactly invariant
/// under relabeling.
pub fn gse<P: AsProbs>(p: &P, m: f64) -> Result<f64> {
    check_order(m)?;
    Ok(gse_logs(&sorted_logs(p.probs()), None, m))
}

/// `H^(m)` at every order of `orders`.
pub fn gse_signature<P: AsProbs>(p: &P, orders: &OrderSet) -> Result<GseSignature> {
    let lp = sorted_logs(p.probs());
    let values = orders.as_slice().iter().map(|&m| gse_logs(&lp, None, m)).collect();
    GseSignature::new(orders.clone(), values)
}

/// `m^2 p_k^(m-1) / S (mu - ln p_k)` for every category, in input order.
///
/// This is the gradient of the scale-invariant extension of `H^(m)`, so
/// `sum_k p_k g_k = 0`.
pub fn gse_gradient<P: AsProbs>(p: &P, m: f64) -> Result<Vec<f64>> {
    check_order(m)?;
    let lp = logs(p.probs());
    let mo = Moments::new(&lp, None, m);
    Ok(lp
        .iter()
        .map(|&v| {
            let d = v - mo.l;
            // w_k / p_k = exp(m d_k - ln Z - ln p_k)
            m * m * libm::exp(m * d - mo.ln_z - v) * (mo.alpha - d)
        })
        .collect())
}

#[inline]
pub(crate) fn phi_raw(m: f64, u: f64, alpha: f64) -> f64 {
    let k = (m - 1.0) * u;
    alpha * libm::expm1(k) - u * libm::exp(k)
}

/// `(alpha - u) e^((m-1) u) - alpha`.
pub fn phi(m: f64, u: f64, alpha: f64) -> Result<f64> {
    check_order(m)?;
    if !(u <= 0.0) {
        return Err(Error::OutOfRange { field: "u", value: u, range: "(-inf, 0]" });
    }
    if !alpha.is_finite() {
        return Err(Error::OutOfRange { field: "alpha", value: alpha, range: "finite" });
    }
    Ok(phi_raw(m, u, alpha))
}

/// `-sum p_i ln p_i`, summed in sorted order; zero entries contribute nothing.
pub fn shannon<P: AsProbs>(p: &P) -> f64 {
    let mut v = p.probs().to_vec();
    sort_desc(&mut v);
    -v.iter().filter(|&&x| x > 0.0).map(|&x| x * libm::log(x)).sum::<f64>()
}
