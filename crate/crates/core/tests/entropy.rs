use approx::assert_relative_eq;
use gse_core::{
    escort, gse, gse_gradient, gse_signature, make_sorted, phi, scalar_profile, shannon, Distribution, Error,
    OrderSet, SortedDistribution,
};
use proptest::prelude::*;

/// Direct power-sum evaluation, no log shifting.
fn naive_escort(p: &[f64], m: f64) -> Vec<f64> {
    let s: f64 = p.iter().map(|x| x.powf(m)).sum();
    p.iter().map(|x| x.powf(m) / s).collect()
}

fn naive_shannon(p: &[f64]) -> f64 {
    -p.iter().map(|x| x * x.ln()).sum::<f64>()
}

fn oracle_gse(p: &[f64], m: f64) -> f64 {
    naive_shannon(&naive_escort(p, m))
}

fn dist(v: &[f64]) -> Distribution {
    Distribution::new(v.to_vec()).unwrap()
}

#[test]
fn make_sorted_examples() {
    let s = make_sorted(&[2.0, 1.0, 1.0, 0.0]).unwrap();
    assert_eq!(s.probs(), &[0.5, 0.25, 0.25]);
    assert!(s.has_multiplicity());
    assert_eq!(s.multiplicity_counts(), vec![1, 2]);

    let s = make_sorted(&[0.3, 0.5, 0.2]).unwrap();
    assert_eq!(s.probs(), &[0.5, 0.3, 0.2]);
    assert!(!s.has_multiplicity());

    assert!(matches!(make_sorted(&[1.0, -1.0]), Err(Error::BadEntry { .. })));
    assert!(matches!(make_sorted(&[1.0, 0.0]), Err(Error::TooFewCategories { .. })));
}

#[test]
fn distribution_validation() {
    assert!(matches!(Distribution::new(vec![0.5, 0.4]), Err(Error::NotNormalized { .. })));
    assert!(Distribution::new(vec![1.0]).is_err());
    assert!(Distribution::new(vec![0.0, 1.0]).is_err());
    assert!(SortedDistribution::new(vec![0.3, 0.7]).is_err());
}

#[test]
fn order_set_validation() {
    assert!(OrderSet::new(vec![2.0, 1.0]).is_err());
    assert!(OrderSet::new(vec![1.0, 1.0]).is_err());
    assert!(OrderSet::new(vec![0.0]).is_err());
    assert!(OrderSet::new(vec![65.0]).is_err());
    assert!(OrderSet::new(vec![]).is_err());
    assert!(OrderSet::from_unordered(vec![2.0, 0.5, 2.0]).is_err());
    assert_eq!(OrderSet::from_unordered(vec![2.0, 0.5]).unwrap().as_slice(), &[0.5, 2.0]);
    assert_eq!(OrderSet::default_recovery(4).unwrap().as_slice(), &[0.5, 1.25, 2.0]);
    assert_eq!(OrderSet::default_inference().as_slice(), &[0.5, 1.0, 2.0]);
}

#[test]
fn escort_examples() {
    let u = Distribution::uniform(5).unwrap();
    for m in [0.3, 1.0, 7.5] {
        for x in escort(&u, m).unwrap().probs() {
            assert_relative_eq!(*x, 0.2, max_relative = 1e-15);
        }
    }
    let p = dist(&[0.5, 0.3, 0.2]);
    let e1 = escort(&p, 1.0).unwrap();
    for (a, b) in e1.probs().iter().zip(p.probs()) {
        assert!((a - b).abs() <= 1e-15);
    }
    let composed = escort(&escort(&p, 2.0).unwrap(), 1.5).unwrap();
    let direct = naive_escort(&[0.5, 0.3, 0.2], 3.0);
    for (a, b) in composed.probs().iter().zip(&direct) {
        assert!((a - b).abs() <= 1e-12);
    }
    assert!(escort(&p, 0.0).is_err());
    assert!(escort(&p, -1.0).is_err());
}

#[test]
fn escort_underflow_is_reported() {
    let p = dist(&[1.0 - 1e-300, 1e-300]);
    assert!(matches!(escort(&p, 60.0), Err(Error::Underflow { .. })));
}

#[test]
fn scalar_profile_examples() {
    let p = SortedDistribution::new(vec![0.75, 0.25]).unwrap();
    let sp = scalar_profile(&p, 2.0).unwrap();
    assert_relative_eq!(sp.s, 0.625, max_relative = 1e-14);
    let mu = (0.5625 * 0.75f64.ln() + 0.0625 * 0.25f64.ln()) / 0.625;
    assert_relative_eq!(sp.mu, mu, max_relative = 1e-14);
    assert_relative_eq!(sp.alpha, mu - 0.75f64.ln(), max_relative = 1e-12);
    assert!((sp.alpha - (-0.109861228866810969)).abs() < 1e-15);
    assert!((sp.alpha - (-0.109863)).abs() < 5e-6);
    assert_relative_eq!(sp.y, 0.625f64.ln(), max_relative = 1e-14);

    let u = SortedDistribution::uniform(6).unwrap();
    let sp = scalar_profile(&u, 3.3).unwrap();
    assert!(sp.alpha.abs() < 1e-15 && sp.alpha_prime.abs() < 1e-15);
    assert!(scalar_profile(&u, 0.0).is_err());
}

#[test]
fn gse_frozen_values() {
    let p = dist(&[0.5, 0.3, 0.2]);
    // recomputed here by the naive oracle, frozen to the digits below
    assert!((oracle_gse(p.probs(), 1.0) - 1.0296530140645737).abs() < 1e-15);
    assert!((oracle_gse(p.probs(), 2.0) - 0.8535836791418975).abs() < 1e-15);
    assert!((oracle_gse(p.probs(), 0.5) - 1.0809736435470225).abs() < 1e-15);

    assert!((gse(&p, 1.0).unwrap() - 1.0296530140645737).abs() < 1e-14);
    assert!((gse(&p, 2.0).unwrap() - 0.8535836791418975).abs() < 1e-14);
    assert!((gse(&p, 0.5).unwrap() - 1.0809736435470225).abs() < 1e-14);
    let u4 = Distribution::uniform(4).unwrap();
    assert!((gse(&u4, 3.7).unwrap() - 4f64.ln()).abs() < 1e-15);
    assert!(gse(&p, 0.0).is_err());
}

#[test]
fn signature_examples() {
    let m = OrderSet::new(vec![0.5, 2.0]).unwrap();
    let s = gse_signature(&dist(&[0.5, 0.3, 0.2]), &m).unwrap();
    assert!((s.values[0] - 1.0809736435470225).abs() < 1e-14);
    assert!((s.values[1] - 0.8535836791418975).abs() < 1e-14);
    assert!((s.values[0] - 1.080976).abs() < 5e-6);
    assert!((s.values[1] - 0.853582).abs() < 5e-6);
    let t = gse_signature(&dist(&[0.2, 0.5, 0.3]), &m).unwrap();
    assert_eq!(s, t);
    let u = gse_signature(&Distribution::uniform(7).unwrap(), &m).unwrap();
    for v in u.values {
        assert!((v - 7f64.ln()).abs() < 1e-14);
    }
}

#[test]
fn gradient_examples() {
    let p = dist(&[0.75, 0.25]);
    let g = gse_gradient(&p, 2.0).unwrap();
    assert!((g[0] - (-0.527333)).abs() < 1e-6);
    assert!((g[1] - 1.582002).abs() < 1e-6);
    assert!((g[1] - g[0] - 2.10934).abs() < 1e-5);
    let u = gse_gradient(&Distribution::uniform(4).unwrap(), 2.5).unwrap();
    assert!(u.iter().all(|x| x.abs() < 1e-14));
}

#[test]
fn gradient_at_order_one_is_shannon_gradient() {
    // -ln p_k - 1 up to a constant shift absorbed by the normalization
    let p = dist(&[0.5, 0.3, 0.15, 0.05]);
    let g = gse_gradient(&p, 1.0).unwrap();
    let h = naive_shannon(p.probs());
    for (gk, pk) in g.iter().zip(p.probs()) {
        assert!((gk - (-pk.ln() - h)).abs() < 1e-13);
    }
}

#[test]
fn phi_examples() {
    assert_eq!(phi(2.0, 0.0, -0.3).unwrap(), 0.0);
    assert!((phi(1.0, -0.7, -0.2).unwrap() - 0.7).abs() < 1e-15);
    let alpha = (0.5625 * 0.75f64.ln() + 0.0625 * 0.25f64.ln()) / 0.625 - 0.75f64.ln();
    let v = phi(2.0, (1.0f64 / 3.0).ln(), alpha).unwrap();
    assert!((v - 0.439444915467243877).abs() < 1e-15);
    assert!((v - 0.439446).abs() < 5e-6);
    // (alpha - u) e^((m-1)u) - alpha written out
    let u = (1.0f64 / 3.0).ln();
    assert!((v - ((alpha - u) * u.exp() - alpha)).abs() < 1e-15);
    assert!(phi(2.0, 0.1, alpha).is_err());
}

#[test]
fn extreme_point_is_finite() {
    for k in 2..=10usize {
        let mut v = vec![1e-12; k];
        v[0] = 1.0 - 1e-12 * (k - 1) as f64;
        let p = dist(&v);
        let h = gse(&p, 8.0).unwrap();
        assert!(h.is_finite() && h >= 0.0);
        let h = gse(&p, 64.0).unwrap();
        assert!(h.is_finite() && h >= 0.0);
    }
}

fn random_dist(max_k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, 2..=max_k).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.iter().map(|x| x / s).collect()
    })
}

fn unit_sum(v: Vec<f64>) -> Distribution {
    let s: f64 = v.iter().sum();
    Distribution::new(v.iter().map(|x| x / s).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gse_is_entropy_of_escort(p in random_dist(10), m in 0.1f64..8.0) {
        let p = unit_sum(p);
        let h = gse(&p, m).unwrap();
        prop_assert!((h - shannon(&escort(&p, m).unwrap())).abs() <= 1e-12);
        prop_assert!((h - oracle_gse(p.probs(), m)).abs() <= 1e-12);
    }

    #[test]
    fn escort_composes(p in random_dist(8), a in 0.2f64..3.0, b in 0.2f64..3.0) {
        let p = unit_sum(p);
        let lhs = escort(&escort(&p, a).unwrap(), b).unwrap();
        let rhs = escort(&p, a * b).unwrap();
        for (x, y) in lhs.probs().iter().zip(rhs.probs()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn order_one_is_shannon(p in random_dist(10)) {
        let p = unit_sum(p);
        prop_assert!((gse(&p, 1.0).unwrap() - naive_shannon(p.probs())).abs() <= 1e-12);
    }

    #[test]
    fn permutation_invariance(p in random_dist(8), m in 0.1f64..8.0, rot in 0usize..8) {
        let p = unit_sum(p);
        let mut q = p.probs().to_vec();
        let r = rot % q.len();
        q.rotate_left(r);
        q.reverse();
        let q = Distribution::new(q).unwrap();
        prop_assert_eq!(gse(&p, m).unwrap().to_bits(), gse(&q, m).unwrap().to_bits());
    }

    #[test]
    fn bounded_by_log_k(p in random_dist(10), m in 0.1f64..8.0) {
        let p = unit_sum(p);
        let h = gse(&p, m).unwrap();
        prop_assert!(h >= 0.0 && h <= (p.len() as f64).ln() + 1e-15);
    }

    #[test]
    fn strictly_below_log_k_off_uniform(k in 2usize..10, m in 0.1f64..8.0, j in 0usize..10) {
        let mut v = vec![1.0 / k as f64; k];
        let j = j % (k - 1);
        v[j] += 1e-3;
        v[j + 1] -= 1e-3;
        let p = Distribution::new(v).unwrap();
        prop_assert!(gse(&p, m).unwrap() <= (k as f64).ln() - 1e-9);
        let u = Distribution::uniform(k).unwrap();
        prop_assert!((gse(&u, m).unwrap() - (k as f64).ln()).abs() <= 1e-12);
    }

    #[test]
    fn profile_signs(p in random_dist(10), m in 0.05f64..20.0) {
        let s = unit_sum(p).sorted();
        let sp = scalar_profile(&s, m).unwrap();
        prop_assert!(sp.alpha <= 0.0);
        prop_assert!(sp.alpha_prime >= 0.0);
        prop_assert!(sp.s.is_finite() && sp.y.is_finite() && sp.mu.is_finite());
    }

    #[test]
    fn gradient_matches_central_differences(p in random_dist(8), m in 0.2f64..6.0) {
        let p = unit_sum(p);
        let g = gse_gradient(&p, m).unwrap();
        let h = 1e-6;
        let scale = g.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        for k in 0..p.len() {
            let mut up = p.probs().to_vec();
            let mut dn = p.probs().to_vec();
            up[k] += h;
            dn[k] -= h;
            let fd = (oracle_gse(&unit(&up), m) - oracle_gse(&unit(&dn), m)) / (2.0 * h);
            prop_assert!((fd - g[k]).abs() <= 1e-6 * scale.max(1e-3), "k={} fd={} g={}", k, fd, g[k]);
        }
    }
}

fn unit(v: &[f64]) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.iter().map(|x| x / s).collect()
}
