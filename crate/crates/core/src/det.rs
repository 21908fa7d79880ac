//! Determinants with a sign-faithful tolerance model.

use alloc::vec::Vec;

use nalgebra::DMatrix;

/// Sign classification of a determinant against its tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Positivity {
    Positive,
    Indeterminate,
    Negative,
}

/// A `k x k` determinant counts as positive when it exceeds
/// `abs + rel * (max |entry|)^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: f64::MIN_POSITIVE, rel: 1e-10 }
    }
}

impl Tolerance {
    pub fn for_matrix(&self, a: &DMatrix<f64>) -> f64 {
        let scale = a.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        self.abs + self.rel * libm::pow(scale, a.nrows() as f64)
    }

    pub fn classify(&self, det: f64, tol: f64) -> Positivity {
        if det > tol {
            Positivity::Positive
        } else if det < -tol {
            Positivity::Negative
        } else {
            Positivity::Indeterminate
        }
    }
}

fn det2(a: &DMatrix<f64>) -> f64 {
    a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]
}

fn det3_at(a: &DMatrix<f64>, r: [usize; 3], c: [usize; 3]) -> f64 {
    let e = |i: usize, j: usize| a[(r[i], c[j])];
    e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
}

fn det4(a: &DMatrix<f64>) -> f64 {
    let rows = [1, 2, 3];
    let mut total = 0.0;
    for j in 0..4 {
        let mut c = [0usize; 3];
        let mut t = 0;
        for jj in 0..4 {
            if jj != j {
                c[t] = jj;
                t += 1;
            }
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * a[(0, j)] * det3_at(a, rows, c);
    }
    total
}

/// Determinant after dividing each row by its largest magnitude.
///
/// Sizes up to 4 use cofactor expansion, larger ones LU with partial pivoting.
pub fn det(a: &DMatrix<f64>) -> f64 {
    assert_eq!(a.nrows(), a.ncols(), "determinant of a non-square matrix");
    let n = a.nrows();
    if n == 0 {
        return 1.0;
    }
    let mut b = a.clone();
    let mut scale = 1.0;
    for i in 0..n {
        let s = b.row(i).iter().fold(0.0f64, |s, x| s.max(x.abs()));
        if s == 0.0 {
            return 0.0;
        }
        b.row_mut(i).scale_mut(1.0 / s);
        scale *= s;
    }
    let d = match n {
        1 => b[(0, 0)],
        2 => det2(&b),
        3 => det3_at(&b, [0, 1, 2], [0, 1, 2]),
        4 => det4(&b),
        _ => b.lu().determinant(),
    };
    d * scale
}

pub fn submatrix(a: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])])
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
