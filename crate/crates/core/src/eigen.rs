//! Eigenvalues of real symmetric matrices: Householder reduction to
//! tridiagonal form followed by the implicit QL iteration with Wilkinson
//! shifts. Eigenvectors are never formed.

use crate::error::{Error, Result};

/// Dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Largest `|a_ij - a_ji|` relative to the largest entry.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst / scale
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn from_fn<F: Fn(usize, usize) -> f64>(n: usize, f: F) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }
}

/// Householder tridiagonalization. Returns `(diagonal, off_diagonal)` with
/// `off[i]` coupling `i` and `i + 1`.
fn tridiagonalize(mut a: SymmetricMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.n;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    if n == 0 {
        return (d, e);
    }
    let data = a.raw_mut();
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        // annihilate column k below the subdiagonal
        let mut alpha2 = 0.0;
        let scale = (k + 1..n).fold(0.0f64, |m, i| m.max(data[i * n + k].abs()));
        if scale == 0.0 {
            e[k] = 0.0;
            continue;
        }
        for i in k + 1..n {
            let x = data[i * n + k] / scale;
            alpha2 += x * x;
        }
        let x0 = data[(k + 1) * n + k];
        let alpha = -x0.signum() * scale * alpha2.sqrt();
        e[k] = alpha;
        // v = x - alpha e_1, normalized so that H = I - 2 v vᵀ / vᵀv
        for i in 0..=k {
            v[i] = 0.0;
        }
        for i in k + 1..n {
            v[i] = data[i * n + k];
        }
        v[k + 1] -= alpha;
        let vtv: f64 = (k + 1..n).map(|i| v[i] * v[i]).sum();
        if vtv == 0.0 {
            continue;
        }
        let tau = 2.0 / vtv;
        // p = tau A v, K = tau/2 vᵀp, w = p - K v; A -= v wᵀ + w vᵀ
        for i in k + 1..n {
            let row = &data[i * n..i * n + n];
            p[i] = tau * (k + 1..n).map(|j| row[j] * v[j]).sum::<f64>();
        }
        let kk = 0.5 * tau * (k + 1..n).map(|i| v[i] * p[i]).sum::<f64>();
        for i in k + 1..n {
            p[i] -= kk * v[i];
        }
        for i in k + 1..n {
            for j in k + 1..=i {
                let val = data[i * n + j] - v[i] * p[j] - p[i] * v[j];
                data[i * n + j] = val;
                data[j * n + i] = val;
            }
        }
    }
    for i in 0..n {
        d[i] = data[i * n + i];
    }
    if n >= 2 {
        e[n - 2] = data[(n - 1) * n + (n - 2)];
    }
    (d, e)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e.len() == d.len() - 1`), sorted ascending.
pub fn tridiagonal_eigenvalues(d: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if e.len() + 1 != n {
        return Err(Error::domain("off-diagonal length must be one less than the diagonal"));
    }
    let mut d = d.to_vec();
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).collect();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::convergence(format!("QL iteration stalled at eigenvalue {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::convergence("non-finite eigenvalue"));
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// All eigenvalues of a dense symmetric matrix, ascending. The matrix must
/// be symmetric to within `1e-12` of its largest entry.
pub fn symmetric_eigenvalues(a: SymmetricMatrix) -> Result<Vec<f64>> {
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    if a.asymmetry() > 1e-12 {
        return Err(Error::domain("matrix is not symmetric"));
    }
    let (d, e) = tridiagonalize(a);
    tridiagonal_eigenvalues(&d, &e)
}
