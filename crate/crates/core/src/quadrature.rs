//! Numerical quadrature: globally adaptive Gauss-Kronrod (21 points) on
//! finite intervals, and Gauss-Hermite nodes with log-scaled weights.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae on [-1, 1], positive half, descending. Odd indices are
// the 10-point Gauss abscissae.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208814566204,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Number of equal pieces the interval is split into before adapting.
    pub initial_pieces: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            max_intervals: 4000,
            initial_pieces: 1,
        }
    }
}

impl QuadOptions {
    pub fn with_abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn with_pieces(mut self, pieces: usize) -> Self {
        self.initial_pieces = pieces.max(1);
        self
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod rule with the QUADPACK error heuristic.
fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Integrates `f` over `[a, b]` by global bisection of the interval with
/// the largest error estimate until the total estimate meets
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, intervals: 0 });
    }

    let pieces = opts.initial_pieces.max(1);
    let width = (b - a) / pieces as f64;
    let mut heap = BinaryHeap::with_capacity(opts.max_intervals + 1);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for i in 0..pieces {
        let lo = a + width * i as f64;
        let hi = if i + 1 == pieces { b } else { lo + width };
        let (value, error) = kronrod21(&f, lo, hi);
        total += value;
        total_err += error;
        heap.push(Segment { a: lo, b: hi, value, error });
    }

    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::convergence("integrand produced a non-finite value"));
        }
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            return Ok(QuadResult { value: total, abs_error: total_err, intervals: heap.len() });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::convergence(format!(
                "adaptive quadrature exhausted {} intervals (error estimate {:.3e}, target {:.3e})",
                opts.max_intervals, total_err, target
            )));
        }
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Cannot bisect further in floating point.
            return Err(Error::convergence(format!(
                "interval [{}, {}] cannot be subdivided (error estimate {:.3e})",
                worst.a, worst.b, total_err
            )));
        }
        let (v1, e1) = kronrod21(&f, worst.a, mid);
        let (v2, e2) = kronrod21(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }
}

/// A Gauss-Hermite rule for the weight `exp(-y^2)`.
///
/// Weights are stored as `ln(w_i * exp(y_i^2))` so that outer nodes, whose
/// plain weights underflow, stay usable when paired with Hermite functions.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub ln_scaled_weights: Vec<f64>,
}

/// Normalized Hermite recurrence without the Gaussian factor, returning
/// `(value_m, value_{m-1}, ln_scale)` where the true values are the
/// returned ones times `exp(ln_scale)`.
fn hermite_pair(m: usize, y: f64) -> (f64, f64, f64) {
    const BIG: f64 = 1e150;
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    let mut ln_scale = 0.0;
    for n in 0..m {
        let next = (2.0 / (n as f64 + 1.0)).sqrt() * y * cur - (n as f64 / (n as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            ln_scale += BIG.ln();
        }
    }
    (cur, prev, ln_scale)
}

impl GaussHermite {
    /// Builds the `m`-point rule by Newton iteration on the Hermite
    /// recurrence, seeded with the eigenvalues of the Jacobi matrix.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("Gauss-Hermite rule needs at least one node"));
        }
        let mf = m as f64;
        let half = m.div_ceil(2);
        let mut pos = vec![0.0; half];
        let mut ln_w = vec![0.0; half];
        // seeds from the eigenvalues of the Jacobi matrix, largest first
        let off: Vec<f64> = (1..m).map(|k| (0.5 * k as f64).sqrt()).collect();
        let seeds = crate::eigen::tridiagonal_eigenvalues(&vec![0.0; m], &off)?;
        for i in 0..half {
            let mut z = seeds[m - 1 - i].max(0.0);
            let mut converged = false;
            for _ in 0..200 {
                let (pm, pm1, _) = hermite_pair(m, z);
                let dz = pm / ((2.0 * mf).sqrt() * pm1);
                z -= dz;
                if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
                if !z.is_finite() {
                    break;
                }
            }
            if !converged {
                return Err(Error::convergence(format!("Gauss-Hermite root {i} of {m} did not converge")));
            }
            let (_, pm1, ln_scale) = hermite_pair(m, z);
            // w e^{y^2} = 1 / (m * phi_{m-1}(y)^2), phi = p * e^{-y^2/2}
            let ln_phi = pm1.abs().ln() + ln_scale - 0.5 * z * z;
            pos[i] = z;
            ln_w[i] = -mf.ln() - 2.0 * ln_phi;
        }

        let mut nodes = Vec::with_capacity(m);
        let mut ln_scaled_weights = Vec::with_capacity(m);
        for i in 0..half {
            nodes.push(-pos[i]);
            ln_scaled_weights.push(ln_w[i]);
        }
        let skip_middle = m % 2 == 1;
        for i in (0..half).rev() {
            if skip_middle && i == half - 1 {
                continue;
            }
            nodes.push(pos[i]);
            ln_scaled_weights.push(ln_w[i]);
        }
        // the odd-m middle root is exactly zero
        if skip_middle {
            nodes[half - 1] = 0.0;
        }
        Ok(GaussHermite { nodes, ln_scaled_weights })
    }

    /// Plain weights `w_i` for `∫ exp(-y^2) f(y) dy ≈ Σ w_i f(y_i)`.
    pub fn weights(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .zip(&self.ln_scaled_weights)
            .map(|(y, lw)| (lw - y * y).exp())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
