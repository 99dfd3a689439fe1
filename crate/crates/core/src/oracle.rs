//! Exact reference thermodynamics from the spectrum of
//! `H = p²/2 + ω²x²/2 + W(x)` in a truncated harmonic-oscillator basis.
//!
//! The basis frequency Ω is a numerical knob. Convergence is judged by
//! rerunning in a basis twice as large; only eigenvalues that agree
//! enter the thermal sums, and the neglected Boltzmann tail is bounded by
//! continuing the spectrum with its smallest observed level spacing.

use serde::{Deserialize, Serialize};

use crate::eigen::{symmetric_eigenvalues, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::model::{OscillatorModel, PotentialKind, ThermalPoint};
use crate::quadrature::GaussHermite;

/// Relative agreement between the N and 2N runs for an eigenvalue to count
/// as converged: `|ΔE_i| ≤ 1e-9 · max(1, E_i)`.
pub const EIGEN_TOL: f64 = 1e-9;
/// Default bound on the neglected tail of `ln Z`.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;
/// Largest basis `choose_basis` will try.
pub const MAX_BASIS: usize = 2048;
const MIN_BASIS: usize = 8;
const START_BASIS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub size: usize,
    pub basis_frequency: f64,
}

impl BasisSpec {
    pub fn new(size: usize, basis_frequency: f64) -> Result<Self> {
        if size < MIN_BASIS {
            return Err(Error::domain(format!("basis size must be >= {MIN_BASIS}, got {size}")));
        }
        if !(basis_frequency > 0.0) || !basis_frequency.is_finite() {
            return Err(Error::domain(format!("basis frequency must be positive, got {basis_frequency}")));
        }
        Ok(BasisSpec { size, basis_frequency })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Lowest `size` eigenvalues of the 2N reference run, ascending.
    pub eigenvalues: Vec<f64>,
    /// Leading eigenvalues that agree between the N and 2N runs.
    pub converged_count: usize,
    pub basis: BasisSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleThermo {
    pub ln_z: f64,
    pub free_energy: f64,
    pub mean_energy: f64,
    /// Upper bound on the `ln Z` error from levels left out of the sum.
    pub truncation_bound: f64,
    pub levels_used: usize,
    pub basis: BasisSpec,
}

/// Matrix elements of `x^{2p}` between the first `n` states, from `2p`
/// applications of the position operator. Paths from `j` to `i` never
/// leave `[0, max(i, j) + p]`, so no enlarged-basis truncation error
/// reaches the returned block.
fn even_power_elements(n: usize, p: u32, omega_b: f64) -> Vec<Vec<(usize, f64)>> {
    let steps = 2 * p as usize;
    let x = |k: usize| ((k + 1) as f64 / (2.0 * omega_b)).sqrt(); // <k|x|k+1>
    let mut cols = Vec::with_capacity(n);
    let width = 2 * steps + 1;
    for j in 0..n {
        // window index w ↔ state j + w - steps
        let mut cur = vec![0.0; width];
        cur[steps] = 1.0;
        for _ in 0..steps {
            let mut next = vec![0.0; width];
            for w in 0..width {
                let v = cur[w];
                if v == 0.0 {
                    continue;
                }
                let k = j + w;
                if k < steps {
                    continue;
                }
                let state = k - steps;
                if w + 1 < width {
                    next[w + 1] += v * x(state);
                }
                if state > 0 && w > 0 {
                    next[w - 1] += v * x(state - 1);
                }
            }
            cur = next;
        }
        let col: Vec<(usize, f64)> = (0..width)
            .filter_map(|w| {
                let k = j + w;
                if k < steps || k - steps >= n || cur[w] == 0.0 {
                    None
                } else {
                    Some((k - steps, cur[w]))
                }
            })
            .collect();
        cols.push(col);
    }
    cols
}

/// `ln W(x)` for the cosh interaction, finite where `W` itself would
/// overflow.
fn ln_cosh_interaction(model: &OscillatorModel, x: f64) -> f64 {
    let a = (model.lambda.sqrt() * x / model.omega).abs();
    if a > 40.0 {
        let w2 = model.omega * model.omega;
        // cosh a - 1 - a²/2 = (e^a / 2) [1 + e^{-2a} - (2 + a²) e^{-a}]
        (w2 * w2 / model.lambda).ln() + a - std::f64::consts::LN_2
            + ((-2.0 * a).exp() - (2.0 + a * a) * (-a).exp()).ln_1p()
    } else {
        model.interaction(x).ln()
    }
}

/// Normalized Hermite functions `φ_0..φ_{n-1}` at `y`, each returned as
/// `(mantissa, ln_scale)` so that no value under- or overflows.
fn hermite_functions(n: usize, y: f64) -> Vec<(f64, f64)> {
    const BIG: f64 = 1e150;
    let mut out = Vec::with_capacity(n);
    let mut scale = -0.5 * y * y - 0.25 * std::f64::consts::PI.ln();
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        out.push((cur, scale));
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            scale += BIG.ln();
        }
    }
    out
}

/// The real symmetric matrix of H in the Ω-basis.
pub fn build_hamiltonian(model: &OscillatorModel, basis: BasisSpec) -> Result<SymmetricMatrix> {
    model.validate()?;
    let basis = BasisSpec::new(basis.size, basis.basis_frequency)?;
    let n = basis.size;
    let ob = basis.basis_frequency;
    let w2 = model.omega * model.omega;
    let mut h = SymmetricMatrix::zeros(n);
    let diag = 0.25 * ob + 0.25 * w2 / ob;
    let off = -0.25 * ob + 0.25 * w2 / ob;
    for i in 0..n {
        h.set(i, i, diag * (2 * i + 1) as f64);
        if i + 2 < n {
            h.set(i, i + 2, off * (((i + 1) * (i + 2)) as f64).sqrt());
        }
    }
    if model.lambda == 0.0 {
        return Ok(h);
    }
    match model.potential {
        PotentialKind::Power => {
            let coupling = model.lambda / model.order_factorial();
            for (j, col) in even_power_elements(n, model.p, ob).into_iter().enumerate() {
                for (i, v) in col {
                    if i >= j {
                        h.set(i, j, h.get(i, j) + coupling * v);
                    }
                }
            }
        }
        PotentialKind::Cosh => {
            let gh = GaussHermite::new((2 * n).max(64))?;
            let sq = ob.sqrt();
            let mut acc = vec![0.0; n * n];
            let mut u = vec![0.0; n];
            for (&y, &lw) in gh.nodes.iter().zip(&gh.ln_scaled_weights) {
                let half_ln = 0.5 * (lw + ln_cosh_interaction(model, y / sq));
                for (k, (m, s)) in hermite_functions(n, y).into_iter().enumerate() {
                    u[k] = m * (s + half_ln).exp();
                }
                for i in 0..n {
                    if u[i] == 0.0 {
                        continue;
                    }
                    let ui = u[i];
                    let row = &mut acc[i * n..i * n + i + 1];
                    for (r, uj) in row.iter_mut().zip(&u[..=i]) {
                        *r += ui * uj;
                    }
                }
            }
            if acc.iter().any(|v| !v.is_finite()) {
                return Err(Error::convergence("cosh potential matrix elements are not finite"));
            }
            for i in 0..n {
                for j in 0..=i {
                    h.set(i, j, h.get(i, j) + acc[i * n + j]);
                }
            }
        }
    }
    Ok(h)
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn diagonalize(matrix: SymmetricMatrix) -> Result<Vec<f64>> {
    symmetric_eigenvalues(matrix)
}

fn count_converged(small: &[f64], large: &[f64]) -> usize {
    small
        .iter()
        .zip(large)
        .take_while(|(a, b)| (*a - *b).abs() <= EIGEN_TOL * b.abs().max(1.0))
        .count()
}

/// Spectrum in the basis `N` checked against the same Ω with `2N`.
pub fn spectrum(model: &OscillatorModel, basis: BasisSpec) -> Result<SpectrumResult> {
    let small = diagonalize(build_hamiltonian(model, basis)?)?;
    let large = diagonalize(build_hamiltonian(model, BasisSpec::new(2 * basis.size, basis.basis_frequency)?)?)?;
    Ok(SpectrumResult {
        converged_count: count_converged(&small, &large),
        eigenvalues: large[..basis.size].to_vec(),
        basis,
    })
}

/// Thermal sums over the converged part of a spectrum.
pub fn thermo_from_spectrum(spec: &SpectrumResult, point: ThermalPoint, tail_tol: f64) -> Result<OracleThermo> {
    let beta = ThermalPoint::new(point.beta)?.beta;
    let m = spec.converged_count;
    if m < 2 {
        return Err(Error::convergence(format!(
            "only {m} eigenvalue(s) converged at N = {}; enlarge the basis",
            spec.basis.size
        )));
    }
    let ev = &spec.eigenvalues[..m];
    let e0 = ev[0];
    let mut sum = 0.0;
    let mut esum = 0.0;
    for &e in ev {
        let w = (-beta * (e - e0)).exp();
        sum += w;
        esum += (e - e0) * w;
    }
    let gap = ev.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let tail = if gap > 0.0 {
        let q = (-beta * gap).exp();
        (-beta * (ev[m - 1] - e0)).exp() * q / (1.0 - q)
    } else {
        f64::INFINITY
    };
    let truncation_bound = (tail / sum).ln_1p();
    if !(truncation_bound <= tail_tol) {
        return Err(Error::convergence(format!(
            "Boltzmann tail bound {truncation_bound:.3e} exceeds {tail_tol:.1e} with {m} converged levels at \
             beta = {beta}; use a larger basis or a larger beta"
        )));
    }
    let ln_z = -beta * e0 + sum.ln();
    Ok(OracleThermo {
        ln_z,
        free_energy: -ln_z / beta,
        mean_energy: e0 + esum / sum,
        truncation_bound,
        levels_used: m,
        basis: spec.basis,
    })
}

/// `ln Z`, `F` and `E` from the spectrum at the given basis, with the
/// default tail tolerance.
pub fn oracle_thermo(model: &OscillatorModel, point: ThermalPoint, basis: BasisSpec) -> Result<OracleThermo> {
    oracle_thermo_with_tol(model, point, basis, DEFAULT_TAIL_TOL)
}

pub fn oracle_thermo_with_tol(
    model: &OscillatorModel,
    point: ThermalPoint,
    basis: BasisSpec,
    tail_tol: f64,
) -> Result<OracleThermo> {
    thermo_from_spectrum(&spectrum(model, basis)?, point, tail_tol)
}

/// `⟨H⟩` in the Gaussian ground state of frequency Ω.
fn gaussian_energy(model: &OscillatorModel, ob: f64) -> f64 {
    let var = 0.5 / ob; // ⟨x²⟩
    let base = 0.25 * ob + 0.25 * model.omega * model.omega / ob;
    let inter = match model.potential {
        PotentialKind::Power => {
            let p = model.p as i32;
            let double_fact: f64 = (1..=2 * model.p - 1).step_by(2).map(f64::from).product();
            model.lambda / model.order_factorial() * double_fact * var.powi(p)
        }
        PotentialKind::Cosh => {
            let w2 = model.omega * model.omega;
            let t = 0.5 * model.lambda / w2 * var; // a² ⟨x²⟩ / 2
            w2 * w2 / model.lambda * (t.exp_m1() - t)
        }
    };
    base + inter
}

/// Gaussian variational frequency: the Ω minimizing `⟨H⟩` in the Ω ground
/// state. For the quartic it solves `Ω³ - ω²Ω - 6λ/4! = 0`, which
/// approaches `c (λ/4!)^{1/3}` with `c = 6^{1/3}` at large λ and equals ω
/// at λ = 0.
pub fn variational_frequency(model: &OscillatorModel) -> Result<f64> {
    model.validate()?;
    let w = model.omega;
    if model.lambda == 0.0 {
        return Ok(w);
    }
    if model.potential == PotentialKind::Power && model.p == 2 {
        let g6 = 6.0 * model.lambda / 24.0;
        // Newton from above the largest root; the cubic is convex there
        let mut x = w + g6.cbrt();
        for _ in 0..100 {
            let f = x * x * x - w * w * x - g6;
            let dx = f / (3.0 * x * x - w * w);
            x -= dx;
            if dx.abs() <= 1e-15 * x {
                break;
            }
        }
        return Ok(x);
    }
    // unimodal in ln Ω on [ln ω, ln ω + 12]
    let (mut a, mut b) = (w.ln(), w.ln() + 12.0);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let f = |t: f64| gaussian_energy(model, t.exp());
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-10 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    Ok((0.5 * (a + b)).exp())
}

/// Smallest power-of-two basis (from 16, at most `max_size`) at the given
/// Ω whose spectrum satisfies the convergence and tail contract.
pub fn choose_size(
    model: &OscillatorModel,
    point: ThermalPoint,
    basis_frequency: f64,
    target_tol: f64,
    max_size: usize,
) -> Result<BasisSpec> {
    let mut n = START_BASIS;
    let mut small = diagonalize(build_hamiltonian(model, BasisSpec::new(n, basis_frequency)?)?)?;
    let mut last_err = None;
    while n <= max_size {
        let basis = BasisSpec::new(n, basis_frequency)?;
        let large = diagonalize(build_hamiltonian(model, BasisSpec::new(2 * n, basis_frequency)?)?)?;
        let spec = SpectrumResult {
            converged_count: count_converged(&small, &large),
            eigenvalues: large[..n].to_vec(),
            basis,
        };
        match thermo_from_spectrum(&spec, point, target_tol) {
            Ok(_) => return Ok(basis),
            Err(e) => last_err = Some(e),
        }
        small = large;
        n *= 2;
    }
    Err(Error::convergence(format!(
        "no basis up to N = {max_size} met tolerance {target_tol:.1e}: {}",
        last_err.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// Basis frequency from the Gaussian variational optimum, size by doubling.
pub fn choose_basis(model: &OscillatorModel, point: ThermalPoint, target_tol: f64) -> Result<BasisSpec> {
    if !(target_tol > 0.0) {
        return Err(Error::domain(format!("target tolerance must be positive, got {target_tol}")));
    }
    let ob = variational_frequency(model)?;
    choose_size(model, point, ob, target_tol, MAX_BASIS)
}

/// `choose_basis` followed by `oracle_thermo`.
pub fn oracle_auto(model: &OscillatorModel, point: ThermalPoint, target_tol: f64) -> Result<OracleThermo> {
    let basis = choose_basis(model, point, target_tol)?;
    oracle_thermo_with_tol(model, point, basis, target_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic(lambda: f64) -> OscillatorModel {
        OscillatorModel::quartic(1.0, lambda).unwrap()
    }

    fn pt(beta: f64) -> ThermalPoint {
        ThermalPoint::new(beta).unwrap()
    }

    #[test]
    fn basis_validation() {
        assert!(BasisSpec::new(7, 1.0).is_err());
        assert!(BasisSpec::new(8, 0.0).is_err());
        assert!(BasisSpec::new(8, 1.0).is_ok());
    }

    #[test]
    fn free_hamiltonian_is_diagonal_in_matched_basis() {
        let h = build_hamiltonian(&OscillatorModel::quartic(1.7, 0.0).unwrap(), BasisSpec::new(12, 1.7).unwrap()).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                let expect = if i == j { 1.7 * (i as f64 + 0.5) } else { 0.0 };
                assert!((h.get(i, j) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn x4_ground_element() {
        // λ/24 · ⟨0|x⁴|0⟩ = λ/24 · 3/(4Ω²)
        let ob = 1.3;
        let m = quartic(24.0);
        let h = build_hamiltonian(&m, BasisSpec::new(10, ob).unwrap()).unwrap();
        let free = 0.25 * ob + 0.25 / ob;
        assert!((h.get(0, 0) - free - 0.75 / (ob * ob)).abs() < 1e-14);
    }

    #[test]
    fn x4_elements_match_gauss_hermite() {
        let ob = 0.8;
        let n = 12;
        let cols = even_power_elements(n, 2, ob);
        let gh = GaussHermite::new(64).unwrap();
        let sq = ob.sqrt();
        let mut dense = vec![0.0; n * n];
        for (&y, &lw) in gh.nodes.iter().zip(&gh.ln_scaled_weights) {
            let phi: Vec<f64> = hermite_functions(n, y).into_iter().map(|(m, s)| m * s.exp()).collect();
            let x4 = (y / sq).powi(4);
            for i in 0..n {
                for j in 0..n {
                    dense[i * n + j] += lw.exp() * phi[i] * phi[j] * x4;
                }
            }
        }
        for (j, col) in cols.iter().enumerate() {
            for &(i, v) in col {
                assert!((dense[i * n + j] - v).abs() < 1e-11, "({i},{j})");
            }
        }
    }

    #[test]
    fn hamiltonian_symmetric() {
        let h = build_hamiltonian(&quartic(3.0), BasisSpec::new(40, 1.4).unwrap()).unwrap();
        assert!(h.asymmetry() <= 1e-13);
        let c = quartic(0.5).with_potential(PotentialKind::Cosh).unwrap();
        let hc = build_hamiltonian(&c, BasisSpec::new(24, 1.1).unwrap()).unwrap();
        assert!(hc.asymmetry() <= 1e-13);
    }

    #[test]
    fn free_spectrum_exact() {
        let s = spectrum(&OscillatorModel::quartic(0.6, 0.0).unwrap(), BasisSpec::new(16, 0.6).unwrap()).unwrap();
        assert_eq!(s.converged_count, 16);
        for (n, e) in s.eigenvalues.iter().enumerate() {
            assert!((e - 0.6 * (n as f64 + 0.5)).abs() < 1e-10);
        }
    }

    #[test]
    fn quartic_reference_levels() {
        // references from an independent sinc-DVR computation
        for (lambda, e0, e1) in [(1.0, 0.527_736_127_31, 1.631_300_532_77), (100.0, 1.162_174_245_20, 4.070_714_351_4)] {
            let m = quartic(lambda);
            let ob = variational_frequency(&m).unwrap();
            let s = spectrum(&m, BasisSpec::new(64, ob).unwrap()).unwrap();
            assert!(s.converged_count >= 10);
            assert!((s.eigenvalues[0] - e0).abs() < 1e-9);
            assert!((s.eigenvalues[1] - e1).abs() < 1e-9);
        }
    }

    #[test]
    fn ground_energy_monotone_in_lambda() {
        let e0: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&l| {
                let m = quartic(l);
                spectrum(&m, BasisSpec::new(32, variational_frequency(&m).unwrap()).unwrap()).unwrap().eigenvalues[0]
            })
            .collect();
        assert!(e0[0] < e0[1] && e0[1] < e0[2]);
        assert!((e0[1] - 0.673_546_69).abs() < 1e-7);
    }

    #[test]
    fn variational_bound_in_basis_size() {
        let m = quartic(10.0);
        let mut prev = f64::INFINITY;
        for n in [16, 32, 64, 128] {
            let e0 = diagonalize(build_hamiltonian(&m, BasisSpec::new(n, 1.0).unwrap()).unwrap()).unwrap()[0];
            assert!(e0 <= prev + 1e-12);
            prev = e0;
        }
    }

    #[test]
    fn basis_frequency_invariance() {
        let m = quartic(5.0);
        let ob = variational_frequency(&m).unwrap();
        let a = spectrum(&m, BasisSpec::new(64, ob).unwrap()).unwrap();
        let b = spectrum(&m, BasisSpec::new(64, 1.5 * ob).unwrap()).unwrap();
        let k = a.converged_count.min(b.converged_count);
        assert!(k >= 10);
        for i in 0..k {
            assert!((a.eigenvalues[i] - b.eigenvalues[i]).abs() <= 1e-8 * a.eigenvalues[i].max(1.0));
        }
    }

    #[test]
    fn cosh_reference_levels() {
        let m = quartic(0.5).with_potential(PotentialKind::Cosh).unwrap();
        let ob = variational_frequency(&m).unwrap();
        assert!(ob > 1.0);
        let s = spectrum(&m, BasisSpec::new(32, ob).unwrap()).unwrap();
        assert!(s.converged_count >= 4);
        assert!((s.eigenvalues[0] - 0.515_177_096_585).abs() < 1e-9);
        assert!((s.eigenvalues[1] - 1.574_297_136_823).abs() < 1e-9);
    }

    #[test]
    fn free_thermo_limit() {
        for (beta, w) in [(0.5, 2.0), (1.0, 1.0), (2.0, 0.5)] {
            let m = OscillatorModel::quartic(w, 0.0).unwrap();
            let basis = choose_basis(&m, pt(beta), DEFAULT_TAIL_TOL).unwrap();
            assert_eq!(basis.basis_frequency, w);
            let r = oracle_thermo(&m, pt(beta), basis).unwrap();
            let x: f64 = 0.5 * beta * w;
            assert!((r.ln_z + (2.0 * x.sinh()).ln()).abs() < 1e-8);
            assert!((r.mean_energy - (0.5 * w + w / (beta * w).exp_m1())).abs() < 1e-8);
            assert!(r.truncation_bound <= DEFAULT_TAIL_TOL);
        }
    }

    #[test]
    fn quartic_thermo_references() {
        let m = quartic(1.0);
        for (beta, ln_z, e) in [
            (0.5, 0.539_257_401_504, 1.880_899_202_934),
            (1.0, -0.141_782_250_208, 1.039_090_327_566),
            (2.0, -0.941_204_348_417, 0.659_684_569_833),
        ] {
            let r = oracle_auto(&m, pt(beta), DEFAULT_TAIL_TOL).unwrap();
            assert!((r.ln_z - ln_z).abs() < 1e-9, "beta {beta}: {}", r.ln_z);
            assert!((r.mean_energy - e).abs() < 1e-9);
            assert_eq!(r.free_energy, -r.ln_z / beta);
        }
        let r = oracle_auto(&quartic(100.0), pt(1.0), DEFAULT_TAIL_TOL).unwrap();
        assert!((r.ln_z + 1.107_872_767_719).abs() < 1e-9);
    }

    #[test]
    fn energy_is_beta_derivative_of_beta_f() {
        let m = quartic(2.0);
        let beta = 1.2;
        let h = 1e-4;
        let basis = choose_basis(&m, pt(beta - h), 1e-13).unwrap();
        let bf = |b: f64| -oracle_thermo_with_tol(&m, pt(b), basis, 1e-12).unwrap().ln_z;
        let fd = (bf(beta + h) - bf(beta - h)) / (2.0 * h);
        let e = oracle_thermo_with_tol(&m, pt(beta), basis, 1e-12).unwrap().mean_energy;
        assert!((fd / e - 1.0).abs() < 1e-6);
    }

    #[test]
    fn large_coupling_prefers_scaled_frequency() {
        let m = quartic(1000.0);
        let ob = variational_frequency(&m).unwrap();
        assert!(ob > 5.0);
        assert!((ob.powi(3) - ob - 6.0 * 1000.0 / 24.0).abs() < 1e-9);
        let tuned = choose_size(&m, pt(1.0), ob, DEFAULT_TAIL_TOL, MAX_BASIS).unwrap();
        assert!(tuned.size <= 64);
        // at Ω = ω the same contract needs more than four times the basis
        let naive = choose_size(&m, pt(1.0), 1.0, DEFAULT_TAIL_TOL, 4 * tuned.size);
        assert!(matches!(naive, Err(Error::Convergence(_))));
        let s = spectrum(&m, tuned).unwrap();
        assert!((s.eigenvalues[0] - 2.357_014_83).abs() < 1e-7);
    }

    #[test]
    fn hot_and_tiny_basis_reports_convergence_error() {
        let m = quartic(1.0);
        let err = oracle_thermo(&m, pt(1e-3), BasisSpec::new(8, 1.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Convergence(_)));
    }

    #[test]
    fn variational_frequency_general_orders() {
        let p3 = OscillatorModel::new(1.0, 10.0, 0.0, 3).unwrap();
        let ob = variational_frequency(&p3).unwrap();
        // stationarity of the Gaussian energy
        let d = 1e-5;
        let de = gaussian_energy(&p3, ob * (1.0 + d)) - gaussian_energy(&p3, ob * (1.0 - d));
        assert!(de.abs() < 1e-12);
        assert!(ob > 1.0);
        let q = quartic(7.0);
        let c = q.with_potential(PotentialKind::Power).unwrap();
        assert_eq!(variational_frequency(&c).unwrap(), variational_frequency(&q).unwrap());
    }
}
