//! Exact spectral theory of the Erdős–Rényi Metropolis chain and the dense
//! transition matrices used to check it on small vertex counts.
//!
//! With `m = C(n,2)` and the law `p_β(x) ∝ e^{β|x|}` on edge indicators
//! `x ∈ {0,1}^m`, the Metropolis chain is a product chain. For each `ξ ∈ {0,1}^m`,
//! `ψ_ξ(x) = (−1)^{ξ·x} e^{(β/2)(|ξ| − 2ξ·x)}` is an eigenfunction with eigenvalue
//! `1 − |ξ|(1 + e^{−β})/m`, and the `ψ_ξ` are orthonormal in `L²(p_β)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::ModelSpec;
use crate::numeric::{ln_binomials, log_sum_exp, sigmoid};

/// Largest vertex count for dense `2^m × 2^m` matrices.
pub const MAX_DENSE_VERTICES: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralComponent {
    pub xi: Vec<bool>,
    pub eigenvalue: f64,
    pub weight: usize,
    beta: f64,
}

impl SpectralComponent {
    /// `ψ_ξ(x)`.
    pub fn eval(&self, x: &[bool]) -> f64 {
        let dot = self.xi.iter().zip(x).filter(|(a, b)| **a && **b).count();
        let sign = if dot % 2 == 0 { 1.0 } else { -1.0 };
        sign * (0.5 * self.beta * (self.weight as f64 - 2.0 * dot as f64)).exp()
    }
}

/// Eigenvalue `β_ξ = 1 − |ξ|(1 + e^{−β})/m` and eigenfunction `ψ_ξ`.
pub fn er_eigen(xi: &[bool], beta: f64, m: usize) -> Result<SpectralComponent> {
    if xi.len() != m {
        return Err(Error::Mismatch(format!("xi has length {}, expected m = {m}", xi.len())));
    }
    let weight = xi.iter().filter(|b| **b).count();
    Ok(SpectralComponent {
        xi: xi.to_vec(),
        eigenvalue: er_eigenvalue(weight, beta, m),
        weight,
        beta,
    })
}

pub fn er_eigenvalue(weight: usize, beta: f64, m: usize) -> f64 {
    1.0 - weight as f64 * (1.0 + (-beta).exp()) / m as f64
}

/// Bits of `code` as an edge-indicator vector of length `m`.
pub fn indicator(code: u64, m: usize) -> Vec<bool> {
    (0..m).map(|i| code >> i & 1 == 1).collect()
}

fn check_dense(n: usize) -> Result<usize> {
    if !(2..=MAX_DENSE_VERTICES).contains(&n) {
        return Err(Error::TooLarge {
            what: "vertex count for dense transition matrices".into(),
            size: n as f64,
            bound: MAX_DENSE_VERTICES as f64,
        });
    }
    Ok(n * (n - 1) / 2)
}

/// Transition matrix of the Metropolis chain, states indexed by edge code.
pub fn metropolis_matrix(n: usize, beta: f64) -> Result<DMatrix<f64>> {
    if !(beta >= 0.0) {
        return Err(Error::domain(format!("the Metropolis chain needs beta >= 0, got {beta}")));
    }
    let m = check_dense(n)?;
    let size = 1usize << m;
    let mut k = DMatrix::zeros(size, size);
    let pick = 1.0 / m as f64;
    let delete = (-beta).exp();
    for x in 0..size {
        for e in 0..m {
            let y = x ^ (1 << e);
            if x >> e & 1 == 0 {
                k[(x, y)] += pick;
            } else {
                k[(x, y)] += pick * delete;
                k[(x, x)] += pick * (1.0 - delete);
            }
        }
    }
    Ok(k)
}

/// Transition matrix of the Glauber chain for `exp(n² T(G))`.
pub fn glauber_matrix(n: usize, model: &ModelSpec) -> Result<DMatrix<f64>> {
    let m = check_dense(n)?;
    let size = 1usize << m;
    let exponent = scaled_statistics(n, model)?;
    let mut k = DMatrix::zeros(size, size);
    let pick = 1.0 / m as f64;
    for x in 0..size {
        for e in 0..m {
            let on = x | (1 << e);
            let off = x & !(1 << e);
            let p_on = sigmoid(exponent[on] - exponent[off]);
            k[(x, on)] += pick * p_on;
            k[(x, off)] += pick * (1.0 - p_on);
        }
    }
    Ok(k)
}

/// `n² T(G)` for every graph on `n` vertices, indexed by edge code.
pub fn scaled_statistics(n: usize, model: &ModelSpec) -> Result<Vec<f64>> {
    let m = n * (n - 1) / 2;
    (0..1u64 << m)
        .map(|code| model.scaled_statistic(&Graph::from_edge_code(n, code)?))
        .collect()
}

/// `exp(n² T(G)) / Σ exp(n² T)` for every graph, indexed by edge code.
pub fn gibbs_law(n: usize, model: &ModelSpec) -> Result<Vec<f64>> {
    let s = scaled_statistics(n, model)?;
    let z = log_sum_exp(s.iter().copied());
    Ok(s.iter().map(|x| (x - z).exp()).collect())
}

/// Corner of the hypercube the chain starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corner {
    Empty,
    Complete,
}

/// `log χ²(ℓ)` for the Metropolis chain started at the empty or complete graph:
/// `Σ_{j≥1} e^{±βj} C(m,j) (1 − j(1 + e^{−β})/m)^{2ℓ}`. `ℓ` may be fractional.
pub fn chi_square_ln(start: Corner, beta: f64, n: usize, ell: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(Error::domain(format!("chi-square distances need beta >= 0, got {beta}")));
    }
    if n < 2 || !(ell >= 0.0) {
        return Err(Error::domain(format!("need n >= 2 and steps >= 0, got n = {n}, steps = {ell}")));
    }
    let m = n * (n - 1) / 2;
    let binom = ln_binomials(m);
    let sign = match start {
        Corner::Empty => 1.0,
        Corner::Complete => -1.0,
    };
    let rate = 1.0 + (-beta).exp();
    let terms = (1..=m).filter_map(|j| {
        let base = 1.0 - j as f64 * rate / m as f64;
        let power = if ell == 0.0 {
            0.0
        } else if base == 0.0 {
            return None;
        } else {
            ell * (base * base).ln()
        };
        Some(sign * beta * j as f64 + binom[j] + power)
    });
    Ok(log_sum_exp(terms))
}

/// `χ²(ℓ)`; errors when the value overflows a double (use [`chi_square_ln`]).
pub fn chi_square_distance(start: Corner, beta: f64, n: usize, ell: f64) -> Result<f64> {
    let ln = chi_square_ln(start, beta, n, ell)?;
    if ln > 709.0 {
        return Err(Error::Overflow(format!(
            "chi-square distance is e^{ln:.1}; use the log-domain output instead"
        )));
    }
    Ok(ln.exp())
}

/// `ℓ* = m (log m + c) / (2 (1 + e^{−β}))`. The cutoff statement covers
/// `0 ≤ β ≤ 1`; other values are computed with a warning.
pub fn mixing_cutoff(n: usize, beta: f64, c: f64) -> f64 {
    if !(0.0..=1.0).contains(&beta) {
        log::warn!("mixing cutoff evaluated at beta = {beta}, outside [0, 1]");
    }
    let m = (n * (n.saturating_sub(1)) / 2) as f64;
    m * (m.ln() + c) / (2.0 * (1.0 + (-beta).exp()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCheck {
    pub beta: f64,
    /// Largest gap between sorted dense eigenvalues and the closed form.
    pub eigenvalue_residual: f64,
    /// `max |Kψ_ξ − β_ξ ψ_ξ|` over all `ξ`.
    pub eigenvector_residual: f64,
    /// `max |⟨ψ_ξ, ψ_η⟩_{p_β} − δ_{ξη}|`.
    pub orthonormality_residual: f64,
    /// `max |p(x)K(x,y) − p(y)K(y,x)|`.
    pub detailed_balance_residual: f64,
    /// Largest gap between the closed-form χ² and matrix powers over
    /// `ℓ = 0..=20` and both corners, relative once χ² exceeds 1.
    pub chi_square_residual: f64,
}

/// Dense verification of the closed-form spectral theory at `n = 3`.
pub fn spectral_check(beta: f64) -> Result<SpectralCheck> {
    let n = 3;
    let m = 3;
    let size = 1usize << m;
    let k = metropolis_matrix(n, beta)?;
    let model = ModelSpec::erdos_renyi(beta);
    let p = gibbs_law(n, &model)?;

    let mut dense: Vec<f64> = k.clone().symmetric_eigen_sorted(&p)?;
    let mut closed: Vec<f64> = (0..size as u64)
        .map(|c| er_eigenvalue(c.count_ones() as usize, beta, m))
        .collect();
    dense.sort_by(f64::total_cmp);
    closed.sort_by(f64::total_cmp);
    let eigenvalue_residual = dense.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let comps: Vec<SpectralComponent> = (0..size as u64)
        .map(|c| er_eigen(&indicator(c, m), beta, m))
        .collect::<Result<_>>()?;
    let table: Vec<Vec<f64>> = comps
        .iter()
        .map(|c| (0..size as u64).map(|x| c.eval(&indicator(x, m))).collect())
        .collect();
    let mut eigenvector_residual: f64 = 0.0;
    for (c, psi) in comps.iter().zip(&table) {
        for x in 0..size {
            let kpsi: f64 = (0..size).map(|y| k[(x, y)] * psi[y]).sum();
            eigenvector_residual = eigenvector_residual.max((kpsi - c.eigenvalue * psi[x]).abs());
        }
    }
    let mut orthonormality_residual: f64 = 0.0;
    for (a, pa) in table.iter().enumerate() {
        for (b, pb) in table.iter().enumerate() {
            let inner: f64 = (0..size).map(|x| pa[x] * pb[x] * p[x]).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            orthonormality_residual = orthonormality_residual.max((inner - target).abs());
        }
    }
    let detailed_balance_residual = detailed_balance_residual(&k, &p);

    let mut chi_square_residual: f64 = 0.0;
    for (corner, start) in [(Corner::Empty, 0usize), (Corner::Complete, size - 1)] {
        let mut power = DMatrix::<f64>::identity(size, size);
        for ell in 0..=20 {
            let dense_chi: f64 = (0..size).map(|y| (power[(start, y)] - p[y]).powi(2) / p[y]).sum();
            let closed = chi_square_distance(corner, beta, n, ell as f64)?;
            chi_square_residual = chi_square_residual.max((dense_chi - closed).abs() / closed.max(1.0));
            power = &power * &k;
        }
    }
    Ok(SpectralCheck {
        beta,
        eigenvalue_residual,
        eigenvector_residual,
        orthonormality_residual,
        detailed_balance_residual,
        chi_square_residual,
    })
}

pub fn detailed_balance_residual(k: &DMatrix<f64>, p: &[f64]) -> f64 {
    let size = p.len();
    let mut worst: f64 = 0.0;
    for x in 0..size {
        for y in 0..size {
            worst = worst.max((p[x] * k[(x, y)] - p[y] * k[(y, x)]).abs());
        }
    }
    worst
}

/// Stationary vector of a dense transition matrix: the left eigenvector for
/// eigenvalue 1, normalized to sum 1.
pub fn stationary_vector(k: &DMatrix<f64>) -> Result<Vec<f64>> {
    let size = k.nrows();
    // solve (Kᵀ − I) π = 0 with the last equation replaced by Σ π = 1
    let mut a = k.transpose() - DMatrix::identity(size, size);
    for j in 0..size {
        a[(size - 1, j)] = 1.0;
    }
    let mut rhs = nalgebra::DVector::zeros(size);
    rhs[size - 1] = 1.0;
    let solution = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::domain("transition matrix has no unique stationary vector"))?;
    Ok(solution.iter().copied().collect())
}

trait ReversibleSpectrum {
    fn symmetric_eigen_sorted(self, p: &[f64]) -> Result<Vec<f64>>;
}

impl ReversibleSpectrum for DMatrix<f64> {
    /// Eigenvalues of a chain reversible with respect to `p`, via the symmetric
    /// matrix `D^{1/2} K D^{−1/2}` with `D = diag(p)`.
    fn symmetric_eigen_sorted(self, p: &[f64]) -> Result<Vec<f64>> {
        let size = p.len();
        if p.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::domain("stationary law must be positive"));
        }
        let mut s = self;
        for x in 0..size {
            for y in 0..size {
                s[(x, y)] *= (p[x] / p[y]).sqrt();
            }
        }
        let sym = 0.5 * (&s + s.transpose());
        let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }
}
