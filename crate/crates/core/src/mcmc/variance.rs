//! Variance of chain averages through the Erdős–Rényi spectral decomposition.
//!
//! For a stationary chain with eigenpairs `(β_ξ, ψ_ξ)` and `f = Σ f̂(ξ) ψ_ξ`, the
//! average of `N` consecutive states has variance `N^{−2} Σ_{ξ≠0} |f̂(ξ)|² W_N(ξ)`
//! with `W_N = (N − 2β_ξ − Nβ_ξ² + 2β_ξ^{N+1}) / (1 − β_ξ)²`.

use crate::error::{Error, Result};
use crate::numeric::{ln_binomials, log_sum_exp, softplus};

/// `(1 − e^a)^j (1 + e^{a+β})^{m−j}`: the coefficient of `f = e^{aE}` before
/// dividing by `z(β)` and without the `e^{βj/2}` from the eigenfunction scale.
pub fn fourier_coeff_exp_edges(a: f64, beta: f64, j: usize, m: usize) -> f64 {
    (1.0 - a.exp()).powi(j as i32) * (1.0 + (a + beta).exp()).powi((m - j) as i32)
}

/// `f̂(ξ) = Σ_G e^{aE(G)} ψ_ξ(x_G) p_β(G)` for `|ξ| = j`:
/// `e^{βj/2} (1 − e^a)^j (1 + e^{a+β})^{m−j} / (1 + e^β)^m`.
pub fn fourier_coeff_normalized(a: f64, beta: f64, j: usize, m: usize) -> f64 {
    let (ln_abs, sign) = ln_fourier_coeff_normalized(a, beta, j, m);
    sign * ln_abs.exp()
}

/// `(log |f̂|, sign f̂)` of [`fourier_coeff_normalized`]; `log |f̂| = −∞` when `a = 0`
/// and `j ≥ 1`.
pub fn ln_fourier_coeff_normalized(a: f64, beta: f64, j: usize, m: usize) -> (f64, f64) {
    let base = 1.0 - a.exp();
    let sign = if base < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
    let ln_base = if j == 0 { 0.0 } else { j as f64 * base.abs().ln() };
    let ln = 0.5 * beta * j as f64 + ln_base + (m - j) as f64 * softplus(a + beta) - m as f64 * softplus(beta);
    (ln, sign)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceReport {
    /// Variance of the `N`-step average.
    pub exact: f64,
    /// `lim N · Var = Σ |f̂|² (1 + β_ξ)/(1 − β_ξ)`.
    pub asymptotic: f64,
    /// `2 ‖f‖²_{2,0} / (1 − β₁)` with `β₁` the largest listed eigenvalue.
    pub bound: f64,
}

/// `W_N(ξ)`, the sum `Σ_{s,t ≤ N} β_ξ^{|s−t|}`.
pub fn w_n(eigenvalue: f64, n: usize) -> f64 {
    let b = eigenvalue;
    let nf = n as f64;
    (nf - 2.0 * b - nf * b * b + 2.0 * b.powi(n as i32 + 1)) / ((1.0 - b) * (1.0 - b))
}

/// Variance of a chain average from its nonconstant spectral coefficients:
/// `coefficients[k]` and `eigenvalues[k]` range over `ξ ≠ 0`.
pub fn variance_mcmc_mean(coefficients: &[f64], eigenvalues: &[f64], n: usize) -> Result<VarianceReport> {
    if coefficients.len() != eigenvalues.len() {
        return Err(Error::Mismatch(format!(
            "{} coefficients but {} eigenvalues",
            coefficients.len(),
            eigenvalues.len()
        )));
    }
    if n == 0 {
        return Err(Error::domain("need N >= 1"));
    }
    if let Some(b) = eigenvalues.iter().find(|b| !(b.abs() < 1.0 || **b == -1.0)) {
        return Err(Error::domain(format!(
            "eigenvalue {b} on a nonconstant component: the chain is not ergodic"
        )));
    }
    let mut exact = 0.0;
    let mut asymptotic = 0.0;
    let mut norm = 0.0;
    let mut top = f64::NEG_INFINITY;
    for (&c, &b) in coefficients.iter().zip(eigenvalues) {
        let c2 = c * c;
        exact += c2 * w_n(b, n);
        asymptotic += c2 * (1.0 + b) / (1.0 - b);
        norm += c2;
        top = top.max(b);
    }
    let nf = n as f64;
    let bound = if eigenvalues.is_empty() { 0.0 } else { 2.0 * norm / (1.0 - top) };
    Ok(VarianceReport { exact: exact / (nf * nf), asymptotic, bound })
}

/// Spectral analysis of the ratio estimator for `z(β)/z(β⁰)` from a Metropolis
/// chain at `β⁰ ≥ 0` averaging `f = e^{(β−β⁰)E}`. Everything that scales like
/// `e^{Θ(m)}` is reported as a logarithm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McmleBound {
    pub m: usize,
    /// `log E_{β⁰} f = log z(β)/z(β⁰)`.
    pub ln_mean: f64,
    /// `β₁ = 1 − (1 + e^{−β⁰})/m`.
    pub second_eigenvalue: f64,
    /// `log (‖f‖²_{2,0} / mean²)`.
    pub ln_relative_norm: f64,
    /// `log (Σ_{ξ≠0} |f̂|² (1+β_ξ)/(1−β_ξ) / mean²)`.
    pub ln_relative_asymptotic: f64,
    /// `log (2 ‖f‖²_{2,0} / ((1 − β₁) mean²))`.
    pub ln_relative_asymptotic_bound: f64,
}

impl McmleBound {
    /// `σ̄_∞ / mean`.
    pub fn sd_ratio(&self) -> f64 {
        (0.5 * self.ln_relative_asymptotic).exp()
    }
}

pub fn mcmle_er_bound(n: usize, beta0: f64, beta: f64) -> Result<McmleBound> {
    if !(beta0 >= 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("need beta0 >= 0 and finite beta, got {beta0}, {beta}")));
    }
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2, got {n}")));
    }
    let m = n * (n - 1) / 2;
    let mf = m as f64;
    let a = beta - beta0;
    let ln_mean = mf * (softplus(beta) - softplus(beta0));
    // |f̂(ξ)|² / mean² = ρ^{|ξ|}
    let ln_rho = if a == 0.0 {
        f64::NEG_INFINITY
    } else {
        beta0 + 2.0 * (1.0 - a.exp()).abs().ln() - 2.0 * softplus(a + beta0)
    };
    let binom = ln_binomials(m);
    let rate = 1.0 + (-beta0).exp();
    let norm_terms = (1..=m).map(|j| binom[j] + j as f64 * ln_rho);
    let ln_relative_norm = log_sum_exp(norm_terms);
    let asym_terms = (1..=m).filter_map(|j| {
        let lambda = 1.0 - j as f64 * rate / mf;
        let factor = (1.0 + lambda) / (1.0 - lambda);
        (factor > 0.0).then(|| binom[j] + j as f64 * ln_rho + factor.ln())
    });
    let ln_relative_asymptotic = log_sum_exp(asym_terms);
    let second_eigenvalue = 1.0 - rate / mf;
    Ok(McmleBound {
        m,
        ln_mean,
        second_eigenvalue,
        ln_relative_norm,
        ln_relative_asymptotic,
        ln_relative_asymptotic_bound: (2.0 / (1.0 - second_eigenvalue)).ln() + ln_relative_norm,
    })
}

/// Per-edge constants of the MCMLE benchmark between `β⁰` and `β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McmleBenchmark {
    pub m: usize,
    /// `μ^{1/m} = (1 + e^{β⁰})/(1 + e^β)`, with `μ = z(β⁰)/z(β)`.
    pub mu_root: f64,
    /// `2 (1 + e^{−β})`.
    pub denominator: f64,
    /// `1 + r²` with `r = (1 − e^{β⁰−β})/(1 + e^{β⁰})`.
    pub inflation: f64,
    /// `√((m / denominator) (inflation^m − 1))`.
    pub sd_ratio: f64,
}

/// The closed form built from the coefficient in [`fourier_coeff_exp_edges`]
/// (no `e^{βj/2}` factor, `a = β⁰ − β`). Dropping that factor makes it far
/// smaller than the exact value from [`mcmle_er_bound`].
pub fn mcmle_benchmark(n: usize, beta0: f64, beta: f64) -> McmleBenchmark {
    let m = n * n.saturating_sub(1) / 2;
    let mf = m as f64;
    let r = (1.0 - (beta0 - beta).exp()) / (1.0 + beta0.exp());
    let denominator = 2.0 * (1.0 + (-beta).exp());
    let inflation = 1.0 + r * r;
    McmleBenchmark {
        m,
        mu_root: (1.0 + beta0.exp()) / (1.0 + beta.exp()),
        denominator,
        inflation,
        sd_ratio: (mf / denominator * (inflation.powf(mf) - 1.0)).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcmc::spectral::{er_eigen, indicator};
    use approx::assert_relative_eq;

    /// `Σ_x f(x) ψ_ξ(x) p_β(x)` by enumeration of `{0,1}^m`.
    fn brute_coeff(a: f64, beta: f64, xi: u64, m: usize) -> f64 {
        let comp = er_eigen(&indicator(xi, m), beta, m).unwrap();
        let z = (1.0 + beta.exp()).powi(m as i32);
        (0..1u64 << m)
            .map(|x| {
                let e = x.count_ones() as f64;
                (a * e).exp() * comp.eval(&indicator(x, m)) * (beta * e).exp() / z
            })
            .sum()
    }

    #[test]
    fn normalized_coefficients_match_enumeration() {
        for (a, beta) in [(0.7, 0.4), (-1.3, 1.0), (0.0, 0.5), (2.0, 0.0)] {
            for xi in 0..8u64 {
                let j = xi.count_ones() as usize;
                let brute = brute_coeff(a, beta, xi, 3);
                assert!((fourier_coeff_normalized(a, beta, j, 3) - brute).abs() < 1e-12, "{a} {beta} {xi}");
            }
        }
    }

    #[test]
    fn unnormalized_coefficient() {
        assert_eq!(fourier_coeff_exp_edges(0.0, 0.3, 2, 3), 0.0);
        let direct: f64 = (0..8u64).map(|x| (0.4 * x.count_ones() as f64 + 0.9 * x.count_ones() as f64).exp()).sum();
        assert_relative_eq!(fourier_coeff_exp_edges(0.4, 0.9, 0, 3), direct, max_relative = 1e-14);
    }

    #[test]
    fn single_step_variance_is_the_norm() {
        let coeffs = [0.3, -0.2, 0.5];
        let eig = [0.4, -0.1, 0.0];
        let r = variance_mcmc_mean(&coeffs, &eig, 1).unwrap();
        assert_relative_eq!(r.exact, 0.09 + 0.04 + 0.25, max_relative = 1e-14);
        assert!(r.asymptotic <= r.bound);
        assert!(variance_mcmc_mean(&coeffs, &[1.0, 0.0, 0.0], 3).is_err());
        assert!(variance_mcmc_mean(&coeffs, &eig[..2], 3).is_err());
    }

    #[test]
    fn w_n_is_the_autocovariance_sum() {
        for b in [-0.7, -0.1, 0.0, 0.3, 0.95] {
            for n in 1..12 {
                let mut direct = 0.0;
                for s in 0..n {
                    for t in 0..n {
                        direct += f64::powi(b, (s as i32 - t as i32).abs());
                    }
                }
                assert_relative_eq!(w_n(b, n), direct, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn exact_variance_converges_to_asymptotic() {
        let coeffs = [0.3, -0.2, 0.5];
        let eig = [0.4, -0.1, 0.8];
        let r = variance_mcmc_mean(&coeffs, &eig, 1_000_000).unwrap();
        assert_relative_eq!(r.exact * 1e6, r.asymptotic, max_relative = 1e-4);
    }

    #[test]
    fn mcmle_bound_matches_dense_spectrum() {
        let (beta0, beta) = (0.8, 0.3);
        let m = 3;
        let a = beta - beta0;
        let mut coeffs = vec![];
        let mut eig = vec![];
        for xi in 1..8u64 {
            coeffs.push(brute_coeff(a, beta0, xi, m));
            eig.push(er_eigen(&indicator(xi, m), beta0, m).unwrap().eigenvalue);
        }
        let mean = brute_coeff(a, beta0, 0, m);
        let r = variance_mcmc_mean(&coeffs, &eig, 10).unwrap();
        let b = mcmle_er_bound(3, beta0, beta).unwrap();
        assert_relative_eq!(b.ln_mean.exp(), mean, max_relative = 1e-13);
        assert_relative_eq!(b.ln_relative_asymptotic.exp(), r.asymptotic / (mean * mean), max_relative = 1e-12);
        assert_relative_eq!(b.ln_relative_asymptotic_bound.exp(), r.bound / (mean * mean), max_relative = 1e-12);
    }

    #[test]
    fn benchmark_constants() {
        let c = mcmle_benchmark(30, 2.0, 1.0);
        assert_eq!(c.m, 435);
        assert_relative_eq!(c.mu_root, (1.0 + f64::exp(2.0)) / (1.0 + f64::exp(1.0)), max_relative = 1e-15);
        assert!(c.sd_ratio > 9e4);
    }
}
