//! Prior symbol statistics from a-priori bit LLRs.

use num_complex::Complex64;

use super::constellation::{level, Constellation};
use crate::linalg::ZERO;
use crate::ldpc::clamp_llr;

/// `P(s_j = s)` for every point, as a product of per-bit logistic terms
/// `[1 + exp(−s^{b} Λ_b)]⁻¹`.
pub fn symbol_probabilities(c: &Constellation, priors: &[f64]) -> Vec<f64> {
    c.labels()
        .iter()
        .map(|label| {
            label
                .iter()
                .zip(priors)
                .map(|(&b, &llr)| 1.0 / (1.0 + (-level(b) * clamp_llr(llr)).exp()))
                .product()
        })
        .collect()
}

/// Prior mean `s̄ = Σ s P(s)` and variance `σ² = Σ |s − s̄|² P(s)`.
pub fn soft_symbol(c: &Constellation, priors: &[f64]) -> (Complex64, f64) {
    let probs = symbol_probabilities(c, priors);
    let mean: Complex64 = c.points().iter().zip(&probs).map(|(s, p)| s * p).sum();
    let var = c.points().iter().zip(&probs).map(|(s, p)| (s - mean).norm_sqr() * p).sum();
    (mean, var)
}

/// Prior means and variances of all `K` UEs for one symbol slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftSymbolStats {
    pub mean: Vec<Complex64>,
    pub var: Vec<f64>,
}

impl SoftSymbolStats {
    /// No prior knowledge: `s̄ = 0`, `σ² = Es`.
    pub fn uninformed(ues: usize, es: f64) -> Self {
        Self { mean: vec![ZERO; ues], var: vec![es; ues] }
    }

    /// `priors[j]` holds the `M_c` prior LLRs of UE `j`'s symbol.
    pub fn from_priors<P: AsRef<[f64]>>(c: &Constellation, priors: &[P]) -> Self {
        let (mean, var) = priors.iter().map(|p| soft_symbol(c, p.as_ref())).unzip();
        Self { mean, var }
    }

    pub fn ues(&self) -> usize {
        self.mean.len()
    }

    /// `E{|s_j|²} = |s̄_j|² + σ²_j`.
    pub fn second_moment(&self, j: usize) -> f64 {
        self.mean[j].norm_sqr() + self.var[j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_prior() {
        let c = Constellation::qpsk();
        let (m, v) = soft_symbol(&c, &[0.0, 0.0]);
        assert_eq!(m, ZERO);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn saturated_prior_picks_point() {
        let c = Constellation::qpsk();
        let (m, v) = soft_symbol(&c, &[40.0, 40.0]);
        let target = c.map(&[0, 0]);
        assert!((m - target).norm() < 1e-15);
        assert!(v < 1e-15);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let c = Constellation::qpsk();
        let p = symbol_probabilities(&c, &[1.3, -0.4]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
