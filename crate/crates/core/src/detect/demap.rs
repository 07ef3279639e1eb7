//! Exact-sum soft demapping with a-priori information.

use num_complex::Complex64;

use super::constellation::{level, Constellation};
use crate::ldpc::clamp_llr;

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Extrinsic bit LLRs of one detected symbol.
///
/// For each bit, the log ratio of `Σ F(s̃|s) P(s)` over the points labelled
/// 0 and 1, with `F(s̃|s) ∝ exp(−|s̃ − μ s|²/σ²_h)`, minus the bit's own
/// prior LLR. Output is clamped.
pub fn demap_llr(
    s_tilde: Complex64,
    mu: Complex64,
    sigma2_h: f64,
    priors: &[f64],
    c: &Constellation,
) -> Vec<f64> {
    let m = c.bits_per_symbol();
    let priors: Vec<f64> = (0..m).map(|b| clamp_llr(priors.get(b).copied().unwrap_or(0.0))).collect();
    let metrics: Vec<f64> = c
        .points()
        .iter()
        .zip(c.labels())
        .map(|(s, label)| {
            let likelihood = -(s_tilde - mu * s).norm_sqr() / sigma2_h;
            let log_prior: f64 = label
                .iter()
                .zip(&priors)
                .map(|(&bit, &llr)| -(-level(bit) * llr).exp().ln_1p())
                .sum();
            likelihood + log_prior
        })
        .collect();
    (0..m)
        .map(|b| {
            let zero = log_sum_exp(c.labels().iter().zip(&metrics).filter(|(l, _)| l[b] == 0).map(|(_, x)| *x));
            let one = log_sum_exp(c.labels().iter().zip(&metrics).filter(|(l, _)| l[b] == 1).map(|(_, x)| *x));
            clamp_llr(zero - one - priors[b])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_input_gives_zero() {
        let c = Constellation::qpsk();
        let l = demap_llr(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), 1.0, &[0.0, 0.0], &c);
        assert_eq!(l, vec![0.0, 0.0]);
    }

    #[test]
    fn output_is_clamped() {
        let c = Constellation::qpsk();
        let l = demap_llr(Complex64::new(5.0, -5.0), Complex64::new(1.0, 0.0), 1e-6, &[0.0, 0.0], &c);
        assert_eq!(l, vec![40.0, -40.0]);
    }
}
