use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use cfidd::detect::{
    demap_llr, gaussian_params, mmse_pic_detect, mmse_pic_filter, rmf_variance_normalized, soft_symbol, Constellation,
    DetectorKind, LocalChannel, LocalDetector, SoftSymbolStats,
};
use cfidd::linalg::{complex_normal, complex_normal_vec, psd_sqrt, CMat, CVec};
use cfidd::rng::SimRng;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Gray QPSK written out by hand: bit 0 sets the real sign, bit 1 the
/// imaginary sign, `0 ↦ +`.
fn qpsk_table() -> [([u8; 2], Complex64); 4] {
    [
        ([0, 0], Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
        ([0, 1], Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)),
        ([1, 0], Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
        ([1, 1], Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2)),
    ]
}

fn bit_prob(bit: u8, llr: f64) -> f64 {
    let p0 = 1.0 / (1.0 + (-llr).exp());
    if bit == 0 {
        p0
    } else {
        1.0 - p0
    }
}

fn brute_force_stats(priors: [f64; 2]) -> (Complex64, f64) {
    let table = qpsk_table();
    let p: Vec<f64> = table.iter().map(|(b, _)| bit_prob(b[0], priors[0]) * bit_prob(b[1], priors[1])).collect();
    let mean: Complex64 = table.iter().zip(&p).map(|((_, s), w)| s * w).sum();
    let var = table.iter().zip(&p).map(|((_, s), w)| (s - mean).norm_sqr() * w).sum();
    (mean, var)
}

/// Extrinsic LLRs by explicit enumeration of the four hypotheses.
fn brute_force_demap(s_tilde: Complex64, mu: Complex64, sigma2: f64, priors: [f64; 2]) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (bit, o) in out.iter_mut().enumerate() {
        let (mut num, mut den) = (0.0, 0.0);
        for (b, s) in qpsk_table() {
            let like = (-(s_tilde - mu * s).norm_sqr() / sigma2).exp();
            let other = 1 - bit;
            let w = like * bit_prob(b[other], priors[other]);
            if b[bit] == 0 {
                num += w;
            } else {
                den += w;
            }
        }
        *o = (num / den).ln();
    }
    out
}

#[test]
fn constellation_matches_the_reference_table() {
    let c = Constellation::qpsk();
    for (bits, s) in qpsk_table() {
        assert!((c.map(&bits) - s).norm() < 1e-15);
    }
}

#[test]
fn soft_statistics_match_enumeration() {
    let c = Constellation::qpsk();
    let (mean, var) = soft_symbol(&c, &[2.0, 0.0]);
    let (bm, bv) = brute_force_stats([2.0, 0.0]);
    assert!((mean - bm).norm() < 1e-12);
    assert!((var - bv).abs() < 1e-12);
    assert!((mean.re - 0.538528).abs() < 1e-6 && mean.im.abs() < 1e-12);
    assert!((var - 0.709987).abs() < 1e-6);

    let (mean, var) = soft_symbol(&c, &[0.0, 0.0]);
    assert!(mean.norm() < 1e-15 && (var - 1.0).abs() < 1e-15);
    let (mean, var) = soft_symbol(&c, &[40.0, 40.0]);
    assert!((mean - Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)).norm() < 1e-12);
    assert!(var < 1e-15);
}

proptest! {
    #[test]
    fn soft_second_moment_is_symbol_energy(a in -50.0f64..50.0, b in -50.0f64..50.0) {
        let c = Constellation::qpsk();
        let stats = SoftSymbolStats::from_priors(&c, &[[a, b]]);
        prop_assert!((stats.second_moment(0) - 1.0).abs() < 1e-12);
        let (bm, bv) = brute_force_stats([a.clamp(-40.0, 40.0), b.clamp(-40.0, 40.0)]);
        prop_assert!((stats.mean[0] - bm).norm() < 1e-9);
        prop_assert!((stats.var[0] - bv).abs() < 1e-9);
    }

    #[test]
    fn demapper_matches_enumeration(
        re in -2.0f64..2.0, im in -2.0f64..2.0, mu_re in 0.2f64..3.0, mu_im in -1.0f64..1.0,
        sigma2 in 0.3f64..3.0, p0 in -6.0f64..6.0, p1 in -6.0f64..6.0,
    ) {
        let c = Constellation::qpsk();
        let s = Complex64::new(re, im);
        let mu = Complex64::new(mu_re, mu_im);
        let got = demap_llr(s, mu, sigma2, &[p0, p1], &c);
        let want = brute_force_demap(s, mu, sigma2, [p0, p1]);
        for (g, w) in got.iter().zip(want) {
            prop_assert!((g - w.clamp(-40.0, 40.0)).abs() < 1e-9, "{} vs {}", g, w);
        }
    }

    #[test]
    fn zero_prior_demapper_is_odd(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let c = Constellation::qpsk();
        let a = demap_llr(Complex64::new(re, im), Complex64::new(1.0, 0.0), 0.7, &[0.0, 0.0], &c);
        let b = demap_llr(Complex64::new(-re, im), Complex64::new(1.0, 0.0), 0.7, &[0.0, 0.0], &c);
        let d = demap_llr(Complex64::new(re, -im), Complex64::new(1.0, 0.0), 0.7, &[0.0, 0.0], &c);
        prop_assert!((a[0] + b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
        prop_assert!((a[1] + d[1]).abs() < 1e-12 && (a[0] - d[0]).abs() < 1e-12);
    }
}

#[test]
fn demapper_reference_point() {
    let c = Constellation::qpsk();
    let s = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let llr = demap_llr(s, Complex64::new(1.0, 0.0), 1.0, &[0.0, 0.0], &c);
    let want = brute_force_demap(s, Complex64::new(1.0, 0.0), 1.0, [0.0, 0.0]);
    for (g, w) in llr.iter().zip(want) {
        assert!((g - w).abs() < 1e-12);
        assert!((g - 2.0).abs() < 1e-12);
    }
    assert_eq!(demap_llr(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), 1.0, &[0.0, 0.0], &c), vec![0.0, 0.0]);
}

#[test]
fn extrinsic_output_ignores_the_own_prior() {
    let c = Constellation::qpsk();
    let s = Complex64::new(0.3, -0.8);
    let mu = Complex64::new(1.2, 0.1);
    let reference = demap_llr(s, mu, 0.9, &[0.0, 1.5], &c);
    for own in [-40.0, -3.0, 0.5, 12.0, 40.0] {
        let llr = demap_llr(s, mu, 0.9, &[own, 1.5], &c);
        assert!((llr[0] - reference[0]).abs() < 1e-6, "prior {own}: {} vs {}", llr[0], reference[0]);
    }
}

fn random_instance(rng: &mut SimRng, n: usize, k_ues: usize, err: f64) -> (CMat, Vec<CMat>) {
    let g = CMat::from_fn(n, k_ues, |_, _| complex_normal(rng));
    let cov = (0..k_ues)
        .map(|_| {
            let a = CMat::from_fn(n, n, |_, _| complex_normal(rng));
            (&a * a.adjoint()).scale(err / n as f64)
        })
        .collect();
    (g, cov)
}

#[test]
fn perfect_cancellation_leaves_the_desired_term() {
    let mut rng = SimRng::seed_from_u64(21);
    let c = Constellation::qpsk();
    let (n, k_ues) = (4, 4);
    let (g, _) = random_instance(&mut rng, n, k_ues, 0.0);
    let cov = vec![CMat::zeros(n, n); k_ues];
    let s: Vec<Complex64> = (0..k_ues).map(|_| c.points()[rng.random_range(0..4)]).collect();
    let y = &g * CVec::from_vec(s.clone());
    let stats = SoftSymbolStats { mean: s.clone(), var: vec![0.0; k_ues] };
    let ch = LocalChannel { g_hat: &g, error_cov: &cov, sigma2: 0.05, es: 1.0 };
    for k in 0..k_ues {
        let w = mmse_pic_filter(&ch, k, &stats, true, 1.0).unwrap();
        let s_tilde = mmse_pic_detect(&y, &g, &s, &w, k, true);
        let mu = w.dotc(&g.column(k));
        assert!((s_tilde - mu * s[k]).norm() < 1e-12);

        // Interference fully cancelled: single-user MMSE filter and a
        // noise-only residual.
        let gk = g.column(k);
        let single = (&gk * gk.adjoint() + CMat::identity(n, n).scale(0.05)).lu().solve(&gk).unwrap();
        assert!((single - &w).norm() < 1e-10 * w.norm());
        let p = gaussian_params(DetectorKind::MmsePic, &w, k, &ch, &stats);
        assert!((p.sigma2 - 0.05 * w.norm_squared()).abs() < 1e-12);
    }
}

#[test]
fn pic_output_matches_term_by_term_evaluation() {
    let mut rng = SimRng::seed_from_u64(22);
    let c = Constellation::qpsk();
    let (n, k_ues) = (4, 4);
    for _ in 0..50 {
        let (g, cov) = random_instance(&mut rng, n, k_ues, 0.1);
        let priors: Vec<[f64; 2]> = (0..k_ues).map(|_| [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]).collect();
        let stats = SoftSymbolStats::from_priors(&c, &priors);
        let y = complex_normal_vec(&mut rng, n);
        let ch = LocalChannel { g_hat: &g, error_cov: &cov, sigma2: 0.2, es: 1.0 };
        let mut det = LocalDetector::new(ch, 1.0);
        for k in 0..k_ues {
            let w = mmse_pic_filter(&ch, k, &stats, true, 1.0).unwrap();
            let mut want = w.dotc(&y);
            for i in (0..k_ues).filter(|&i| i != k) {
                want -= w.dotc(&g.column(i)) * stats.mean[i];
            }
            let got = det.detect(DetectorKind::MmsePic, &y, k, &stats).unwrap();
            assert!((got.s_tilde - want).norm() < 1e-12 * want.norm().max(1.0));
            let p = gaussian_params(DetectorKind::MmsePic, &w, k, &ch, &stats);
            assert!((got.mu - p.mu).norm() < 1e-12 && (got.sigma2_h - p.sigma2).abs() < 1e-12);
        }
    }
}

#[test]
fn pic_variance_matches_monte_carlo() {
    let mut rng = SimRng::seed_from_u64(23);
    let c = Constellation::qpsk();
    let (n, k_ues, k) = (4, 3, 0);
    let (g_hat, cov) = random_instance(&mut rng, n, k_ues, 0.3);
    let roots: Vec<CMat> = cov.iter().map(|m| psd_sqrt(m).unwrap()).collect();
    let priors = vec![[0.0, 0.0], [1.5, -0.7], [-3.0, 0.4]];
    let stats = SoftSymbolStats::from_priors(&c, &priors);
    let sigma2 = 0.4;
    let ch = LocalChannel { g_hat: &g_hat, error_cov: &cov, sigma2, es: 1.0 };
    let w = mmse_pic_filter(&ch, k, &stats, true, 1.0).unwrap();
    let p = gaussian_params(DetectorKind::MmsePic, &w, k, &ch, &stats);

    // Symbols follow the prior distribution; errors and noise are fresh per draw.
    let probs: Vec<Vec<f64>> = priors.iter().map(|pr| cfidd::detect::symbol_probabilities(&c, pr)).collect();
    let draw = |rng: &mut SimRng, j: usize| {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (s, p) in c.points().iter().zip(&probs[j]) {
            acc += p;
            if u < acc {
                return *s;
            }
        }
        *c.points().last().unwrap()
    };
    let draws = 100_000;
    let mut acc = 0.0;
    for _ in 0..draws {
        let s: Vec<Complex64> = (0..k_ues).map(|j| draw(&mut rng, j)).collect();
        let mut y = complex_normal_vec(&mut rng, n).scale(sigma2.sqrt());
        for j in 0..k_ues {
            let g = g_hat.column(j) + &roots[j] * complex_normal_vec(&mut rng, n);
            y += g * s[j];
        }
        let s_tilde = mmse_pic_detect(&y, &g_hat, &stats.mean, &w, k, true);
        acc += (s_tilde - p.mu * s[k]).norm_sqr();
    }
    let empirical = acc / draws as f64;
    assert!((empirical / p.sigma2 - 1.0).abs() < 0.03, "{empirical} vs {}", p.sigma2);
}

#[test]
fn rmf_quadratic_form_matches_its_expectation() {
    let mut rng = SimRng::seed_from_u64(24);
    let (n, k_ues) = (4, 3);
    let cov: Vec<CMat> = (0..k_ues).map(|j| CMat::identity(n, n).scale(0.05 * (j + 1) as f64)).collect();
    let stats = SoftSymbolStats::uninformed(k_ues, 1.0);
    let sigma2 = 0.3;
    let draws = 100_000;
    let mut acc = 0.0;
    for _ in 0..draws {
        let g = CMat::from_fn(n, k_ues, |_, _| complex_normal(&mut rng));
        let ch = LocalChannel { g_hat: &g, error_cov: &cov, sigma2, es: 1.0 };
        acc += gaussian_params(DetectorKind::Rmf, &g.column(0).into_owned(), 0, &ch, &stats).sigma2;
    }
    let trc: f64 = cov.iter().map(|c| c.trace().re).sum();
    let expected = n as f64 * (k_ues as f64 - 1.0) + trc + n as f64 * sigma2;
    assert!((acc / draws as f64 / expected - 1.0).abs() < 0.01);

    // Without estimation error the closed form is exactly that expectation.
    let zero = vec![CMat::zeros(n, n); k_ues];
    let g = CMat::zeros(n, k_ues);
    let ch = LocalChannel { g_hat: &g, error_cov: &zero, sigma2, es: 1.0 };
    let closed = rmf_variance_normalized(&ch);
    assert!((closed - (n as f64 * (k_ues as f64 - 1.0) + n as f64 * sigma2)).abs() < 1e-12);
}
