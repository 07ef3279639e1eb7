// Runs the three local detectors on one AP with increasingly reliable
// priors and prints their Gaussian output model and demapped LLRs.

use cfidd::detect::{demap_llr, Constellation, DetectorKind, LocalChannel, LocalDetector, SoftSymbolStats};
use cfidd::linalg::{complex_normal, complex_normal_vec, CMat};
use cfidd::rng::SimRng;
use rand::SeedableRng;

pub fn run_example() -> cfidd::Result<()> {
    let c = Constellation::qpsk();
    let mut rng = SimRng::seed_from_u64(11);
    let (n, k_ues) = (4, 4);
    let g = CMat::from_fn(n, k_ues, |_, _| complex_normal(&mut rng));
    let cov: Vec<CMat> = (0..k_ues).map(|_| CMat::identity(n, n).scale(0.02)).collect();
    let ch = LocalChannel { g_hat: &g, error_cov: &cov, sigma2: 0.1, es: c.es() };

    let bits = [[0u8, 1], [1, 1], [0, 0], [1, 0]];
    let s = CMat::from_fn(k_ues, 1, |k, _| c.map(&bits[k]));
    let y = (&g * &s).column(0) + complex_normal_vec(&mut rng, n).scale(0.1f64.sqrt());

    for reliability in [0.0, 2.0, 8.0] {
        // Priors that agree with the transmitted bits.
        let priors: Vec<Vec<f64>> = bits
            .iter()
            .map(|b| b.iter().map(|&x| if x == 0 { reliability } else { -reliability }).collect())
            .collect();
        let stats = SoftSymbolStats::from_priors(&c, &priors);
        println!("prior |LLR| = {reliability}");
        let mut det = LocalDetector::new(ch, c.es());
        for kind in DetectorKind::ALL {
            let out = det.detect(kind, &y, 0, &stats)?;
            let llr = demap_llr(out.s_tilde, out.mu, out.sigma2_h, &priors[0], &c);
            println!(
                "  {:<9} mu = {:.3}  sigma2_h = {:.4}  LLR = [{:+.2}, {:+.2}]",
                kind.as_str(),
                out.mu.re,
                out.sigma2_h,
                llr[0],
                llr[1]
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> cfidd::Result<()> {
    run_example()
}
