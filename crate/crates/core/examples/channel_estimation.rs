// Estimates the channels of one random deployment from pilots and compares
// the empirical estimation error with the predicted error covariance.

use cfidd::chanest::{assign_pilots, mmse_estimate, pilot_observation};
use cfidd::harness::compute_noise_power;
use cfidd::linalg::{frobenius_rel, CMat};
use cfidd::rng::{substream, Stream};
use cfidd::sysmodel::{linear_to_db, ChannelState};
use cfidd::SystemConfig;

pub fn run_example() -> cfidd::Result<()> {
    let config = SystemConfig::default();
    let state = ChannelState::generate(&config, 42)?;
    let sigma2 = compute_noise_power(&state.channels, config.rho, 20.0)?;
    let plan = assign_pilots(config.ues, config.tau_p);
    let eta = vec![config.eta; config.ues];

    println!("large-scale fading (dB), rows = UEs, columns = APs");
    for k in 0..config.ues {
        let row: Vec<String> = (0..config.aps).map(|l| format!("{:7.1}", linear_to_db(state.beta[(k, l)]))).collect();
        println!("  {}", row.join(" "));
    }

    // Average the error outer product of UE 0 at AP 0 over fresh pilot noise.
    let draws = 2000;
    let n = config.antennas;
    let mut empirical = CMat::zeros(n, n);
    let mut rng = substream(42, Stream::PilotNoise, 0);
    let mut predicted = None;
    for _ in 0..draws {
        let y = pilot_observation(&state.channels, &plan, &eta, sigma2, &mut rng);
        let est = mmse_estimate(&y, &plan, &state.omega, &eta, sigma2)?;
        let err = state.channels[0].column(0) - est.g_hat[0].column(0);
        empirical += &err * err.adjoint();
        predicted.get_or_insert(est.error_cov[0][0].clone());
    }
    empirical /= num_complex::Complex64::from(draws as f64);
    let predicted = predicted.expect("at least one draw");
    println!(
        "UE 0 at AP 0: tr C = {:.3e}, relative Frobenius mismatch after {draws} draws = {:.3}",
        predicted.trace().re,
        frobenius_rel(&empirical, &predicted)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> cfidd::Result<()> {
    run_example()
}
