use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::sysmodel::db_to_linear;

/// Per-AP SNR `tr(G_l diag(ρ) G_lᴴ) / (σ² N K)` for equal UE powers `rho`.
pub fn realized_snr(channels: &[CMat], rho: f64, sigma2: f64) -> Vec<f64> {
    channels
        .iter()
        .map(|g| rho * g.norm_squared() / (sigma2 * (g.nrows() * g.ncols()) as f64))
        .collect()
}

/// Noise power that makes the AP-averaged SNR equal `target_snr_db` for
/// this channel realization.
pub fn compute_noise_power(channels: &[CMat], rho: f64, target_snr_db: f64) -> Result<f64> {
    if channels.is_empty() {
        return Err(Error::Degenerate("no access points".into()));
    }
    let per_ap: f64 = channels
        .iter()
        .map(|g| rho * g.norm_squared() / (g.nrows() * g.ncols()) as f64)
        .sum::<f64>()
        / channels.len() as f64;
    if !(per_ap > 0.0 && per_ap.is_finite()) {
        return Err(Error::Degenerate("zero channel energy".into()));
    }
    if !target_snr_db.is_finite() {
        return Err(Error::InvalidArgument(format!("SNR must be finite, got {target_snr_db}")));
    }
    Ok(per_ap / db_to_linear(target_snr_db))
}
