//! Pilot assignment, pilot-phase observations and per-AP MMSE channel
//! estimation.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::linalg::{complex_normal, hermitian_part, hpd_inverse, CMat, CVec};

/// Which pilot each UE transmits, and the pilot sequences themselves.
#[derive(Debug, Clone)]
pub struct PilotPlan {
    /// Zero-based pilot index `t_k` of every UE.
    pub assignment: Vec<usize>,
    /// For every UE, all UEs sharing its pilot (itself included), ascending.
    pub co_pilot: Vec<Vec<usize>>,
    /// `τ_p × τ_p`; column `t` is `ψ_t` with `‖ψ_t‖² = τ_p`.
    pub pilots: CMat,
}

impl PilotPlan {
    pub fn tau_p(&self) -> usize {
        self.pilots.ncols()
    }

    pub fn pilot(&self, t: usize) -> CVec {
        self.pilots.column(t).into_owned()
    }
}

/// Round-robin pilot assignment with scaled DFT pilot sequences.
pub fn assign_pilots(ues: usize, tau_p: usize) -> PilotPlan {
    let assignment: Vec<usize> = (0..ues).map(|k| k % tau_p).collect();
    let co_pilot = assignment
        .iter()
        .map(|&t| (0..ues).filter(|&j| assignment[j] == t).collect())
        .collect();
    let pilots = CMat::from_fn(tau_p, tau_p, |n, t| {
        let phase = -2.0 * std::f64::consts::PI * (n * t) as f64 / tau_p as f64;
        Complex64::from_polar(1.0, phase)
    });
    PilotPlan { assignment, co_pilot, pilots }
}

/// Received pilot signals `Y_l = Σ_j √η_j g_jl ψ_{t_j}ᵀ + N_l`, one `N × τ_p`
/// matrix per AP.
pub fn pilot_observation<R: Rng + ?Sized>(
    channels: &[CMat],
    plan: &PilotPlan,
    eta: &[f64],
    sigma2: f64,
    rng: &mut R,
) -> Vec<CMat> {
    let tau_p = plan.tau_p();
    let noise_std = sigma2.sqrt();
    channels
        .iter()
        .map(|g| {
            let n = g.nrows();
            let mut y = CMat::from_fn(n, tau_p, |_, _| complex_normal(rng) * noise_std);
            for (j, &t) in plan.assignment.iter().enumerate() {
                let psi_t = plan.pilots.column(t).transpose();
                y += (g.column(j) * psi_t).scale(eta[j].sqrt());
            }
            y
        })
        .collect()
}

/// Per-AP channel estimates with their error statistics.
#[derive(Debug, Clone)]
pub struct ChannelEstimate {
    /// Per AP, `N × K`; column `k` is `ĝ_kl`.
    pub g_hat: Vec<CMat>,
    /// `error_cov[l][k] = C_kl`.
    pub error_cov: Vec<Vec<CMat>>,
    /// `psi[l][t]`: Gram matrix `Ψ_tl` of the despread pilot `t` at AP `l`.
    /// Empty for perfect-CSI estimates.
    pub psi: Vec<Vec<CMat>>,
}

impl ChannelEstimate {
    /// The genie estimate `ĝ = g`, `C = 0`.
    pub fn perfect(channels: &[CMat]) -> Self {
        let error_cov = channels
            .iter()
            .map(|g| vec![CMat::zeros(g.nrows(), g.nrows()); g.ncols()])
            .collect();
        Self { g_hat: channels.to_vec(), error_cov, psi: Vec::new() }
    }

    /// Rescales estimates and error covariances for data symbols sent with
    /// power `rho`.
    pub fn scaled(&self, rho: f64) -> Self {
        let s = rho.sqrt();
        Self {
            g_hat: self.g_hat.iter().map(|g| g.scale(s)).collect(),
            error_cov: self
                .error_cov
                .iter()
                .map(|cs| cs.iter().map(|c| c.scale(rho)).collect())
                .collect(),
            psi: self.psi.clone(),
        }
    }
}

/// MMSE estimate from the pilot observations.
///
/// With `y_p = Y_l ψ_{t_k}^*` and `Ψ_tl = Σ_{i∈ϑ_k} η_i τ_p Ω_il + σ² I`,
/// `ĝ_kl = √η_k Ω_kl Ψ_tl⁻¹ y_p` and `C_kl = Ω_kl − η_k τ_p Ω_kl Ψ_tl⁻¹ Ω_kl`.
pub fn mmse_estimate(
    observations: &[CMat],
    plan: &PilotPlan,
    omega: &[Vec<CMat>],
    eta: &[f64],
    sigma2: f64,
) -> Result<ChannelEstimate> {
    let tau_p = plan.tau_p();
    let ues = plan.assignment.len();
    let mut g_hat = Vec::with_capacity(observations.len());
    let mut error_cov = Vec::with_capacity(observations.len());
    let mut psi_all = Vec::with_capacity(observations.len());

    for (l, y) in observations.iter().enumerate() {
        let n = y.nrows();
        let om = &omega[l];
        // Ψ and its inverse only depend on the pilot index.
        let mut psi = vec![CMat::zeros(n, n); tau_p];
        let mut psi_inv: Vec<Option<CMat>> = vec![None; tau_p];
        for t in 0..tau_p {
            let users: Vec<usize> = (0..ues).filter(|&i| plan.assignment[i] == t).collect();
            if users.is_empty() {
                continue;
            }
            let mut m = CMat::identity(n, n).scale(sigma2);
            for &i in &users {
                m += om[i].scale(eta[i] * tau_p as f64);
            }
            let what = format!("channel estimation (Ψ at AP {l}, pilot {t})");
            psi_inv[t] = Some(hpd_inverse(&m, &what)?);
            psi[t] = m;
        }

        let mut gl = CMat::zeros(n, ues);
        let mut cl = Vec::with_capacity(ues);
        for k in 0..ues {
            let t = plan.assignment[k];
            let inv = psi_inv[t].as_ref().expect("pilot in use");
            let despread = y * plan.pilots.column(t).map(|c| c.conj());
            let om_inv = &om[k] * inv;
            gl.set_column(k, &(&om_inv * despread).scale(eta[k].sqrt()));
            let c = &om[k] - (&om_inv * &om[k]).scale(eta[k] * tau_p as f64);
            cl.push(hermitian_part(&c));
        }
        g_hat.push(gl);
        error_cov.push(cl);
        psi_all.push(psi);
    }
    Ok(ChannelEstimate { g_hat, error_cov, psi: psi_all })
}
