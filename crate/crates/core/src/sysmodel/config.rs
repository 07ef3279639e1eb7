//! Scenario configuration and its TOML file format.
//!
//! The file groups keys into sections. Key names follow the usual symbols of
//! the system model (`L`, `N`, `K`, `tau_p`, ...). Unknown keys are rejected.
//!
//! ```toml
//! [network]
//! L = 4
//! N = 4
//! K = 4
//! area_side = 1000.0
//! ap_height = 10.0
//!
//! [pilots]
//! tau_p = 10
//! eta_k = 0.1
//!
//! [code]
//! C_leng = 256
//! M = 128
//! M_c = 2
//!
//! [receiver]
//! rho = 1.0
//! beta_th = -40.0
//! idd_iters = 3
//! dec_iters = 10
//!
//! [simulation]
//! snr_grid = [0.0, 10.0, 20.0]
//! trials = 10000
//! seed = 1
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::apsel::SelectionMode;
use crate::error::{Error, Result};

/// All scenario constants for one simulation campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Number of access points, `L`.
    pub aps: usize,
    /// Receive antennas per AP, `N`.
    pub antennas: usize,
    /// Number of single-antenna UEs, `K`.
    pub ues: usize,
    /// Pilot length in symbols.
    pub tau_p: usize,
    /// Codeword length in bits.
    pub codeword_len: usize,
    /// Parity-check bits.
    pub parity_bits: usize,
    /// Bits per modulation symbol.
    pub bits_per_symbol: usize,
    /// Per-UE pilot transmit power (W).
    pub eta: f64,
    /// Data symbol power normalization (W).
    pub rho: f64,
    /// Non-master AP threshold (dB, relative to the master AP).
    pub beta_th_db: f64,
    /// Side of the square deployment area (m).
    pub area_side: f64,
    /// AP elevation above the UE plane (m).
    pub ap_height: f64,
    /// Exponential antenna correlation factor; 0 gives uncorrelated antennas.
    pub correlation: f64,
    pub snr_grid_db: Vec<f64>,
    pub idd_iters: usize,
    pub dec_iters: usize,
    pub trials: usize,
    pub seed: u64,
    /// Seed for the parity-check construction.
    pub code_seed: u64,
    pub mode: SelectionMode,
    /// Replace channel estimates by the true channels (zero error covariance).
    pub perfect_csi: bool,
    /// Uplink payload length; informational only.
    pub tau_u: Option<usize>,
    /// Coherence block length; informational only.
    pub tau_c: Option<usize>,
    /// Listed threshold with no operational role; informational only.
    pub d_th: Option<f64>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            aps: 4,
            antennas: 4,
            ues: 4,
            tau_p: 10,
            codeword_len: 256,
            parity_bits: 128,
            bits_per_symbol: 2,
            eta: 0.1,
            rho: 1.0,
            beta_th_db: -40.0,
            area_side: 1000.0,
            ap_height: 10.0,
            correlation: 0.0,
            snr_grid_db: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            idd_iters: 3,
            dec_iters: 10,
            trials: 10_000,
            seed: 1,
            code_seed: 1,
            mode: SelectionMode::Full,
            perfect_csi: false,
            tau_u: Some(190),
            tau_c: Some(200),
            d_th: Some(0.38),
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.aps < 1 || self.antennas < 1 || self.ues < 1 || self.tau_p < 1 {
            return bad("L, N, K and tau_p must all be at least 1".into());
        }
        if self.codeword_len != 2 * self.parity_bits || self.parity_bits == 0 {
            return bad(format!(
                "code must have rate 1/2 (C_leng = 2 M), got C_leng = {}, M = {}",
                self.codeword_len, self.parity_bits
            ));
        }
        if self.bits_per_symbol != 2 {
            return bad(format!("only QPSK (M_c = 2) is supported, got M_c = {}", self.bits_per_symbol));
        }
        if self.idd_iters < 1 || self.dec_iters < 1 || self.trials < 1 {
            return bad("idd_iters, dec_iters and trials must all be at least 1".into());
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) || !(self.rho > 0.0 && self.rho.is_finite()) {
            return bad("eta_k and rho must be positive".into());
        }
        if !(self.beta_th_db <= 0.0) {
            return bad(format!("beta_th must be <= 0 dB, got {}", self.beta_th_db));
        }
        if !(self.area_side > 0.0 && self.area_side.is_finite()) {
            return bad("area_side must be positive".into());
        }
        if !(self.ap_height > 0.0 && self.ap_height.is_finite()) {
            return bad("ap_height must be positive".into());
        }
        if !(0.0..1.0).contains(&self.correlation) {
            return bad(format!("correlation must lie in [0, 1), got {}", self.correlation));
        }
        if self.snr_grid_db.is_empty() || self.snr_grid_db.iter().any(|s| !s.is_finite()) {
            return bad("snr_grid must be a non-empty list of finite values".into());
        }
        Ok(())
    }

    /// Message bits per codeword.
    pub fn message_len(&self) -> usize {
        self.codeword_len - self.parity_bits
    }

    /// Modulation symbols per codeword.
    pub fn symbols_per_frame(&self) -> usize {
        self.codeword_len / self.bits_per_symbol
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(s)?;
        let cfg = file.into_config();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Config(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(&ConfigFile::from_config(self)).expect("config serializes")
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    network: NetworkSection,
    pilots: PilotSection,
    code: CodeSection,
    receiver: ReceiverSection,
    simulation: SimulationSection,
    #[serde(default, skip_serializing_if = "MetadataSection::is_empty")]
    metadata: MetadataSection,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkSection {
    #[serde(rename = "L")]
    aps: usize,
    #[serde(rename = "N")]
    antennas: usize,
    #[serde(rename = "K")]
    ues: usize,
    area_side: f64,
    ap_height: f64,
    #[serde(default)]
    correlation: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PilotSection {
    tau_p: usize,
    eta_k: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeSection {
    #[serde(rename = "C_leng")]
    codeword_len: usize,
    #[serde(rename = "M")]
    parity_bits: usize,
    #[serde(rename = "M_c")]
    bits_per_symbol: usize,
    #[serde(default = "default_code_seed")]
    code_seed: u64,
}

fn default_code_seed() -> u64 {
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReceiverSection {
    rho: f64,
    beta_th: f64,
    idd_iters: usize,
    dec_iters: usize,
    #[serde(default)]
    mode: SelectionMode,
    #[serde(default)]
    perfect_csi: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulationSection {
    snr_grid: Vec<f64>,
    trials: usize,
    seed: u64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetadataSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    tau_u: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau_c: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_th: Option<f64>,
}

impl MetadataSection {
    fn is_empty(&self) -> bool {
        self.tau_u.is_none() && self.tau_c.is_none() && self.d_th.is_none()
    }
}

impl ConfigFile {
    fn into_config(self) -> SystemConfig {
        SystemConfig {
            aps: self.network.aps,
            antennas: self.network.antennas,
            ues: self.network.ues,
            tau_p: self.pilots.tau_p,
            codeword_len: self.code.codeword_len,
            parity_bits: self.code.parity_bits,
            bits_per_symbol: self.code.bits_per_symbol,
            eta: self.pilots.eta_k,
            rho: self.receiver.rho,
            beta_th_db: self.receiver.beta_th,
            area_side: self.network.area_side,
            ap_height: self.network.ap_height,
            correlation: self.network.correlation,
            snr_grid_db: self.simulation.snr_grid,
            idd_iters: self.receiver.idd_iters,
            dec_iters: self.receiver.dec_iters,
            trials: self.simulation.trials,
            seed: self.simulation.seed,
            code_seed: self.code.code_seed,
            mode: self.receiver.mode,
            perfect_csi: self.receiver.perfect_csi,
            tau_u: self.metadata.tau_u,
            tau_c: self.metadata.tau_c,
            d_th: self.metadata.d_th,
        }
    }

    fn from_config(c: &SystemConfig) -> Self {
        ConfigFile {
            network: NetworkSection {
                aps: c.aps,
                antennas: c.antennas,
                ues: c.ues,
                area_side: c.area_side,
                ap_height: c.ap_height,
                correlation: c.correlation,
            },
            pilots: PilotSection { tau_p: c.tau_p, eta_k: c.eta },
            code: CodeSection {
                codeword_len: c.codeword_len,
                parity_bits: c.parity_bits,
                bits_per_symbol: c.bits_per_symbol,
                code_seed: c.code_seed,
            },
            receiver: ReceiverSection {
                rho: c.rho,
                beta_th: c.beta_th_db,
                idd_iters: c.idd_iters,
                dec_iters: c.dec_iters,
                mode: c.mode,
                perfect_csi: c.perfect_csi,
            },
            simulation: SimulationSection {
                snr_grid: c.snr_grid_db.clone(),
                trials: c.trials,
                seed: c.seed,
            },
            metadata: MetadataSection { tau_u: c.tau_u, tau_c: c.tau_c, d_th: c.d_th },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_toml() {
        let cfg = SystemConfig::default();
        let text = cfg.to_toml_string();
        assert_eq!(SystemConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let mut text = SystemConfig::default().to_toml_string();
        text = text.replace("[pilots]", "[pilots]\nbogus = 3");
        assert!(matches!(SystemConfig::from_toml_str(&text), Err(Error::ConfigParse(_))));
    }

    #[test]
    fn unknown_section_is_rejected() {
        let text = SystemConfig::default().to_toml_string() + "\n[extra]\nx = 1\n";
        assert!(SystemConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn rate_must_be_half() {
        let cfg = SystemConfig { parity_bits: 100, ..Default::default() };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn correlation_range_checked() {
        let cfg = SystemConfig { correlation: 1.0, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = SystemConfig { correlation: -0.1, ..Default::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn positive_threshold_rejected() {
        let cfg = SystemConfig { beta_th_db: 3.0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
