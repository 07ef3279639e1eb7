//! Fast invariant checks used by the `selftest` CLI subcommand.

use std::fmt;

use rand::SeedableRng;

use crate::detect::{flop_count, Constellation, DetectorKind, LocalChannel, LocalDetector, SoftSymbolStats};
use crate::harness::{BerTable, Simulator};
use crate::ldpc::{build_parity_check, BoxPlusDecoder};
use crate::linalg::{complex_normal, complex_normal_vec, CMat};
use crate::rng::SimRng;
use crate::sysmodel::SystemConfig;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

type Check = fn() -> Result<String, String>;

const CHECKS: [(&str, Check); 6] = [
    ("flop table", flop_table),
    ("zero-prior MMSE-PIC equals linear MMSE", zero_prior_reduction),
    ("LDPC encoder and decoder", ldpc_roundtrip),
    ("noiseless perfect-CSI trial is error free", noiseless_trial),
    ("sweep determinism", sweep_determinism),
    ("configuration round trip", config_round_trip),
];

/// Runs every check and returns the outcomes in a fixed order.
pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| match check() {
            Ok(detail) => CheckOutcome { name, passed: true, detail },
            Err(detail) => CheckOutcome { name, passed: false, detail },
        })
        .collect()
}

fn flop_table() -> Result<String, String> {
    let got: Vec<u64> = DetectorKind::ALL.iter().map(|&k| flop_count(k, 4, 4, 4, 2)).collect();
    if got == [1152, 2064, 3408] {
        Ok(format!("{got:?}"))
    } else {
        Err(format!("got {got:?}, expected [1152, 2064, 3408]"))
    }
}

fn zero_prior_reduction() -> Result<String, String> {
    let mut rng = SimRng::seed_from_u64(7);
    let c = Constellation::qpsk();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let g = CMat::from_fn(4, 4, |_, _| complex_normal(&mut rng));
        let cov: Vec<CMat> = (0..4).map(|_| CMat::identity(4, 4).scale(0.05)).collect();
        let ch = LocalChannel { g_hat: &g, error_cov: &cov, sigma2: 0.3, es: c.es() };
        let y = complex_normal_vec(&mut rng, 4);
        let stats = SoftSymbolStats::uninformed(4, c.es());
        let mut det = LocalDetector::new(ch, c.es());
        for k in 0..4 {
            let a = det.detect(DetectorKind::Mmse, &y, k, &stats).map_err(|e| e.to_string())?;
            let b = det.detect(DetectorKind::MmsePic, &y, k, &stats).map_err(|e| e.to_string())?;
            worst = worst.max((a.s_tilde - b.s_tilde).norm() / a.s_tilde.norm());
        }
    }
    if worst < 1e-10 {
        Ok(format!("max relative deviation {worst:.2e}"))
    } else {
        Err(format!("max relative deviation {worst:.2e}"))
    }
}

fn ldpc_roundtrip() -> Result<String, String> {
    let pc = build_parity_check(256, 128, 1).map_err(|e| e.to_string())?;
    if !pc.is_full_rank() {
        return Err("parity-check matrix is rank deficient".into());
    }
    let msg: Vec<u8> = (0..pc.k()).map(|i| ((i * 7 + 3) % 5 % 2) as u8).collect();
    let word = pc.encode(&msg).map_err(|e| e.to_string())?;
    if !pc.is_codeword(&word) {
        return Err("encoder output violates a parity check".into());
    }
    let llr: Vec<f64> = word.iter().map(|&b| if b == 0 { 4.0 } else { -4.0 }).collect();
    let out = BoxPlusDecoder::new(&pc).decode(&llr, 10, None);
    if pc.extract_message(&out.hard_bits) != msg {
        return Err("decoder failed on a clean codeword".into());
    }
    Ok(format!("girth {:?}, converged in {} iteration(s)", pc.girth(), out.iterations))
}

fn small_config() -> SystemConfig {
    SystemConfig { trials: 2, snr_grid_db: vec![10.0], idd_iters: 2, ..Default::default() }
}

fn noiseless_trial() -> Result<String, String> {
    let config = SystemConfig { perfect_csi: true, ..small_config() };
    let sim = Simulator::new(config).map_err(|e| e.to_string())?;
    let results = sim.run_trial(80.0, sim.trial_seed(0)).map_err(|e| e.to_string())?;
    let errors: f64 = results.iter().filter(|r| r.detector != DetectorKind::Rmf).map(|r| r.bit_errors).sum();
    if errors == 0.0 {
        Ok(format!("{} result rows", results.len()))
    } else {
        Err(format!("{errors} bit errors"))
    }
}

fn sweep_determinism() -> Result<String, String> {
    let run = || -> Result<BerTable, String> {
        Simulator::new(small_config()).and_then(|s| s.sweep()).map_err(|e| e.to_string())
    };
    let (a, b) = (run()?.to_csv_string(), run()?.to_csv_string());
    if a == b {
        Ok(format!("{} CSV bytes identical", a.len()))
    } else {
        Err("two sweeps with equal seeds differ".into())
    }
}

fn config_round_trip() -> Result<String, String> {
    let config = SystemConfig::default();
    let back = SystemConfig::from_toml_str(&config.to_toml_string()).map_err(|e| e.to_string())?;
    if back == config {
        Ok("defaults survive TOML serialization".into())
    } else {
        Err("round trip changed the configuration".into())
    }
}
