//! Monte Carlo engine: per-trial IDD chains, SNR sweeps and BER tables.

mod noise;
mod sweep;
mod trial;

pub use noise::{compute_noise_power, realized_snr};
pub use sweep::{BerCell, BerTable, CSV_HEADER};
pub use trial::{TrialReport, TrialSetup};

use rayon::prelude::*;

use crate::apsel::SelectionMode;
use crate::detect::{Constellation, DetectorKind};
use crate::error::{Error, Result};
use crate::ldpc::{build_parity_check, ParityCheck};
use crate::refine::Strategy;
use crate::rng::{split_seed, Stream};
use crate::sysmodel::SystemConfig;

/// Error count for one (detector, strategy, IDD iteration) in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub snr_db: f64,
    pub mode: SelectionMode,
    pub detector: DetectorKind,
    pub strategy: Strategy,
    /// 1-based outer iteration.
    pub idd_iter: usize,
    /// Message-bit errors summed over UEs. For the standard strategy each
    /// UE contributes the mean over its serving APs, so this may be
    /// fractional.
    pub bit_errors: f64,
    /// `K · (C_leng − M)`.
    pub bits_total: u64,
    /// Mean |LLR| of the frames that were decoded, averaged over UEs.
    pub mean_abs_llr: f64,
    /// Decodes that ended with a zero syndrome.
    pub converged: usize,
    pub decodes: usize,
}

impl TrialResult {
    pub fn ber(&self) -> f64 {
        self.bit_errors / self.bits_total as f64
    }
}

/// A configured simulator: scenario, code and the detector/strategy
/// selection to evaluate.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SystemConfig,
    code: ParityCheck,
    constellation: Constellation,
    detectors: Vec<DetectorKind>,
    strategies: Vec<Strategy>,
}

impl Simulator {
    pub fn new(config: SystemConfig) -> Result<Self> {
        config.validate()?;
        let code = build_parity_check(config.codeword_len, config.parity_bits, config.code_seed)?;
        if code.k() != config.message_len() {
            return Err(Error::Construction(format!(
                "code carries {} message bits, expected {}",
                code.k(),
                config.message_len()
            )));
        }
        Ok(Self {
            config,
            code,
            constellation: Constellation::qpsk(),
            detectors: DetectorKind::ALL.to_vec(),
            strategies: Strategy::ALL.to_vec(),
        })
    }

    /// Restricts the detectors evaluated per trial.
    pub fn with_detectors(mut self, detectors: &[DetectorKind]) -> Self {
        let mut d = detectors.to_vec();
        d.sort();
        d.dedup();
        self.detectors = d;
        self
    }

    /// Restricts the CPU strategies evaluated per trial.
    pub fn with_strategies(mut self, strategies: &[Strategy]) -> Self {
        let mut s = strategies.to_vec();
        s.sort();
        s.dedup();
        self.strategies = s;
        self
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn code(&self) -> &ParityCheck {
        &self.code
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn detectors(&self) -> &[DetectorKind] {
        &self.detectors
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    /// Seed of trial `index`, independent of the SNR point so every SNR
    /// sees the same channel realizations.
    pub fn trial_seed(&self, index: u64) -> u64 {
        split_seed(self.config.seed, Stream::Trial, index)
    }

    /// One trial; deterministic in `(config, snr_db, trial_seed)`.
    pub fn run_trial(&self, snr_db: f64, trial_seed: u64) -> Result<Vec<TrialResult>> {
        let setup = TrialSetup::generate(self, snr_db, trial_seed)?;
        self.evaluate(&setup, snr_db)
    }

    /// One trial plus a description of its scenario.
    pub fn trial_report(&self, snr_db: f64, trial_seed: u64) -> Result<TrialReport> {
        let setup = TrialSetup::generate(self, snr_db, trial_seed)?;
        let results = self.evaluate(&setup, snr_db)?;
        Ok(TrialReport::new(self, &setup, snr_db, trial_seed, results))
    }

    /// Runs trials `0..count` at one SNR in parallel. The outer vector is in
    /// trial order.
    pub fn run_trials(&self, snr_db: f64, count: usize) -> Result<Vec<Vec<TrialResult>>> {
        (0..count as u64)
            .into_par_iter()
            .map(|i| {
                self.run_trial(snr_db, self.trial_seed(i))
                    .map_err(|e| Error::Trial { trial: i, snr_db, source: Box::new(e) })
            })
            .collect()
    }

    /// Full BER sweep over the configured SNR grid.
    pub fn sweep(&self) -> Result<BerTable> {
        let mut table = BerTable::default();
        for &snr in &self.config.snr_grid_db {
            log::info!("SNR {snr} dB: {} trials", self.config.trials);
            let trials = self.run_trials(snr, self.config.trials)?;
            table.absorb(&trials);
        }
        Ok(table)
    }
}

/// Convenience wrapper building a [`Simulator`] for a single trial.
pub fn run_trial(config: &SystemConfig, snr_db: f64, trial_seed: u64) -> Result<Vec<TrialResult>> {
    Simulator::new(config.clone())?.run_trial(snr_db, trial_seed)
}
