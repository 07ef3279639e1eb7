use std::io::Write;

use super::TrialResult;
use crate::apsel::SelectionMode;
use crate::detect::DetectorKind;
use crate::error::Result;
use crate::refine::Strategy;

pub const CSV_HEADER: [&str; 8] =
    ["snr_db", "mode", "detector", "strategy", "idd_iter", "bit_errors", "bits_total", "ber"];

/// Aggregate over all trials of one (SNR, detector, strategy, iteration).
#[derive(Debug, Clone, PartialEq)]
pub struct BerCell {
    pub snr_db: f64,
    pub mode: SelectionMode,
    pub detector: DetectorKind,
    pub strategy: Strategy,
    pub idd_iter: usize,
    pub bit_errors: f64,
    pub bits_total: u64,
    pub trials: usize,
    sum_ber: f64,
    sum_ber_sq: f64,
}

impl BerCell {
    pub fn ber(&self) -> f64 {
        self.bit_errors / self.bits_total as f64
    }

    /// Standard error of the BER estimate, from the spread of per-trial
    /// error rates.
    pub fn std_error(&self) -> f64 {
        let n = self.trials as f64;
        if self.trials < 2 {
            return f64::INFINITY;
        }
        let mean = self.sum_ber / n;
        let var = (self.sum_ber_sq - n * mean * mean).max(0.0) / (n - 1.0);
        (var / n).sqrt()
    }

    fn key(&self) -> (u64, DetectorKind, Strategy, usize) {
        (self.snr_db.to_bits(), self.detector, self.strategy, self.idd_iter)
    }
}

/// BER results in deterministic row order: SNR (grid order), detector,
/// strategy, iteration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BerTable {
    cells: Vec<BerCell>,
}

impl BerTable {
    /// Folds per-trial results (outer index = trial) into the table,
    /// in trial order.
    pub fn absorb(&mut self, trials: &[Vec<TrialResult>]) {
        for results in trials {
            for r in results {
                let key = (r.snr_db.to_bits(), r.detector, r.strategy, r.idd_iter);
                let cell = match self.cells.iter_mut().position(|c| c.key() == key) {
                    Some(i) => &mut self.cells[i],
                    None => {
                        self.cells.push(BerCell {
                            snr_db: r.snr_db,
                            mode: r.mode,
                            detector: r.detector,
                            strategy: r.strategy,
                            idd_iter: r.idd_iter,
                            bit_errors: 0.0,
                            bits_total: 0,
                            trials: 0,
                            sum_ber: 0.0,
                            sum_ber_sq: 0.0,
                        });
                        self.cells.last_mut().unwrap()
                    }
                };
                cell.bit_errors += r.bit_errors;
                cell.bits_total += r.bits_total;
                cell.trials += 1;
                cell.sum_ber += r.ber();
                cell.sum_ber_sq += r.ber() * r.ber();
            }
        }
    }

    pub fn from_trials(trials: &[Vec<TrialResult>]) -> Self {
        let mut t = Self::default();
        t.absorb(trials);
        t
    }

    pub fn cells(&self) -> &[BerCell] {
        &self.cells
    }

    pub fn cell(&self, snr_db: f64, detector: DetectorKind, strategy: Strategy, idd_iter: usize) -> Option<&BerCell> {
        self.cells.iter().find(|c| c.key() == (snr_db.to_bits(), detector, strategy, idd_iter))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for c in &self.cells {
            w.write_record([
                c.snr_db.to_string(),
                c.mode.to_string(),
                c.detector.to_string(),
                c.strategy.to_string(),
                c.idd_iter.to_string(),
                c.bit_errors.to_string(),
                c.bits_total.to_string(),
                format!("{:.6e}", c.ber()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }
}
