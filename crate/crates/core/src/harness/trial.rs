//! One Monte Carlo trial: scenario, transmission, local IDD at every AP and
//! CPU-side refinement.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::noise::{compute_noise_power, realized_snr};
use super::{Simulator, TrialResult};
use crate::apsel::{select_aps, SelectionMap};
use crate::chanest::{assign_pilots, mmse_estimate, pilot_observation, ChannelEstimate};
use crate::detect::{demap_llr, soft_symbol, DetectorKind, LocalChannel, LocalDetector, SoftSymbolStats};
use crate::error::Result;
use crate::ldpc::{BoxPlusDecoder, DecodeOutput, FrameSource, LlrFrame};
use crate::linalg::{complex_normal, CMat};
use crate::refine::{censor_index, combine_llrs, LlrBundle, Strategy};
use crate::rng::{substream, Stream};
use crate::sysmodel::{linear_to_db, ChannelState};

/// Everything shared by the detectors within one trial.
#[derive(Debug, Clone)]
pub struct TrialSetup {
    pub state: ChannelState,
    /// Estimates scaled to the data-phase power.
    pub estimate: ChannelEstimate,
    pub selection: SelectionMap,
    pub sigma2: f64,
    /// Message bits per UE.
    pub messages: Vec<Vec<u8>>,
    /// Per AP, `N × T` received data samples.
    pub received: Vec<CMat>,
}

impl TrialSetup {
    pub fn generate(sim: &Simulator, snr_db: f64, trial_seed: u64) -> Result<Self> {
        let cfg = sim.config();
        let state = ChannelState::generate(cfg, trial_seed)?;
        let sigma2 = compute_noise_power(&state.channels, cfg.rho, snr_db)?;

        let estimate = if cfg.perfect_csi {
            ChannelEstimate::perfect(&state.channels)
        } else {
            let plan = assign_pilots(cfg.ues, cfg.tau_p);
            let eta = vec![cfg.eta; cfg.ues];
            let mut rng = substream(trial_seed, Stream::PilotNoise, 0);
            let pilots = pilot_observation(&state.channels, &plan, &eta, sigma2, &mut rng);
            mmse_estimate(&pilots, &plan, &state.omega, &eta, sigma2)?
        }
        .scaled(cfg.rho);

        let selection = select_aps(&state.beta, cfg.beta_th_db, cfg.mode)?;

        let mut rng = substream(trial_seed, Stream::Messages, 0);
        let messages: Vec<Vec<u8>> = (0..cfg.ues)
            .map(|_| (0..sim.code().k()).map(|_| rng.random_range(0..2u8)).collect())
            .collect();
        let symbols: Vec<Vec<Complex64>> = messages
            .iter()
            .map(|m| Ok(sim.constellation().modulate(&sim.code().encode(m)?)))
            .collect::<Result<_>>()?;
        let slots = cfg.symbols_per_frame();
        let s = CMat::from_fn(cfg.ues, slots, |k, t| symbols[k][t]);

        let mut rng = substream(trial_seed, Stream::DataNoise, 0);
        let noise_std = sigma2.sqrt();
        let received = state
            .channels
            .iter()
            .map(|g| {
                let n = CMat::from_fn(g.nrows(), slots, |_, _| complex_normal(&mut rng) * noise_std);
                g.scale(cfg.rho.sqrt()) * &s + n
            })
            .collect();

        Ok(Self { state, estimate, selection, sigma2, messages, received })
    }
}

/// Frames and local decodes for one UE after one IDD iteration.
#[derive(Debug, Clone)]
struct UeIteration {
    frames: Vec<LlrFrame>,
    local: Vec<DecodeOutput>,
}

impl Simulator {
    /// Runs local IDD at every AP for one detector. Returns, per iteration,
    /// the forwarded frames of every UE (serving APs in ascending order).
    fn run_detector(&self, setup: &TrialSetup, kind: DetectorKind) -> Result<Vec<Vec<UeIteration>>> {
        let cfg = self.config();
        let c = self.constellation();
        let (aps, ues) = (cfg.aps, cfg.ues);
        let slots = cfg.symbols_per_frame();
        let mc = cfg.bits_per_symbol;
        let mut decoder = BoxPlusDecoder::new(self.code());

        // priors[l][k]: decoder extrinsic fed back to the detector at AP l.
        let mut priors = vec![vec![vec![0.0; cfg.codeword_len]; ues]; aps];
        let mut out: Vec<Vec<UeIteration>> = Vec::with_capacity(cfg.idd_iters);

        for iter in 0..cfg.idd_iters {
            if iter > 0 && !kind.uses_priors() {
                // Prior-independent filters with a bit-separable demapper
                // reproduce the first iteration exactly.
                out.push(out[0].clone());
                continue;
            }
            let mut per_ue: Vec<UeIteration> =
                (0..ues).map(|_| UeIteration { frames: Vec::new(), local: Vec::new() }).collect();
            for l in 0..aps {
                let served = &setup.selection.served[l];
                if served.is_empty() {
                    continue;
                }
                let ch = LocalChannel {
                    g_hat: &setup.estimate.g_hat[l],
                    error_cov: &setup.estimate.error_cov[l],
                    sigma2: setup.sigma2,
                    es: c.es(),
                };
                let mut det = LocalDetector::new(ch, c.es());
                let mut llrs = vec![vec![0.0; cfg.codeword_len]; ues];
                let mut stats = SoftSymbolStats::uninformed(ues, c.es());
                for t in 0..slots {
                    let bits = t * mc..(t + 1) * mc;
                    if kind.uses_priors() {
                        for i in 0..ues {
                            let (m, v) = soft_symbol(c, &priors[l][i][bits.clone()]);
                            stats.mean[i] = m;
                            stats.var[i] = v;
                        }
                    }
                    let y = setup.received[l].column(t).into_owned();
                    for &k in served {
                        let d = det.detect(kind, &y, k, &stats)?;
                        let ext = demap_llr(d.s_tilde, d.mu, d.sigma2_h, &priors[l][k][bits.clone()], c);
                        llrs[k][bits.clone()].copy_from_slice(&ext);
                    }
                }
                for &k in served {
                    let frame = LlrFrame::new(std::mem::take(&mut llrs[k]), k, FrameSource::Ap(l));
                    let dec = decoder.decode(frame.values(), cfg.dec_iters, None);
                    priors[l][k].copy_from_slice(&dec.extrinsic);
                    per_ue[k].frames.push(frame);
                    per_ue[k].local.push(dec);
                }
            }
            out.push(per_ue);
        }
        Ok(out)
    }

    fn message_errors(&self, hard_bits: &[u8], message: &[u8]) -> usize {
        self.code().extract_message(hard_bits).iter().zip(message).filter(|(a, b)| a != b).count()
    }

    /// Evaluates all configured detectors and strategies on an already
    /// generated setup.
    pub fn evaluate(&self, setup: &TrialSetup, snr_db: f64) -> Result<Vec<TrialResult>> {
        let cfg = self.config();
        let msg_len = self.code().k();
        let mut decoder = BoxPlusDecoder::new(self.code());
        let mut results = Vec::new();
        for &kind in self.detectors() {
            let iterations = self.run_detector(setup, kind)?;
            for (iter, per_ue) in iterations.iter().enumerate() {
                for &strategy in self.strategies() {
                    let mut r = TrialResult {
                        snr_db,
                        mode: cfg.mode,
                        detector: kind,
                        strategy,
                        idd_iter: iter + 1,
                        bit_errors: 0.0,
                        bits_total: (cfg.ues * msg_len) as u64,
                        mean_abs_llr: 0.0,
                        converged: 0,
                        decodes: 0,
                    };
                    for (k, ue) in per_ue.iter().enumerate() {
                        let message = &setup.messages[k];
                        let bundle = LlrBundle::new(ue.frames.clone())?;
                        match strategy {
                            Strategy::Standard => {
                                let total: usize =
                                    ue.local.iter().map(|d| self.message_errors(&d.hard_bits, message)).sum();
                                r.bit_errors += total as f64 / ue.local.len() as f64;
                                r.mean_abs_llr += bundle.frames().iter().map(LlrFrame::mu_abs).sum::<f64>()
                                    / ue.frames.len() as f64;
                                r.converged += ue.local.iter().filter(|d| d.converged).count();
                                r.decodes += ue.local.len();
                            }
                            Strategy::Censoring => {
                                // The CPU decode of the selected frame is the
                                // AP's own local decode of the same input.
                                let idx = censor_index(&bundle);
                                let d = &ue.local[idx];
                                r.bit_errors += self.message_errors(&d.hard_bits, message) as f64;
                                r.mean_abs_llr += bundle.frames()[idx].mu_abs();
                                r.converged += usize::from(d.converged);
                                r.decodes += 1;
                            }
                            Strategy::Combining => {
                                let combined = combine_llrs(&bundle);
                                let d = decoder.decode(combined.values(), cfg.dec_iters, None);
                                r.bit_errors += self.message_errors(&d.hard_bits, message) as f64;
                                r.mean_abs_llr += combined.mu_abs();
                                r.converged += usize::from(d.converged);
                                r.decodes += 1;
                            }
                        }
                    }
                    r.mean_abs_llr /= cfg.ues as f64;
                    results.push(r);
                }
            }
        }
        Ok(results)
    }
}

/// Human-readable dump of one trial for debugging.
#[derive(Debug, Clone)]
pub struct TrialReport {
    pub trial_seed: u64,
    pub snr_db: f64,
    pub sigma2: f64,
    pub beta_db: DMatrix<f64>,
    pub selection: SelectionMap,
    pub realized_snr_db: Vec<f64>,
    pub positions: crate::sysmodel::Positions,
    pub results: Vec<TrialResult>,
}

impl TrialReport {
    pub(super) fn new(sim: &Simulator, setup: &TrialSetup, snr_db: f64, trial_seed: u64, results: Vec<TrialResult>) -> Self {
        Self {
            trial_seed,
            snr_db,
            sigma2: setup.sigma2,
            beta_db: setup.state.beta.map(linear_to_db),
            selection: setup.selection.clone(),
            realized_snr_db: realized_snr(&setup.state.channels, sim.config().rho, setup.sigma2)
                .into_iter()
                .map(linear_to_db)
                .collect(),
            positions: setup.state.positions.clone(),
            results,
        }
    }
}

impl fmt::Display for TrialReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "trial seed {:#018x} at target SNR {} dB", self.trial_seed, self.snr_db)?;
        writeln!(f, "noise power {:e}", self.sigma2)?;
        writeln!(f, "AP positions (m):")?;
        for (l, p) in self.positions.aps.iter().enumerate() {
            writeln!(f, "  AP {l}: ({:.1}, {:.1})  SNR {:.2} dB", p[0], p[1], self.realized_snr_db[l])?;
        }
        writeln!(f, "UE positions (m):")?;
        for (k, p) in self.positions.ues.iter().enumerate() {
            writeln!(f, "  UE {k}: ({:.1}, {:.1})", p[0], p[1])?;
        }
        writeln!(f, "large-scale fading (dB), rows = UEs:")?;
        for k in 0..self.beta_db.nrows() {
            let row: Vec<String> = (0..self.beta_db.ncols()).map(|l| format!("{:8.2}", self.beta_db[(k, l)])).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        writeln!(f, "selection (rows = UEs, columns = APs):")?;
        for line in self.selection.dump().lines() {
            writeln!(f, "  {line}")?;
        }
        writeln!(f, "detector  strategy   iter  errors/bits  mean|LLR|  converged")?;
        for r in &self.results {
            writeln!(
                f,
                "{:<9} {:<10} {:>4}  {:>6}/{:<5} {:>9.3}  {}/{}",
                r.detector.as_str(),
                r.strategy.as_str(),
                r.idd_iter,
                r.bit_errors,
                r.bits_total,
                r.mean_abs_llr,
                r.converged,
                r.decodes
            )?;
        }
        Ok(())
    }
}
