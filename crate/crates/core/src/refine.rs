//! CPU-side processing of the LLR streams that the APs forward for one UE.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ldpc::{mean_abs, BoxPlusDecoder, FrameSource, LlrFrame, ParityCheck};

/// How the CPU turns per-AP LLR frames into decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Decode every AP's frame separately and average the error rates.
    Standard,
    /// Decode only the frame with the largest mean |LLR|.
    Censoring,
    /// Decode the element-wise sum of all frames.
    Combining,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Standard, Strategy::Censoring, Strategy::Combining];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Standard => "standard",
            Strategy::Censoring => "censoring",
            Strategy::Combining => "combining",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Strategy::Standard),
            "censoring" => Ok(Strategy::Censoring),
            "combining" => Ok(Strategy::Combining),
            other => Err(Error::InvalidArgument(format!("unknown strategy {other:?}"))),
        }
    }
}

/// All frames forwarded for one UE, in serving-AP order.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrBundle {
    ue: usize,
    frames: Vec<LlrFrame>,
}

impl LlrBundle {
    pub fn new(frames: Vec<LlrFrame>) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::InvalidArgument("LLR bundle needs at least one frame".into()))?;
        let (ue, len) = (first.ue, first.len());
        if frames.iter().any(|f| f.ue != ue || f.len() != len) {
            return Err(Error::InvalidArgument("frames in a bundle must share UE and length".into()));
        }
        Ok(Self { ue, frames })
    }

    pub fn ue(&self) -> usize {
        self.ue
    }

    pub fn frames(&self) -> &[LlrFrame] {
        &self.frames
    }
}

/// Decodes each frame on its own. Returns one hard-decision codeword per
/// frame, in bundle order.
pub fn refine_standard(bundle: &LlrBundle, pc: &ParityCheck, max_iter: usize) -> Vec<Vec<u8>> {
    let mut dec = BoxPlusDecoder::new(pc);
    bundle.frames.iter().map(|f| dec.decode(f.values(), max_iter, None).hard_bits).collect()
}

/// Position of the frame with the largest mean |LLR|; the earliest wins ties.
pub fn censor_index(bundle: &LlrBundle) -> usize {
    bundle
        .frames
        .iter()
        .enumerate()
        .fold(0, |best, (i, f)| if f.mu_abs() > bundle.frames[best].mu_abs() { i } else { best })
}

/// The single most reliable frame.
pub fn censor_llrs(bundle: &LlrBundle) -> LlrFrame {
    bundle.frames[censor_index(bundle)].clone()
}

/// Element-wise sum of all frames, clamped.
pub fn combine_llrs(bundle: &LlrBundle) -> LlrFrame {
    let mut sum = vec![0.0; bundle.frames[0].len()];
    for f in &bundle.frames {
        sum.iter_mut().zip(f.values()).for_each(|(s, v)| *s += v);
    }
    LlrFrame::new(sum, bundle.ue, FrameSource::Cpu)
}

/// Sample mean and variance of the combined LLRs, and the mean |LLR| of
/// every input frame for comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CombiningStats {
    pub mean: f64,
    pub variance: f64,
    pub mu_abs_combined: f64,
    pub mu_abs_frames: Vec<f64>,
}

pub fn combining_stats(bundle: &LlrBundle) -> CombiningStats {
    let combined = combine_llrs(bundle);
    let v = combined.values();
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let variance = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / v.len() as f64;
    CombiningStats {
        mean,
        variance,
        mu_abs_combined: mean_abs(v),
        mu_abs_frames: bundle.frames.iter().map(LlrFrame::mu_abs).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(values: &[f64], ap: usize) -> LlrFrame {
        LlrFrame::new(values.to_vec(), 0, FrameSource::Ap(ap))
    }

    #[test]
    fn combining_sums() {
        let b = LlrBundle::new(vec![frame(&[1.0, -0.5], 0), frame(&[2.0, 0.5], 1)]).unwrap();
        let c = combine_llrs(&b);
        assert_eq!(c.values(), &[3.0, 0.0]);
        assert_eq!(c.mu_abs(), 1.5);
        assert_eq!(c.source, FrameSource::Cpu);
    }

    #[test]
    fn single_frame_combination_is_identity() {
        let b = LlrBundle::new(vec![frame(&[1.0, -7.0, 0.25], 2)]).unwrap();
        assert_eq!(combine_llrs(&b).values(), b.frames()[0].values());
    }

    #[test]
    fn opposite_saturated_beliefs_cancel() {
        let b = LlrBundle::new(vec![frame(&[40.0], 0), frame(&[-40.0], 1)]).unwrap();
        assert_eq!(combine_llrs(&b).values(), &[0.0]);
    }

    #[test]
    fn combination_is_clamped() {
        let b = LlrBundle::new(vec![frame(&[30.0], 0), frame(&[30.0], 1)]).unwrap();
        assert_eq!(combine_llrs(&b).values(), &[40.0]);
    }

    #[test]
    fn censoring_picks_largest_mean() {
        let b = LlrBundle::new(vec![frame(&[3.2, -3.2], 0), frame(&[1.1, 1.1], 1)]).unwrap();
        assert_eq!(censor_llrs(&b).source, FrameSource::Ap(0));
        let b = LlrBundle::new(vec![frame(&[1.1], 3), frame(&[-3.2], 1)]).unwrap();
        assert_eq!(censor_llrs(&b).source, FrameSource::Ap(1));
    }

    #[test]
    fn censoring_ties_keep_first() {
        let b = LlrBundle::new(vec![frame(&[2.0], 4), frame(&[2.0], 1)]).unwrap();
        assert_eq!(censor_index(&b), 0);
    }

    #[test]
    fn bundle_validation() {
        assert!(LlrBundle::new(vec![]).is_err());
        let other_ue = LlrFrame::new(vec![1.0], 1, FrameSource::Ap(0));
        assert!(LlrBundle::new(vec![frame(&[1.0], 0), other_ue]).is_err());
        assert!(LlrBundle::new(vec![frame(&[1.0], 0), frame(&[1.0, 2.0], 1)]).is_err());
    }

    #[test]
    fn combining_stats_reports_spread() {
        let b = LlrBundle::new(vec![frame(&[1.0, 3.0], 0), frame(&[1.0, 3.0], 1)]).unwrap();
        let s = combining_stats(&b);
        assert_eq!(s.mean, 4.0);
        assert_eq!(s.variance, 4.0);
        assert_eq!(s.mu_abs_frames, vec![2.0, 2.0]);
    }
}
