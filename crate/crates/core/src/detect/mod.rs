//! Soft symbol statistics, local receive filters and LLR demapping.

mod constellation;
mod demap;
mod filters;
mod flops;
mod soft;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use constellation::{level, Constellation};
pub use demap::demap_llr;
pub use filters::{
    gaussian_params, linear_mmse_detect, linear_mmse_filters, mmse_pic_detect, mmse_pic_filter,
    rmf_detect, rmf_filter, rmf_variance_normalized, DetectorOutput, GaussianParams, LocalChannel,
    LocalDetector, SIGMA2_FLOOR,
};
pub use flops::flop_count;
pub use soft::{soft_symbol, symbol_probabilities, SoftSymbolStats};

use crate::error::Error;

/// The local detectors available at each AP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorKind {
    /// Receive matched filter.
    Rmf,
    /// Linear MMSE.
    Mmse,
    /// MMSE with parallel soft interference cancellation.
    MmsePic,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 3] = [DetectorKind::Rmf, DetectorKind::Mmse, DetectorKind::MmsePic];

    /// Whether the filter output changes with the a-priori information.
    pub fn uses_priors(self) -> bool {
        matches!(self, DetectorKind::MmsePic)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DetectorKind::Rmf => "rmf",
            DetectorKind::Mmse => "mmse",
            DetectorKind::MmsePic => "mmse-pic",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rmf" => Ok(DetectorKind::Rmf),
            "mmse" => Ok(DetectorKind::Mmse),
            "mmse-pic" | "pic" => Ok(DetectorKind::MmsePic),
            other => Err(Error::InvalidArgument(format!("unknown detector {other:?}"))),
        }
    }
}
