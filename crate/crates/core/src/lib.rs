//! Link-level simulation of iterative detection and decoding in the uplink
//! of a cell-free massive MIMO network.
//!
//! Each AP estimates its channels from pilots, detects the UEs it serves
//! with a local soft filter (matched filter, linear MMSE or MMSE with
//! parallel interference cancellation), and exchanges extrinsic LLRs with a
//! local LDPC decoder. The per-AP LLR streams then go to a central unit
//! which decodes them per AP, keeps only the most reliable one, or adds
//! them up.
//!
//! ```no_run
//! use cfidd::{Simulator, SystemConfig};
//!
//! let config = SystemConfig { trials: 100, snr_grid_db: vec![10.0, 20.0], ..Default::default() };
//! let table = Simulator::new(config)?.sweep()?;
//! print!("{}", table.to_csv_string());
//! # Ok::<(), cfidd::Error>(())
//! ```

pub mod apsel;
pub mod chanest;
pub mod detect;
pub mod error;
pub mod harness;
pub mod ldpc;
pub mod linalg;
pub mod refine;
pub mod rng;
pub mod selftest;
pub mod sysmodel;

pub use apsel::{select_aps, SelectionMap, SelectionMode};
pub use detect::{Constellation, DetectorKind};
pub use error::{Error, Result};
pub use harness::{run_trial, BerTable, Simulator, TrialResult};
pub use ldpc::{build_parity_check, LlrFrame, ParityCheck};
pub use refine::Strategy;
pub use sysmodel::SystemConfig;
