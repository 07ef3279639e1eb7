//! Network geometry, large-scale fading, spatial correlation and small-scale
//! channel realizations.
//!
//! Per-link quantities are stored AP-major: `omega[l][k]` is the correlation
//! matrix between UE `k` and AP `l`, and `channels[l]` is the `N × K` matrix
//! whose `k`-th column is `g_kl`.

mod config;

pub use config::SystemConfig;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::linalg::{complex_normal_vec, psd_sqrt, CMat};
use crate::rng::{substream, Stream};

/// Shadow-fading standard deviation (dB).
pub const SHADOW_STD_DB: f64 = 4.0;

/// Planar positions of APs and UEs.
#[derive(Debug, Clone, PartialEq)]
pub struct Positions {
    pub aps: Vec<[f64; 2]>,
    pub ues: Vec<[f64; 2]>,
    pub ap_height: f64,
}

impl Positions {
    /// 3-D distance between UE `k` and AP `l`.
    pub fn distance(&self, k: usize, l: usize) -> f64 {
        let [ux, uy] = self.ues[k];
        let [ax, ay] = self.aps[l];
        ((ux - ax).powi(2) + (uy - ay).powi(2) + self.ap_height.powi(2)).sqrt()
    }
}

/// Drops `L` APs and `K` UEs independently and uniformly in the square.
pub fn drop_geometry<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> Positions {
    let side = config.area_side;
    let point = |rng: &mut R| [rng.random::<f64>() * side, rng.random::<f64>() * side];
    let aps = (0..config.aps).map(|_| point(rng)).collect();
    let ues = (0..config.ues).map(|_| point(rng)).collect();
    Positions { aps, ues, ap_height: config.ap_height }
}

/// Urban-microcell pathloss in dB for a distance in meters (no shadowing).
pub fn pathloss_db(distance_m: f64) -> f64 {
    -30.5 - 36.7 * distance_m.log10()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Large-scale fading coefficients (`K × L`, linear scale) with i.i.d.
/// log-normal shadowing.
pub fn large_scale_fading<R: Rng + ?Sized>(positions: &Positions, rng: &mut R) -> DMatrix<f64> {
    let shadow = Normal::new(0.0, SHADOW_STD_DB).expect("valid shadowing std");
    let (k, l) = (positions.ues.len(), positions.aps.len());
    let mut beta = DMatrix::zeros(k, l);
    for ki in 0..k {
        for li in 0..l {
            let db = pathloss_db(positions.distance(ki, li)) + shadow.sample(rng);
            beta[(ki, li)] = db_to_linear(db);
        }
    }
    beta
}

/// Antenna correlation structure for `Ω_kl`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorrelationModel {
    /// `Ω = β I_N`.
    Uncorrelated,
    /// `[Ω]_{a,b} = β r^{|a−b|}`.
    Exponential(f64),
}

impl CorrelationModel {
    pub fn from_factor(r: f64) -> Result<Self> {
        if r == 0.0 {
            Ok(Self::Uncorrelated)
        } else if (0.0..1.0).contains(&r) {
            Ok(Self::Exponential(r))
        } else {
            Err(Error::InvalidArgument(format!("correlation factor {r} outside [0, 1)")))
        }
    }

    /// Unit-trace-per-antenna correlation matrix `R` (so `Ω = β R`).
    pub fn matrix(&self, n: usize) -> Result<CMat> {
        match *self {
            Self::Uncorrelated => Ok(CMat::identity(n, n)),
            Self::Exponential(r) => {
                if !(0.0..1.0).contains(&r) {
                    return Err(Error::InvalidArgument(format!(
                        "correlation factor {r} outside [0, 1)"
                    )));
                }
                Ok(CMat::from_fn(n, n, |a, b| Complex64::new(r.powi(a.abs_diff(b) as i32), 0.0)))
            }
        }
    }
}

/// Spatial correlation matrices `omega[l][k] = β_kl R`.
pub fn spatial_correlation(
    beta: &DMatrix<f64>,
    antennas: usize,
    model: CorrelationModel,
) -> Result<Vec<Vec<CMat>>> {
    if beta.iter().any(|b| !(*b >= 0.0)) {
        return Err(Error::InvalidArgument("large-scale coefficients must be non-negative".into()));
    }
    let base = model.matrix(antennas)?;
    Ok((0..beta.ncols())
        .map(|l| (0..beta.nrows()).map(|k| base.scale(beta[(k, l)])).collect())
        .collect())
}

/// Draws `g_kl = Ω_kl^{1/2} z` for every link; returns one `N × K` matrix per AP.
pub fn realize_channel<R: Rng + ?Sized>(omega: &[Vec<CMat>], rng: &mut R) -> Result<Vec<CMat>> {
    omega
        .iter()
        .map(|per_ue| {
            let n = per_ue.first().map_or(0, |m| m.nrows());
            let mut g = CMat::zeros(n, per_ue.len());
            for (k, om) in per_ue.iter().enumerate() {
                let root = psd_sqrt(om)?;
                let z = complex_normal_vec(rng, n);
                g.set_column(k, &(root * z));
            }
            Ok(g)
        })
        .collect()
}

/// Large-scale and small-scale description of one channel realization.
#[derive(Debug, Clone)]
pub struct ChannelState {
    pub positions: Positions,
    /// `K × L`, linear scale.
    pub beta: DMatrix<f64>,
    /// `omega[l][k]`, `N × N`.
    pub omega: Vec<Vec<CMat>>,
    /// Per AP, `N × K` true channel matrix.
    pub channels: Vec<CMat>,
}

impl ChannelState {
    /// Builds a full scenario from the geometry, shadowing and small-scale
    /// substreams of `trial_seed`.
    pub fn generate(config: &SystemConfig, trial_seed: u64) -> Result<Self> {
        let positions = drop_geometry(config, &mut substream(trial_seed, Stream::Geometry, 0));
        let beta = large_scale_fading(&positions, &mut substream(trial_seed, Stream::Shadowing, 0));
        let model = CorrelationModel::from_factor(config.correlation)?;
        let omega = spatial_correlation(&beta, config.antennas, model)?;
        let channels = realize_channel(&omega, &mut substream(trial_seed, Stream::SmallScale, 0))?;
        Ok(Self { positions, beta, omega, channels })
    }

    pub fn aps(&self) -> usize {
        self.channels.len()
    }

    pub fn ues(&self) -> usize {
        self.beta.nrows()
    }
}
