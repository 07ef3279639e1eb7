//! Local receive filters at one AP and the Gaussian model of their output.
//!
//! The filter output is modelled as `s̃ = μ s_k + ς` with `ς` Gaussian of
//! variance `σ²_h`. Data symbols have second moment `E{|s_m|²} = Es` for
//! every UE, which is what the channel-error term is weighted with.

use std::sync::atomic::{AtomicBool, Ordering};

use num_complex::Complex64;

use super::soft::SoftSymbolStats;
use super::DetectorKind;
use crate::error::Result;
use crate::linalg::{hpd_solve, quad_form, CMat, CVec, ZERO};

/// Relative floor for the effective noise variance: `σ²_h ≥ 1e-12 · |μ|² Es`.
pub const SIGMA2_FLOOR: f64 = 1e-12;

static FLOOR_WARNED: AtomicBool = AtomicBool::new(false);

/// Channel knowledge available at one AP.
#[derive(Debug, Clone, Copy)]
pub struct LocalChannel<'a> {
    /// `N × K` channel estimates.
    pub g_hat: &'a CMat,
    /// Error covariance `C_ml` of every UE.
    pub error_cov: &'a [CMat],
    pub sigma2: f64,
    pub es: f64,
}

impl<'a> LocalChannel<'a> {
    pub fn antennas(&self) -> usize {
        self.g_hat.nrows()
    }

    pub fn ues(&self) -> usize {
        self.g_hat.ncols()
    }

    pub fn column(&self, k: usize) -> CVec {
        self.g_hat.column(k).into_owned()
    }

    /// `Σ_m Es C_ml + σ² I_N`.
    pub fn error_plus_noise(&self) -> CMat {
        let n = self.antennas();
        let mut m = CMat::identity(n, n).scale(self.sigma2);
        for c in self.error_cov {
            m += c.scale(self.es);
        }
        m
    }
}

/// Mean gain and residual variance of a filter output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub mu: Complex64,
    pub sigma2: f64,
}

/// One detected symbol with its Gaussian model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorOutput {
    pub s_tilde: Complex64,
    pub mu: Complex64,
    pub sigma2_h: f64,
    pub kind: DetectorKind,
}

/// Matched filter `w = D ĝ_k`.
pub fn rmf_filter(ch: &LocalChannel, k: usize, served: bool) -> CVec {
    if served {
        ch.column(k)
    } else {
        CVec::zeros(ch.antennas())
    }
}

/// `s̃ = (D ĝ_k)ᴴ D y`. No inversion involved.
pub fn rmf_detect(y: &CVec, g_hat_k: &CVec, served: bool) -> Complex64 {
    if served {
        g_hat_k.dotc(y)
    } else {
        ZERO
    }
}

/// MMSE filter after parallel interference cancellation:
///
/// `w = ρ_k [ρ_k ĝ_k ĝ_kᴴ + Σ_{i≠k} σ²_i ĝ_i ĝ_iᴴ + Σ_m Es C_m + σ² I]⁻¹ ĝ_k`
///
/// where `σ²_i` are the prior symbol variances. Returns the zero vector
/// when the AP does not serve UE `k`.
pub fn mmse_pic_filter(
    ch: &LocalChannel,
    k: usize,
    stats: &SoftSymbolStats,
    served: bool,
    rho: f64,
) -> Result<CVec> {
    if !served {
        return Ok(CVec::zeros(ch.antennas()));
    }
    let mut a = ch.error_plus_noise();
    for i in 0..ch.ues() {
        let weight = if i == k { rho } else { stats.var[i] };
        let g = ch.g_hat.column(i);
        a += (&g * g.adjoint()).scale(weight);
    }
    Ok(hpd_solve(a, &ch.column(k), "MMSE-PIC filter matrix")?.scale(rho))
}

/// `s̃ = wᴴ D (y − Σ_{i≠k} ĝ_i s̄_i)`.
pub fn mmse_pic_detect(
    y: &CVec,
    g_hat: &CMat,
    mean: &[Complex64],
    w: &CVec,
    k: usize,
    served: bool,
) -> Complex64 {
    if !served {
        return ZERO;
    }
    let mut r = y.clone();
    for (i, s_bar) in mean.iter().enumerate() {
        if i != k {
            r -= g_hat.column(i) * *s_bar;
        }
    }
    w.dotc(&r)
}

/// Linear MMSE filters for all UEs at once,
/// `W = ρ (Es Ĝ Ĝᴴ + Σ_m Es C_m + σ² I)⁻¹ Ĝ`.
///
/// Computed independently of the PIC path; the two coincide under zero
/// priors when `ρ = Es`.
pub fn linear_mmse_filters(ch: &LocalChannel, rho: f64) -> Result<CMat> {
    let r = ch.g_hat * ch.g_hat.adjoint() * Complex64::from(ch.es) + ch.error_plus_noise();
    let chol = r
        .cholesky()
        .ok_or_else(|| crate::error::Error::IllConditioned("linear MMSE covariance".into()))?;
    Ok(chol.solve(ch.g_hat).scale(rho))
}

/// `s̃ = wᴴ y`.
pub fn linear_mmse_detect(y: &CVec, w: &CVec) -> Complex64 {
    w.dotc(y)
}

/// Gaussian model of the filter output: `μ = wᴴ D ĝ_k` and
///
/// `σ²_h = wᴴ D (Σ_{i≠k} v_i ĝ_i ĝ_iᴴ + Σ_m Es C_m + σ² I) Dᴴ w`
///
/// with `v_i` the prior variance for MMSE-PIC and `Es` for the filters
/// that do not cancel interference. For the matched filter this gives
/// `μ = ‖D ĝ_k‖² = Nθ`.
pub fn gaussian_params(
    kind: DetectorKind,
    w: &CVec,
    k: usize,
    ch: &LocalChannel,
    stats: &SoftSymbolStats,
) -> GaussianParams {
    let mu = w.dotc(&ch.g_hat.column(k));
    let mut sigma2 = quad_form(&ch.error_plus_noise(), w);
    for i in (0..ch.ues()).filter(|&i| i != k) {
        sigma2 += interference_weight(kind, stats, i, ch.es) * w.dotc(&ch.g_hat.column(i)).norm_sqr();
    }
    GaussianParams { mu, sigma2: floor_variance(sigma2, mu, ch.es) }
}

/// Closed-form matched-filter variance for a full network with
/// unit-variance channel estimates:
/// `N (Es (K − 1) + Σ_m Es tr(C_m) + σ²)`.
pub fn rmf_variance_normalized(ch: &LocalChannel) -> f64 {
    let n = ch.antennas() as f64;
    let k = ch.ues() as f64;
    let err: f64 = ch.error_cov.iter().map(|c| ch.es * c.trace().re).sum();
    n * (ch.es * (k - 1.0) + err + ch.sigma2)
}

fn interference_weight(kind: DetectorKind, stats: &SoftSymbolStats, i: usize, es: f64) -> f64 {
    match kind {
        DetectorKind::MmsePic => stats.var[i],
        DetectorKind::Rmf | DetectorKind::Mmse => es,
    }
}

fn floor_variance(sigma2: f64, mu: Complex64, es: f64) -> f64 {
    let floor = SIGMA2_FLOOR * es * mu.norm_sqr().max(f64::MIN_POSITIVE);
    if sigma2 >= floor {
        return sigma2;
    }
    if !FLOOR_WARNED.swap(true, Ordering::Relaxed) {
        log::warn!("effective noise variance {sigma2:e} below numerical floor, clamped to {floor:e}");
    }
    floor
}

/// Cached per-AP detector. Filters that do not depend on the priors are
/// computed once per UE; the MMSE-PIC filter is recomputed for every
/// symbol.
#[derive(Debug, Clone)]
pub struct LocalDetector<'a> {
    ch: LocalChannel<'a>,
    rho: f64,
    cols: Vec<CVec>,
    outer: Vec<CMat>,
    base: CMat,
    fixed: Vec<Option<(CVec, GaussianParams)>>,
    fixed_kind: Option<DetectorKind>,
}

impl<'a> LocalDetector<'a> {
    pub fn new(ch: LocalChannel<'a>, rho: f64) -> Self {
        let cols: Vec<CVec> = (0..ch.ues()).map(|k| ch.column(k)).collect();
        let outer = cols.iter().map(|g| g * g.adjoint()).collect();
        let base = ch.error_plus_noise();
        Self { ch, rho, cols, outer, base, fixed: vec![None; ch.ues()], fixed_kind: None }
    }

    fn residual_variance(&self, w: &CVec, k: usize, weight: impl Fn(usize) -> f64) -> f64 {
        let mut s = quad_form(&self.base, w);
        for (i, g) in self.cols.iter().enumerate() {
            if i != k {
                s += weight(i) * w.dotc(g).norm_sqr();
            }
        }
        s
    }

    fn fixed_filter(&mut self, kind: DetectorKind, k: usize) -> Result<(CVec, GaussianParams)> {
        if self.fixed_kind != Some(kind) {
            self.fixed.iter_mut().for_each(|f| *f = None);
            self.fixed_kind = Some(kind);
        }
        if let Some(f) = &self.fixed[k] {
            return Ok(f.clone());
        }
        let w = match kind {
            DetectorKind::Rmf => self.cols[k].clone(),
            DetectorKind::Mmse => {
                let mut a = self.base.clone();
                for o in &self.outer {
                    a += o.scale(self.ch.es);
                }
                hpd_solve(a, &self.cols[k], "linear MMSE covariance")?.scale(self.rho)
            }
            DetectorKind::MmsePic => unreachable!("MMSE-PIC depends on the priors"),
        };
        let mu = w.dotc(&self.cols[k]);
        let es = self.ch.es;
        let sigma2 = floor_variance(self.residual_variance(&w, k, |_| es), mu, es);
        let entry = (w, GaussianParams { mu, sigma2 });
        self.fixed[k] = Some(entry.clone());
        Ok(entry)
    }

    /// Detects UE `k` from the received vector `y` given the current prior
    /// statistics of all UEs.
    pub fn detect(
        &mut self,
        kind: DetectorKind,
        y: &CVec,
        k: usize,
        stats: &SoftSymbolStats,
    ) -> Result<DetectorOutput> {
        match kind {
            DetectorKind::Rmf | DetectorKind::Mmse => {
                let (w, p) = self.fixed_filter(kind, k)?;
                Ok(DetectorOutput { s_tilde: w.dotc(y), mu: p.mu, sigma2_h: p.sigma2, kind })
            }
            DetectorKind::MmsePic => {
                let mut a = self.base.clone();
                for (i, o) in self.outer.iter().enumerate() {
                    let weight = if i == k { self.rho } else { stats.var[i] };
                    a += o.scale(weight);
                }
                let w = hpd_solve(a, &self.cols[k], "MMSE-PIC filter matrix")?.scale(self.rho);
                let mut r = y.clone();
                for (i, g) in self.cols.iter().enumerate() {
                    if i != k {
                        r -= g * stats.mean[i];
                    }
                }
                let mu = w.dotc(&self.cols[k]);
                let sigma2 = self.residual_variance(&w, k, |i| stats.var[i]);
                Ok(DetectorOutput {
                    s_tilde: w.dotc(&r),
                    mu,
                    sigma2_h: floor_variance(sigma2, mu, self.ch.es),
                    kind,
                })
            }
        }
    }
}
