//! Small dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One draw from CN(0, 1).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_normal_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| complex_normal(rng))
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let mut ev: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues slightly below zero (relative to the largest magnitude) are
/// treated as rounding noise and clipped; anything more negative is rejected.
pub fn psd_sqrt(m: &CMat) -> Result<CMat> {
    let n = m.nrows();
    if n == 0 {
        return Ok(m.clone());
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = 1e-10 * scale.max(f64::MIN_POSITIVE);
    let mut root = CMat::zeros(n, n);
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < -tol {
            return Err(Error::IllConditioned(format!(
                "matrix square root of non-PSD input (eigenvalue {lambda:e})"
            )));
        }
        let s = lambda.max(0.0).sqrt();
        if s == 0.0 {
            continue;
        }
        let u = eig.eigenvectors.column(i);
        root += (&u * u.adjoint()).scale(s);
    }
    Ok(root)
}

/// Inverse of a Hermitian positive-definite matrix via Cholesky.
pub fn hpd_inverse(m: &CMat, what: &str) -> Result<CMat> {
    hermitian_part(m)
        .cholesky()
        .map(|c| c.inverse())
        .ok_or_else(|| Error::IllConditioned(what.to_string()))
}

/// Solves `m x = b` for Hermitian positive-definite `m`.
pub fn hpd_solve(m: CMat, b: &CVec, what: &str) -> Result<CVec> {
    m.cholesky()
        .map(|c| c.solve(b))
        .ok_or_else(|| Error::IllConditioned(what.to_string()))
}

/// `‖a − b‖_F / ‖b‖_F`.
pub fn frobenius_rel(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm() / b.norm()
}

/// Real trace of a (Hermitian) matrix.
pub fn trace_re(m: &CMat) -> f64 {
    m.trace().re
}

/// Quadratic form `xᴴ M x`, real part.
pub fn quad_form(m: &CMat, x: &CVec) -> f64 {
    x.dotc(&(m * x)).re
}
