//! Reproducing kernels of the coefficient space: the defining series, a
//! pre-transformation intermediate form, the terminating closed form, and
//! the classical limit kernel `e^{z wbar} L_m(|z-w|^2)`.

use num_complex::Complex64;

use crate::cstates::{coeff_phi, PhaseSpacePoint};
use crate::error::{QcsError, Result};
use crate::qcore::{qpochhammer_finite, qpochhammer_infinite, QDeformation, SeriesValue, Truncation};
use crate::qpoly::laguerre0;
use crate::qseries::phi32_terminating;

fn check_domain(z: Complex64, m: u32, qd: &QDeformation) -> Result<()> {
    PhaseSpacePoint::new(z, m, *qd).map(|_| ())
}

/// Kernel by its defining series `sum_j Phi_j(z) conj(Phi_j(w))`, truncated
/// under the measured geometric tail bound (ratio `rho_z rho_w < 1`).
pub fn kernel_qm_series(
    z: Complex64,
    w: Complex64,
    m: u32,
    qd: &QDeformation,
    trunc: Truncation,
) -> Result<SeriesValue> {
    check_domain(z, m, qd)?;
    check_domain(w, m, qd)?;
    let pz = PhaseSpacePoint::new_unchecked(z, m, *qd);
    let pw = PhaseSpacePoint::new_unchecked(w, m, *qd);
    let rho = (pz.rho() * pw.rho()).max(1e-3);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut growth = 0.0f64;
    let mut j = 0u32;
    loop {
        let term = coeff_phi(j, &pz) * coeff_phi(j, &pw).conj();
        sum += term;
        let scaled = term.norm() / rho.powi(j as i32);
        growth = growth.max(scaled);
        let tail = growth * rho.powi(j as i32 + 1) / (1.0 - rho);
        if j >= m + 4 && tail < trunc.tol {
            return Ok(SeriesValue { value: sum, abs_error_estimate: tail, terms_used: j as usize + 1 });
        }
        j += 1;
        if j as usize >= trunc.max_terms {
            return Err(QcsError::TruncationFailure { tail, tol: trunc.tol, terms: j as usize });
        }
    }
}

/// Closed form: prefactor times the terminating (m+1)-term 3phi2
///
/// `K(z,w) = (q^{1-m}(1-q) z zbar; q)_m / (q^m (q^{-m}(1-q) z wbar; q)_inf)
///   * sum_{k<=m} ((q^{-m}, z/w, q zbar/wbar; q)_k / ((q^{1-m}(1-q) z zbar, q; q)_k))
///     (q(1-q) w wbar)^k / (q;q)_k`.
///
/// The 3phi2 parameters are singular at `w = 0` although the kernel itself is
/// finite, so tiny `|w|` falls back to the series.
///
/// The anchor label `z` must lie in `C_{q,m}`; in the second slot the closed
/// form is a finite sum times a convergent product, and evaluating it beyond
/// the disk is the analytic continuation that integrals over the full
/// measure support require (the outermost measure nodes lie outside
/// `C_{q,m}` once `m >= 1`).
pub fn kernel_qm_closed(z: Complex64, w: Complex64, m: u32, qd: &QDeformation) -> Result<Complex64> {
    check_domain(z, m, qd)?;
    if w.norm() < 1e-8 * z.norm().max(1.0) {
        return Ok(kernel_qm_series(z, w, m, qd, Truncation { tol: 1e-14, max_terms: 100_000 })?.value);
    }
    let q = qd.q();
    let lam_z = (1.0 - q) * z.norm_sqr();
    let pref = qpochhammer_finite(Complex64::new(q.powi(1 - m as i32) * lam_z, 0.0), q, m)
        / (q.powi(m as i32)
            * qpochhammer_infinite(q.powi(-(m as i32)) * (1.0 - q) * z * w.conj(), q, Truncation::default())?
                .value);
    let phi = phi32_terminating(
        m,
        z / w,
        q * z.conj() / w.conj(),
        Complex64::new(q, 0.0),
        Complex64::new(q.powi(1 - m as i32) * lam_z, 0.0),
        q,
        Complex64::new(q * (1.0 - q) * w.norm_sqr(), 0.0),
    )?;
    Ok(pref * phi)
}

/// Intermediate form (before the final series transformation):
///
/// `K(z,w) = (q^{1-m} a; q)_m (q w/z; q)_m / (q^m (q^{-m} l; q)_inf (q;q)_m)
///   * 3phi2(q^{-m}, q^{-m} l, z/w; q^{1-m} a, q^{-m} z/w; q, q)`
///
/// with `a = (1-q)|z|^2`, `l = (1-q) z wbar`. Exists to validate the
/// transformation chain numerically; requires `z, w != 0`, and continues
/// analytically in the second slot like [`kernel_qm_closed`].
pub fn kernel_qm_intermediate(
    z: Complex64,
    w: Complex64,
    m: u32,
    qd: &QDeformation,
) -> Result<Complex64> {
    check_domain(z, m, qd)?;
    if z == Complex64::new(0.0, 0.0) || w == Complex64::new(0.0, 0.0) {
        return Err(QcsError::InvalidWallParameter("intermediate kernel form requires z, w != 0".into()));
    }
    let q = qd.q();
    let alpha = (1.0 - q) * z.norm_sqr();
    let lam = (1.0 - q) * z * w.conj();
    let qm = q.powi(-(m as i32));
    let pref = qpochhammer_finite(Complex64::new(q.powi(1 - m as i32) * alpha, 0.0), q, m)
        * qpochhammer_finite(q * w / z, q, m)
        / (q.powi(m as i32)
            * qpochhammer_infinite(qm * lam, q, Truncation::default())?.value
            * qpochhammer_finite(Complex64::new(q, 0.0), q, m));
    let phi = phi32_terminating(
        m,
        qm * lam,
        z / w,
        Complex64::new(q.powi(1 - m as i32) * alpha, 0.0),
        qm * z / w,
        q,
        Complex64::new(q, 0.0),
    )?;
    Ok(pref * phi)
}

/// Classical kernel `K_m(z,w) = e^{z wbar} L_m(|z-w|^2)`.
pub fn kernel_classical(z: Complex64, w: Complex64, m: u32) -> Complex64 {
    (z * w.conj()).exp() * laguerre0(m, Complex64::new((z - w).norm_sqr(), 0.0))
}
