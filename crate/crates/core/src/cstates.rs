//! Generalized q-coherent states: the coefficient system `Phi_j^{q,m}`, the
//! normalization factor, the state wavefunction in series and closed form,
//! the discrete radial measure, and inner products over the label domain
//! `C_{q,m} = { z : (1-q)|z|^2 < q^m }`.
//!
//! The state labeled by `z` is the superposition
//! `Psi_z = N^{-1/2} sum_j conj(Phi_j(z)) phi_j`, with `Phi_j` holomorphic-type
//! (`Phi_j^{q,0}(z) = z^j / sqrt([j]_q!)`). The closed form carries the
//! conjugate of `z` in its phase factors accordingly.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QcsError, Result};
use crate::oscillator::{pairwise_sum, rs_eigenfunction};
use crate::qcore::{
    ln_qpochhammer_positive, qpochhammer_finite, qpochhammer_infinite, QDeformation, SeriesValue,
    Truncation,
};
use crate::qpoly::{al_salam_chihara, qhermite2d, wall};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A label point `z` in (or near) `C_{q,m}` together with the order `m` and
/// the deformation.
#[derive(Clone, Copy, Debug)]
pub struct PhaseSpacePoint {
    z: Complex64,
    m: u32,
    qd: QDeformation,
}

impl PhaseSpacePoint {
    /// Checked constructor: requires `(1-q)|z|^2 < q^m`.
    pub fn new(z: Complex64, m: u32, qd: QDeformation) -> Result<Self> {
        let p = PhaseSpacePoint { z, m, qd };
        p.check_domain()?;
        Ok(p)
    }

    /// Unchecked constructor for coefficient studies outside the domain.
    /// State construction (`cs_wavefunction_*`) still enforces membership.
    pub fn new_unchecked(z: Complex64, m: u32, qd: QDeformation) -> Self {
        PhaseSpacePoint { z, m, qd }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn qd(&self) -> &QDeformation {
        &self.qd
    }

    /// Geometric decay ratio `rho = sqrt((1-q)|z|^2 / q^m)`; `rho < 1` inside
    /// the domain.
    pub fn rho(&self) -> f64 {
        let q = self.qd.q();
        ((1.0 - q) * self.z.norm_sqr() / q.powi(self.m as i32)).sqrt()
    }

    pub fn check_domain(&self) -> Result<()> {
        let q = self.qd.q();
        let lhs = (1.0 - q) * self.z.norm_sqr();
        let rhs = q.powi(self.m as i32);
        if lhs < rhs {
            Ok(())
        } else {
            Err(QcsError::OutsideDomain { lhs, rhs })
        }
    }
}

/// Radial magnitude of `Phi_j^{q,m}` at `|z| = r` (the coefficient is this
/// value times the phase `e^{-i(m-j) arg z}`).
///
/// For `j >= m` the decaying factor is grouped as `rho^{j-m}` to avoid
/// spurious overflow of `q^{-mj/2}` at large `j`.
pub fn coeff_phi_radial(j: u32, m: u32, r: f64, qd: &QDeformation) -> f64 {
    let q = qd.q();
    let qq = Complex64::new(q, 0.0);
    let lam = (1.0 - q) * r * r;
    let pq = |n: u32| qpochhammer_finite(qq, q, n).re;
    if j >= m {
        let rho = (lam / q.powi(m as i32)).sqrt();
        let p = wall(m, Complex64::new(lam, 0.0), Complex64::new(q.powi((j - m) as i32), 0.0), q)
            .expect("Wall parameter q^{j-m} is pole-free")
            .re;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sign * q.powi((m * m.saturating_sub(1) / 2) as i32) * q.powf(-(m as f64) * m as f64 / 2.0)
            * rho.powi((j - m) as i32)
            * pq(j).sqrt()
            / (pq(j - m) * pq(m).sqrt())
            * p
    } else {
        let d = m - j;
        let p = wall(j, Complex64::new(lam, 0.0), Complex64::new(q.powi(d as i32), 0.0), q)
            .expect("Wall parameter q^{m-j} is pole-free")
            .re;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sign * q.powi((j * j.saturating_sub(1) / 2) as i32)
            * lam.sqrt().powi(d as i32)
            * q.powf(-((m * j) as f64) / 2.0)
            * pq(m)
            / (pq(d) * (pq(m) * pq(j)).sqrt())
            * p
    }
}

/// Coefficient `Phi_j^{q,m}(z)`, defined through Wall polynomials of
/// `(1-q) z zbar` with parameter `q^{|m-j|}`; `arg(0) := 0`.
pub fn coeff_phi(j: u32, p: &PhaseSpacePoint) -> Complex64 {
    let r = p.z.norm();
    let theta = if p.z == Complex64::new(0.0, 0.0) { 0.0 } else { p.z.arg() };
    let radial = coeff_phi_radial(j, p.m, r, &p.qd);
    radial * Complex64::from_polar(1.0, -((p.m as f64) - (j as f64)) * theta)
}

/// `Phi_j^{q,m}` through the 2D q-Hermite route
/// `H_{m,j}(sqrt(1-q) z, sqrt(1-q) zbar | q) / sqrt(q^{mj} (q;q)_j (q;q)_m)`.
///
/// Cross-check path only: it evaluates to the conjugate of [`coeff_phi`]
/// (the comparison suite records the discrepancy between the two routes).
pub fn coeff_phi_via_hermite2d(j: u32, p: &PhaseSpacePoint) -> Complex64 {
    let q = p.qd.q();
    let s = (1.0 - q).sqrt();
    let qq = Complex64::new(q, 0.0);
    let h = qhermite2d(p.m, j, s * p.z, s * p.z.conj(), q);
    h / (q.powi((p.m * j) as i32)
        * qpochhammer_finite(qq, q, j).re
        * qpochhammer_finite(qq, q, p.m).re)
        .sqrt()
}

/// Normalization factor
/// `N_{q,m}(x) = q^{-m} (q^{1-m}(1-q)x; q)_m / (q^{-m}(1-q)x; q)_inf`
/// for `(1-q) x < q^m`; strictly positive there.
pub fn normalization(m: u32, x: f64, qd: &QDeformation) -> Result<f64> {
    let q = qd.q();
    let lam = (1.0 - q) * x;
    if lam >= q.powi(m as i32) {
        return Err(QcsError::OutsideDomain { lhs: lam, rhs: q.powi(m as i32) });
    }
    let num = qpochhammer_finite(Complex64::new(q.powi(1 - m as i32) * lam, 0.0), q, m).re;
    let den = qpochhammer_infinite(
        Complex64::new(q.powi(-(m as i32)) * lam, 0.0),
        q,
        Truncation::default(),
    )?
    .value
    .re;
    Ok(q.powi(-(m as i32)) * num / den)
}

/// Node/weight discretization of the radial measure: nodes
/// `r_l = q^{l/2}/sqrt(1-q)`, weights `w_l = q^l (q^{l+1}; q)_inf`,
/// truncated once the dropped mass falls below `tail_tol`.
#[derive(Clone, Debug)]
pub struct RadialMeasure {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialMeasure {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Build the radial measure with dropped tail mass below `tail_tol`
/// (the tail is bounded by `q^L/(1-q)` since `w_l <= q^l`).
///
/// Weights accumulate in log space so they stay meaningful near `q -> 1`
/// where `(q;q)_inf` underflows a plain double.
pub fn measure(qd: &QDeformation, tail_tol: f64) -> RadialMeasure {
    let q = qd.q();
    let count = ((tail_tol * (1.0 - q)).ln() / q.ln()).ceil().max(1.0) as usize;
    let mut nodes = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    // ln (q^{l+1}; q)_inf built downward from l = count by peeling factors
    let mut ln_tail = ln_qpochhammer_positive(q.powi(count as i32 + 1), q, None, 1e-18)
        .expect("positive factors for q in (0,1)");
    let mut ln_tails = vec![0.0; count + 1];
    ln_tails[count] = ln_tail;
    for l in (0..count).rev() {
        ln_tail += (-q.powi(l as i32 + 1)).ln_1p();
        ln_tails[l] = ln_tail;
    }
    for (l, item) in ln_tails.iter().enumerate().take(count) {
        nodes.push(q.powf(l as f64 / 2.0) / (1.0 - q).sqrt());
        weights.push((l as f64 * q.ln() + item).exp());
    }
    RadialMeasure { nodes, weights }
}

/// Inner product `<F, G>` over `C` against the discrete measure:
/// radial sum over the nodes, angular average by the 2 n_max + 5 point
/// trapezoid (exact for angular frequencies up to n_max and beyond).
pub fn fock_inner(
    f: impl Fn(Complex64) -> Complex64,
    g: impl Fn(Complex64) -> Complex64,
    meas: &RadialMeasure,
    n_max: u32,
) -> Complex64 {
    let t = (2 * n_max + 5) as usize;
    let mut radial_terms = Vec::with_capacity(meas.len());
    for (&r, &w) in meas.nodes.iter().zip(meas.weights.iter()) {
        let mut ang = Vec::with_capacity(t);
        for k in 0..t {
            let theta = 2.0 * PI * k as f64 / t as f64;
            let z = Complex64::from_polar(r, theta);
            ang.push(f(z) * g(z).conj());
        }
        radial_terms.push(w * pairwise_sum(&ang) / t as f64);
    }
    pairwise_sum(&radial_terms)
}

/// Wavefunction of the state `Psi_z` by direct superposition:
/// `N^{-1/2} sum_j conj(Phi_j(z)) phi_j(xi)`, truncated when the measured
/// geometric tail bound drops below `trunc.tol`.
pub fn cs_wavefunction_series(p: &PhaseSpacePoint, xi: f64, trunc: Truncation) -> Result<SeriesValue> {
    p.check_domain()?;
    let n = normalization(p.m, p.z.norm_sqr(), &p.qd)?;
    // floor keeps the tail bookkeeping finite for z at or near the origin
    let rho = p.rho().max(1e-3);
    let x = Complex64::new(xi, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut growth = 0.0f64; // measured bound constant: max |term_j| / rho^j
    let mut j = 0u32;
    loop {
        let term = coeff_phi(j, p).conj() * rs_eigenfunction(j, x, &p.qd);
        sum += term;
        let scaled = term.norm() / rho.powi(j as i32);
        growth = growth.max(scaled);
        let tail = growth * rho.powi(j as i32 + 1) / (1.0 - rho);
        if j >= p.m + 4 && tail < trunc.tol {
            return Ok(SeriesValue {
                value: sum / n.sqrt(),
                abs_error_estimate: tail / n.sqrt(),
                terms_used: j as usize + 1,
            });
        }
        j += 1;
        if j as usize >= trunc.max_terms {
            return Err(QcsError::TruncationFailure { tail, tol: trunc.tol, terms: j as usize });
        }
    }
}

/// Unnormalized closed-form kernel `W_z(xi) = sqrt(N) Psi_z(xi)`:
///
/// `(-1)^m (sqrt(pi) (q;q)_m)^{-1/2} q^{-m/4} e^{i m kappa xi} e^{-xi^2/2}
///  / ((y; q)_inf (w_xi; q)_inf) * Q_m(u; alpha, beta | q)`
///
/// with `y = i zbar sqrt((1-q)/q^{m-1})`,
/// `w_xi = -i zbar sqrt((1-q)/q^m) e^{2 i kappa xi}`, `u = i q^{1/4} e^{-i kappa xi}`,
/// `alpha = zbar q^{-1/4} sqrt((1-q)/q^{m-1}) e^{i kappa xi}` and
/// `beta = z q^{1/4} sqrt((1-q)/q^{m-1}) e^{-i kappa xi}`. The conjugated
/// label in the phase factors is what makes this the closed form of the
/// series with conjugated coefficients.
///
/// Unlike the normalized state, this kernel also evaluates outside `C_{q,m}`
/// (the infinite products converge for any argument), where it is the
/// analytic continuation used by integrals over the full measure support.
pub fn cs_kernel_unnormalized(p: &PhaseSpacePoint, xi: f64) -> Result<Complex64> {
    let q = p.qd.q();
    let kappa = p.qd.kappa();
    let m = p.m;
    let zb = p.z.conj();
    let s1 = ((1.0 - q) / q.powi(m as i32 - 1)).sqrt();
    let s0 = ((1.0 - q) / q.powi(m as i32)).sqrt();
    let y = I * zb * s1;
    let w = -I * zb * s0 * (2.0 * I * kappa * xi).exp();
    let trunc = Truncation::default();
    let poch_y = qpochhammer_infinite(y, q, trunc)?.value;
    let poch_w = qpochhammer_infinite(w, q, trunc)?.value;
    let u = I * q.powf(0.25) * (-I * kappa * xi).exp();
    let alpha = zb * q.powf(-0.25) * s1 * (I * kappa * xi).exp();
    let beta = p.z * q.powf(0.25) * s1 * (-I * kappa * xi).exp();
    let qm = al_salam_chihara(m, u, alpha, beta, q)?;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let norm = sign
        / (PI.sqrt() * qpochhammer_finite(Complex64::new(q, 0.0), q, m).re).sqrt();
    Ok(norm * q.powf(-(m as f64) / 4.0)
        * (I * (m as f64) * kappa * xi).exp()
        * (-xi * xi / 2.0).exp()
        / (poch_y * poch_w)
        * qm)
}

/// Closed-form wavefunction of the state `Psi_z` (equals the series route).
pub fn cs_wavefunction_closed(p: &PhaseSpacePoint, xi: f64) -> Result<Complex64> {
    p.check_domain()?;
    let n = normalization(p.m, p.z.norm_sqr(), &p.qd)?;
    Ok(cs_kernel_unnormalized(p, xi)? / n.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::qfactorial;
    use approx::assert_relative_eq;

    fn qd(q: f64) -> QDeformation {
        QDeformation::from_q(q).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn domain_gating() {
        let d = qd(0.5);
        assert!(PhaseSpacePoint::new(c(0.3, 0.2), 0, d).is_ok());
        // (1-q)|z|^2 = 0.5 * 4 = 2 >= q^0 = 1
        assert!(matches!(
            PhaseSpacePoint::new(c(2.0, 0.0), 0, d),
            Err(QcsError::OutsideDomain { .. })
        ));
        let p = PhaseSpacePoint::new_unchecked(c(2.0, 0.0), 0, d);
        assert!(cs_wavefunction_series(&p, 0.3, Truncation::default()).is_err());
    }

    #[test]
    fn coeff_phi_m0_reduction() {
        let d = qd(0.5);
        let z = c(0.4, 0.3);
        let p = PhaseSpacePoint::new(z, 0, d).unwrap();
        for j in 0..8u32 {
            let got = coeff_phi(j, &p);
            let want = z.powu(j) / qfactorial(j, 0.5).sqrt();
            assert!((got - want).norm() < 1e-12 * want.norm().max(1.0), "j={j}");
        }
    }

    #[test]
    fn coeff_phi_at_origin() {
        let d = qd(0.5);
        for m in 0..4u32 {
            let p = PhaseSpacePoint::new(c(0.0, 0.0), m, d).unwrap();
            for j in 0..6u32 {
                let got = coeff_phi(j, &p);
                if j == m {
                    // (-1)^m q^{-m/2}
                    let want = (-1.0f64).powi(m as i32) * 0.5f64.powf(-(m as f64) / 2.0);
                    assert_relative_eq!(got.re, want, max_relative = 1e-13);
                    assert_eq!(got.im, 0.0);
                } else {
                    assert_eq!(got, c(0.0, 0.0), "m={m} j={j}");
                }
            }
        }
    }

    #[test]
    fn normalization_values_and_consistency() {
        let d = qd(0.5);
        // m=0 is the q-exponential
        let x = 0.83;
        let n0 = normalization(0, x, &d).unwrap();
        let eq = crate::qcore::qexp(c(x, 0.0), 0.5, Truncation::default()).unwrap().value.re;
        assert_relative_eq!(n0, eq, max_relative = 1e-12);
        // x = 0 gives q^{-m}
        for m in 0..5u32 {
            assert_relative_eq!(normalization(m, 0.0, &d).unwrap(), 2.0f64.powi(m as i32), max_relative = 1e-14);
        }
        // sum over |Phi_j|^2 reproduces N
        let z = c(0.35, -0.22);
        let m = 2u32;
        let p = PhaseSpacePoint::new(z, m, d).unwrap();
        let mut s = 0.0;
        for j in 0..200u32 {
            s += coeff_phi(j, &p).norm_sqr();
        }
        assert!((s - normalization(m, z.norm_sqr(), &d).unwrap()).abs() < 1e-9);
        // domain violation
        assert!(normalization(1, 1.9, &d).is_err());
    }

    #[test]
    fn hermite2d_route_is_conjugate_of_wall_route() {
        let d = qd(0.45);
        let z = c(0.3, 0.25);
        for m in 0..4u32 {
            let p = PhaseSpacePoint::new_unchecked(z, m, d);
            for j in 0..6u32 {
                let a = coeff_phi(j, &p);
                let b = coeff_phi_via_hermite2d(j, &p);
                assert!(
                    (a - b.conj()).norm() <= 1e-11 * a.norm().max(1.0),
                    "m={m} j={j}: {}",
                    (a - b.conj()).norm()
                );
            }
        }
    }

    #[test]
    fn measure_nodes_and_mass() {
        let d = qd(0.5);
        let meas = measure(&d, 1e-14);
        assert_relative_eq!(meas.nodes[0], 1.0 / 0.5f64.sqrt(), max_relative = 1e-15);
        assert!(meas.nodes.windows(2).all(|w| w[1] < w[0]));
        assert!(meas.weights.iter().all(|&w| w > 0.0));
        assert!((meas.total_mass() - 1.0).abs() < 1e-13, "mass {}", meas.total_mass());
        // mass converges to 1 as the tail tolerance shrinks
        let coarse = measure(&d, 1e-6);
        let fine = measure(&d, 1e-12);
        assert!((1.0 - coarse.total_mass()) > (1.0 - fine.total_mass()));
    }

    #[test]
    fn measure_log_space_survives_near_classical_q() {
        let d = qd(0.999);
        let meas = measure(&d, 1e-10);
        assert!((meas.total_mass() - 1.0).abs() < 1e-9);
        assert!(meas.weights.iter().all(|w| w.is_finite()));
    }

    #[test]
    fn fock_inner_orthonormality_small_grid() {
        let d = qd(0.5);
        let meas = measure(&d, 1e-14);
        for m in [0u32, 2] {
            for j in 0..=4u32 {
                for k in 0..=4u32 {
                    let pz = move |z: Complex64| {
                        coeff_phi(j, &PhaseSpacePoint::new_unchecked(z, m, d))
                    };
                    let pw = move |z: Complex64| {
                        coeff_phi(k, &PhaseSpacePoint::new_unchecked(z, m, d))
                    };
                    let v = fock_inner(pz, pw, &meas, j.max(k) + 1);
                    let target = if j == k { 1.0 } else { 0.0 };
                    assert!(
                        (v - c(target, 0.0)).norm() < 1e-10,
                        "m={m} j={j} k={k}: {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn fock_inner_constant_function_gives_total_mass() {
        let d = qd(0.5);
        let meas = measure(&d, 1e-14);
        let one = |_z: Complex64| c(1.0, 0.0);
        let v = fock_inner(one, one, &meas, 0);
        assert!((v.re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn series_ground_case() {
        // m=0, z=0: only j=0 survives
        let d = qd(0.5);
        let p = PhaseSpacePoint::new(c(0.0, 0.0), 0, d).unwrap();
        let v = cs_wavefunction_series(&p, 0.8, Truncation::default()).unwrap();
        let want = PI.powf(-0.25) * (-0.32f64).exp();
        assert_relative_eq!(v.value.re, want, max_relative = 1e-13);
    }

    #[test]
    fn closed_form_matches_series() {
        let d = qd(0.5);
        for m in 0..=3u32 {
            for (z, xi) in [(c(0.3, 0.2), 0.7), (c(0.1, -0.25), -1.3), (c(0.0, 0.3), 2.1)] {
                let p = match PhaseSpacePoint::new(z, m, d) {
                    Ok(p) => p,
                    Err(_) => continue,
                };
                let s = cs_wavefunction_series(&p, xi, Truncation { tol: 1e-13, max_terms: 5000 }).unwrap();
                let cf = cs_wavefunction_closed(&p, xi).unwrap();
                assert!(
                    (s.value - cf).norm() <= 1e-11 * cf.norm().max(1e-3),
                    "m={m} z={z} xi={xi}: {}",
                    (s.value - cf).norm()
                );
            }
        }
    }

    #[test]
    fn closed_form_m0_specialization() {
        // m=0: e_q(z zbar)^{-1/2} pi^{-1/4} e^{-xi^2/2}
        //      / ((-i zbar sqrt(1-q) e^{2 i k xi}; q)_inf (i zbar sqrt(q(1-q)); q)_inf)
        let d = qd(0.5);
        let q = 0.5f64;
        let z = c(0.4, 0.25);
        let xi = 0.9;
        let p = PhaseSpacePoint::new(z, 0, d).unwrap();
        let got = cs_wavefunction_closed(&p, xi).unwrap();
        let zb = z.conj();
        let tr = Truncation::default();
        let eq = crate::qcore::qexp(c(z.norm_sqr(), 0.0), q, tr).unwrap().value.re;
        let a1 = qpochhammer_infinite(-I * zb * (1.0 - q).sqrt() * (2.0 * I * d.kappa() * xi).exp(), q, tr)
            .unwrap()
            .value;
        let a2 = qpochhammer_infinite(I * zb * (q * (1.0 - q)).sqrt(), q, tr).unwrap().value;
        let want = eq.sqrt().recip() * PI.powf(-0.25) * (-xi * xi / 2.0).exp() / (a1 * a2);
        assert!((got - want).norm() < 1e-13, "{}", (got - want).norm());
    }

    #[test]
    fn closed_form_at_origin_reduces_to_eigenfunction() {
        // z = 0: Psi_0 = (-1)^m phi_m
        let d = qd(0.4);
        for m in 0..=3u32 {
            let p = PhaseSpacePoint::new(c(0.0, 0.0), m, d).unwrap();
            for xi in [0.0, 0.7, -1.9] {
                let got = cs_wavefunction_closed(&p, xi).unwrap();
                let want = (-1.0f64).powi(m as i32) * rs_eigenfunction(m, c(xi, 0.0), &d);
                assert!((got - want).norm() < 1e-12, "m={m} xi={xi}");
            }
        }
    }

    #[test]
    fn state_is_normalized_in_l2() {
        let d = qd(0.5);
        let rule = crate::oscillator::QuadratureRule::build(&d, 10, 4, 1e-11).unwrap();
        for m in [0u32, 2] {
            let p = PhaseSpacePoint::new(c(0.3, -0.2), m, d).unwrap();
            let v = crate::oscillator::integrate_real_line(
                |xi| {
                    let w = cs_wavefunction_closed(&p, xi).unwrap();
                    w * w.conj()
                },
                &rule,
            );
            assert!((v.value.re - 1.0).abs() < 1e-8, "m={m}: {}", v.value.re);
        }
    }
}
