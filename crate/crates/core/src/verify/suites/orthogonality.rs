//! Wall orthogonality on the geometric lattice and orthonormality of the
//! coefficient system against the discrete radial measure.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::cstates::{coeff_phi, fock_inner, measure, PhaseSpacePoint};
use crate::qcore::{qpochhammer_finite, qpochhammer_infinite, QDeformation, Truncation};
use crate::qpoly::wall;
use crate::verify::{CaseResult, SuiteSettings};

const WALL_TOL: f64 = 1e-10;
const COEFF_TOL: f64 = 1e-8;

/// `sum_l (tau q)^l/(q;q)_l P_s(q^l; tau|q) P_n(q^l; tau|q)
///  = delta_{s,n} (tau q)^n (q;q)_n / ((tau q;q)_inf (tau q;q)_n)`
/// for `tau = q^{m-j}`, `m - j = 0..4`, `s, n <= 6`.
pub(crate) fn run_wall(settings: &SuiteSettings) -> Vec<CaseResult> {
    let mut jobs = Vec::new();
    for &q in &settings.q_list {
        for d in 0..=4u32 {
            for s in 0..=6u32 {
                for n in s..=6u32 {
                    jobs.push((q, d, s, n));
                }
            }
        }
    }
    jobs.par_iter()
        .map(|&(q, d, s, n)| {
            let tau = q.powi(d as i32);
            let tq = tau * q;
            // lattice sum, truncated once the dropped tail is below 1e-14
            let mut lhs = 0.0f64;
            let mut weight = 1.0f64; // (tau q)^l / (q;q)_l
            let mut x = 1.0f64; // q^l
            let mut l = 0u32;
            loop {
                let ps = wall(s, Complex64::new(x, 0.0), Complex64::new(tau, 0.0), q).unwrap().re;
                let pn = wall(n, Complex64::new(x, 0.0), Complex64::new(tau, 0.0), q).unwrap().re;
                lhs += weight * ps * pn;
                l += 1;
                x *= q;
                weight *= tq / (1.0 - q.powi(l as i32));
                // P -> 1 as x -> 0, so the remaining mass is ~ geometric
                if weight / (1.0 - tq) < 1e-14 && l > n.max(s) + 2 {
                    break;
                }
            }
            let rhs = if s == n {
                let tr = Truncation::default();
                tq.powi(n as i32) * qpochhammer_finite(Complex64::new(q, 0.0), q, n).re
                    / (qpochhammer_infinite(Complex64::new(tq, 0.0), q, tr).unwrap().value.re
                        * qpochhammer_finite(Complex64::new(tq, 0.0), q, n).re)
            } else {
                0.0
            };
            CaseResult::new(
                &[
                    ("relation", json!("wall-orthogonality")),
                    ("q", json!(q)),
                    ("m_minus_j", json!(d)),
                    ("s", json!(s)),
                    ("n", json!(n)),
                    ("lattice_points", json!(l)),
                ],
                (lhs - rhs).abs(),
                WALL_TOL,
            )
        })
        .collect()
}

/// `<Phi_j, Phi_k> = delta_{jk}` over the discrete measure, `j, k <= j_max`,
/// `m <= m_max`, for every q in the list.
pub(crate) fn run_coeff(settings: &SuiteSettings) -> Vec<CaseResult> {
    let mut jobs = Vec::new();
    for &q in &settings.q_list {
        for m in 0..=settings.m_max {
            for j in 0..=settings.j_max {
                for k in j..=settings.j_max {
                    jobs.push((q, m, j, k));
                }
            }
        }
    }
    let j_max = settings.j_max;
    jobs.par_iter()
        .map(|&(q, m, j, k)| {
            let qd = QDeformation::from_q(q).expect("q in (0,1)");
            let meas = measure(&qd, 1e-14);
            let f = move |z: Complex64| coeff_phi(j, &PhaseSpacePoint::new_unchecked(z, m, qd));
            let g = move |z: Complex64| coeff_phi(k, &PhaseSpacePoint::new_unchecked(z, m, qd));
            let v = fock_inner(f, g, &meas, j_max);
            let target = if j == k { 1.0 } else { 0.0 };
            CaseResult::new(
                &[
                    ("relation", json!("coeff-orthonormality")),
                    ("q", json!(q)),
                    ("m", json!(m)),
                    ("j", json!(j)),
                    ("k", json!(k)),
                ],
                (v - Complex64::new(target, 0.0)).norm(),
                COEFF_TOL,
            )
        })
        .collect()
}
