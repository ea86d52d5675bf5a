//! Kernel suites: mutual agreement of all three kernel forms, the `m = 0`
//! reduction, hermitian symmetry, the reproducing property against the
//! discrete measure, and positive semidefiniteness of sample Gram matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::cstates::{coeff_phi, fock_inner, measure, PhaseSpacePoint};
use crate::kernels::{kernel_qm_closed, kernel_qm_intermediate, kernel_qm_series};
use crate::qcore::{qexp, QDeformation, Truncation};
use crate::verify::{CaseResult, SplitMix64, SuiteSettings};

const THREE_FORM_TOL: f64 = 1e-10;
const M0_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;
const REPRODUCING_TOL: f64 = 1e-7;
const PSD_TOL: f64 = 1e-9;
const DRAWS: usize = 10;

fn domain_point(rng: &mut SplitMix64, m: u32, q: f64, lo: f64, hi: f64) -> Complex64 {
    rng.complex_annulus(lo, hi) * (q.powi(m as i32) / (1.0 - q)).sqrt()
}

pub(crate) fn run_three_forms(settings: &SuiteSettings) -> Vec<CaseResult> {
    let mut jobs = Vec::new();
    for &q in &settings.q_list {
        for m in 0..=settings.m_max {
            for draw in 0..DRAWS {
                jobs.push((q, m, draw as u64));
            }
        }
    }
    let seed = settings.seed;
    let mut cases: Vec<CaseResult> = jobs
        .par_iter()
        .flat_map(|&(q, m, draw)| {
            let mut rng = SplitMix64::new(
                seed ^ draw.wrapping_mul(0xA076_1D64_78BD_642F) ^ q.to_bits() ^ ((m as u64) << 52),
            );
            let qd = QDeformation::from_q(q).expect("q in (0,1)");
            let z = domain_point(&mut rng, m, q, 0.15, 0.85);
            let w = domain_point(&mut rng, m, q, 0.15, 0.85);
            let s = kernel_qm_series(z, w, m, &qd, Truncation { tol: 1e-14, max_terms: 100_000 })
                .expect("series")
                .value;
            let cl = kernel_qm_closed(z, w, m, &qd).expect("closed");
            let im = kernel_qm_intermediate(z, w, m, &qd).expect("intermediate");
            let scale = s.norm().max(1.0);
            let base = [("q", json!(q)), ("m", json!(m)), ("draw", json!(draw))];
            let mk = |name: &str, r: f64, tol: f64| {
                let mut params = vec![("relation", json!(name))];
                params.extend_from_slice(&base);
                CaseResult::new(&params, r, tol)
            };
            vec![
                mk("series-vs-closed", (s - cl).norm() / scale, THREE_FORM_TOL),
                mk("series-vs-intermediate", (s - im).norm() / scale, THREE_FORM_TOL),
                mk("closed-vs-intermediate", (cl - im).norm() / scale, THREE_FORM_TOL),
                mk(
                    "hermitian-symmetry",
                    (cl - kernel_qm_closed(w, z, m, &qd).expect("closed").conj()).norm() / scale,
                    HERMITIAN_TOL,
                ),
            ]
        })
        .collect();

    // m = 0 reduction to the q-exponential of z wbar
    for &q in &settings.q_list {
        let qd = QDeformation::from_q(q).expect("q in (0,1)");
        let mut rng = SplitMix64::new(settings.seed ^ 0x0ee0_0000 ^ q.to_bits());
        for draw in 0..6u64 {
            let z = domain_point(&mut rng, 0, q, 0.1, 0.9);
            let w = domain_point(&mut rng, 0, q, 0.1, 0.9);
            let cl = kernel_qm_closed(z, w, 0, &qd).expect("closed");
            let target = qexp(z * w.conj(), q, Truncation::default()).expect("qexp").value;
            cases.push(CaseResult::new(
                &[
                    ("relation", json!("m0-arik-coon")),
                    ("q", json!(q)),
                    ("draw", json!(draw)),
                ],
                (cl - target).norm() / target.norm().max(1.0),
                M0_TOL,
            ));
        }
    }
    cases
}

pub(crate) fn run_reproducing(settings: &SuiteSettings) -> Vec<CaseResult> {
    let m_top = settings.m_max.min(3);
    let j_top = settings.j_max.min(6);
    let seed = settings.seed;

    // Phi_j(z) = <Phi_j, K(., z)>, the kernel slice in the conjugate slot;
    // by hermitian symmetry K(w, z) = conj(K(z, w)), so the anchored closed
    // form serves for every node (its second slot continues analytically to
    // the outer lattice circles, where it still equals the kernel element:
    // both sides agree for small |z| and are real-analytic in z).
    let mut jobs = Vec::new();
    for &q in &settings.q_list {
        for m in 0..=m_top {
            for j in 0..=j_top {
                jobs.push((q, m, j));
            }
        }
    }
    let mut cases: Vec<CaseResult> = jobs
        .par_iter()
        .map(|&(q, m, j)| {
            let mut rng =
                SplitMix64::new(seed ^ ((j as u64) << 32) ^ q.to_bits() ^ ((m as u64) << 52));
            let qd = QDeformation::from_q(q).expect("q in (0,1)");
            // rho <= 0.7 keeps angular aliasing beyond the trapezoid degree
            let z = domain_point(&mut rng, m, q, 0.1, 0.7);
            let meas = measure(&qd, 1e-12);
            let basis = move |w: Complex64| coeff_phi(j, &PhaseSpacePoint::new_unchecked(w, m, qd));
            let kernel_slice =
                move |w: Complex64| kernel_qm_closed(z, w, m, &qd).expect("closed").conj();
            let got = fock_inner(basis, kernel_slice, &meas, 64);
            let want = coeff_phi(j, &PhaseSpacePoint::new_unchecked(z, m, qd));
            CaseResult::new(
                &[
                    ("relation", json!("reproducing")),
                    ("q", json!(q)),
                    ("m", json!(m)),
                    ("j", json!(j)),
                ],
                (got - want).norm(),
                REPRODUCING_TOL,
            )
        })
        .collect();

    // positive semidefiniteness of 4-point Gram matrices
    for &q in &settings.q_list {
        let qd = QDeformation::from_q(q).expect("q in (0,1)");
        for m in 0..=m_top {
            let mut rng = SplitMix64::new(settings.seed ^ 0x9d00_0000 ^ q.to_bits() ^ ((m as u64) << 40));
            let pts: Vec<Complex64> = (0..4).map(|_| domain_point(&mut rng, m, q, 0.1, 0.85)).collect();
            let mut gram = vec![Complex64::default(); 16];
            for (a, &za) in pts.iter().enumerate() {
                for (b, &zb) in pts.iter().enumerate() {
                    gram[a * 4 + b] = kernel_qm_closed(za, zb, m, &qd).expect("closed");
                }
            }
            // real embedding [[Re, -Im], [Im, Re]] of the hermitian Gram:
            // its spectrum is the kernel spectrum, doubled
            let mut emb = DMatrix::<f64>::zeros(8, 8);
            for a in 0..4 {
                for b in 0..4 {
                    let g = gram[a * 4 + b];
                    emb[(a, b)] = g.re;
                    emb[(a + 4, b + 4)] = g.re;
                    emb[(a, b + 4)] = -g.im;
                    emb[(a + 4, b)] = g.im;
                }
            }
            // symmetrize away roundoff before the eigensolve
            let emb = (emb.clone() + emb.transpose()) * 0.5;
            let eig = emb.symmetric_eigenvalues();
            let min_eig = eig.iter().cloned().fold(f64::INFINITY, f64::min);
            cases.push(CaseResult::new(
                &[
                    ("relation", json!("gram-psd")),
                    ("q", json!(q)),
                    ("m", json!(m)),
                    ("min_eigenvalue", json!(min_eig)),
                ],
                (-min_eig).max(0.0),
                PSD_TOL,
            ));
        }
    }
    cases
}
