//! Oscillator suites: eigenfunction orthonormality under both pairings,
//! ladder actions on both normalization families, the Hamiltonian
//! eigen-relation and operator-composition consistency, the q-commutation
//! relation, and the iterated-creation construction.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::oscillator::{
    annihilation, creation, energy, hamiltonian, inner_bilinear, inner_sesquilinear,
    rs_eigenfunction, rs_eigenfunction_fn, rs_ladder_function, AnalyticFunction, QuadratureRule,
};
use crate::qcore::{qfactorial, qnumber, QDeformation};
use crate::verify::{CaseResult, SuiteSettings};

const ORTHO_TOL: f64 = 1e-8;
const LADDER_TOL: f64 = 1e-9;
const EIGEN_TOL: f64 = 1e-9;
const COMPOSE_TOL: f64 = 1e-10;
const COMMUTATOR_TOL: f64 = 1e-10;
const ITERATED_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real_samples() -> Vec<Complex64> {
    (0..20).map(|i| c(-3.0 + 6.0 * i as f64 / 19.0, 0.0)).collect()
}

fn complex_samples() -> Vec<Complex64> {
    vec![c(0.4, 0.3), c(-1.2, -0.2)]
}

/// Orthonormality of the eigenfunctions on the real line. Both pairings are
/// measured on the full (j,k) grid; the grid identifies which one realizes
/// the Kronecker delta and the per-pair residual is taken in that pairing.
/// The other pairing's deviation rides along in the parameters.
pub(crate) fn run_orthonormality(settings: &SuiteSettings) -> Vec<CaseResult> {
    settings
        .q_list
        .par_iter()
        .flat_map(|&q| {
            let qd = QDeformation::from_q(q).expect("q in (0,1)");
            let rule = QuadratureRule::build(&qd, settings.j_max, 0, 1e-10).expect("quadrature");
            let jm = settings.j_max as usize;
            let fns: Vec<AnalyticFunction> =
                (0..=settings.j_max).map(|j| rs_eigenfunction_fn(j, &qd)).collect();
            let mut bil = vec![vec![Complex64::default(); jm + 1]; jm + 1];
            let mut ses = vec![vec![Complex64::default(); jm + 1]; jm + 1];
            for j in 0..=jm {
                for k in j..=jm {
                    bil[j][k] = inner_bilinear(&fns[j], &fns[k], &rule);
                    ses[j][k] = inner_sesquilinear(&fns[j], &fns[k], &rule);
                }
            }
            let dev = |g: &Vec<Vec<Complex64>>, j: usize, k: usize| {
                let target = if j == k { 1.0 } else { 0.0 };
                (g[j][k] - c(target, 0.0)).norm()
            };
            let mut max_bil = 0.0f64;
            let mut max_ses = 0.0f64;
            for j in 0..=jm {
                for k in j..=jm {
                    max_bil = max_bil.max(dev(&bil, j, k));
                    max_ses = max_ses.max(dev(&ses, j, k));
                }
            }
            let identified = if max_ses <= max_bil { "sesquilinear" } else { "bilinear" };
            let mut cases = Vec::new();
            for j in 0..=jm {
                for k in j..=jm {
                    let (chosen, other) = if identified == "sesquilinear" {
                        (dev(&ses, j, k), dev(&bil, j, k))
                    } else {
                        (dev(&bil, j, k), dev(&ses, j, k))
                    };
                    cases.push(CaseResult::new(
                        &[
                            ("relation", json!("rs-orthonormality")),
                            ("q", json!(q)),
                            ("j", json!(j)),
                            ("k", json!(k)),
                            ("pairing", json!(identified)),
                            ("other_pairing_residual", json!(other)),
                        ],
                        chosen,
                        ORTHO_TOL,
                    ));
                }
            }
            cases.push(CaseResult::new(
                &[
                    ("relation", json!("pairing-identification")),
                    ("q", json!(q)),
                    ("identified_pairing", json!(identified)),
                    ("max_deviation_sesquilinear", json!(max_ses)),
                    ("max_deviation_bilinear", json!(max_bil)),
                ],
                max_ses.min(max_bil),
                ORTHO_TOL,
            ));
            cases
        })
        .collect()
}

/// Ladder actions, checked pointwise at 20 real samples plus complex samples
/// inside the strip. The displayed unit-coefficient actions hold on the
/// ladder-normalized family `sqrt([j]_q!) phi_j`; on the orthonormal family
/// the same actions carry `sqrt([j+1]_q)` / `sqrt([j]_q)`. Both are enforced;
/// the deviation of the unit-coefficient form on the orthonormal family is
/// recorded for reference.
pub(crate) fn run_ladder(settings: &SuiteSettings) -> Vec<CaseResult> {
    let mut jobs = Vec::new();
    for &q in &settings.q_list {
        for j in 0..=settings.j_max {
            jobs.push((q, j));
        }
    }
    let mut cases: Vec<CaseResult> = jobs
        .par_iter()
        .flat_map(|&(q, j)| {
            let qd = QDeformation::from_q(q).expect("q in (0,1)");
            let points: Vec<Complex64> =
                real_samples().into_iter().chain(complex_samples()).collect();
            let phi = rs_eigenfunction_fn(j, &qd);
            let lad = {
                let qd2 = qd;
                AnalyticFunction::entire(move |x| rs_ladder_function(j, x, &qd2))
            };
            let up_phi = creation(&phi, &qd);
            let up_lad = creation(&lad, &qd);
            let dn_phi = annihilation(&phi, &qd);
            let dn_lad = annihilation(&lad, &qd);
            let mut up_res = 0.0f64;
            let mut up_verbatim_orthonormal = 0.0f64;
            let mut dn_res = 0.0f64;
            for &x in &points {
                let target_lad = rs_ladder_function(j + 1, x, &qd);
                up_res = up_res.max((up_lad.eval_unchecked(x) - target_lad).norm());
                let target_phi = qnumber(j + 1, q).sqrt() * rs_eigenfunction(j + 1, x, &qd);
                let got_phi = up_phi.eval_unchecked(x);
                up_res = up_res.max((got_phi - target_phi).norm());
                up_verbatim_orthonormal =
                    up_verbatim_orthonormal.max((got_phi - rs_eigenfunction(j + 1, x, &qd)).norm());
                let dn_target_lad = if j == 0 {
                    c(0.0, 0.0)
                } else {
                    qnumber(j, q) * rs_ladder_function(j - 1, x, &qd)
                };
                dn_res = dn_res.max((dn_lad.eval_unchecked(x) - dn_target_lad).norm());
                let dn_target_phi = if j == 0 {
                    c(0.0, 0.0)
                } else {
                    qnumber(j, q).sqrt() * rs_eigenfunction(j - 1, x, &qd)
                };
                dn_res = dn_res.max((dn_phi.eval_unchecked(x) - dn_target_phi).norm());
            }
            vec![
                CaseResult::new(
                    &[
                        ("relation", json!("creation-action")),
                        ("q", json!(q)),
                        ("j", json!(j)),
                        ("unit_coefficient_on_orthonormal_family", json!(up_verbatim_orthonormal)),
                    ],
                    up_res,
                    LADDER_TOL,
                ),
                CaseResult::new(
                    &[("relation", json!("annihilation-action")), ("q", json!(q)), ("j", json!(j))],
                    dn_res,
                    LADDER_TOL,
                ),
            ]
        })
        .collect();
    // iterated creation from the ground state
    for &q in &settings.q_list {
        let qd = QDeformation::from_q(q).expect("q in (0,1)");
        let mut f = AnalyticFunction::entire(|x: Complex64| {
            std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp()
        });
        let pts = real_samples();
        let cpts = complex_samples();
        for j in 1..=6u32 {
            f = creation(&f, &qd);
            let mut res = 0.0f64;
            let mut res_orthonormal_scaled = 0.0f64;
            for &x in pts.iter().take(7).chain(cpts.iter()) {
                let got = f.eval_unchecked(x);
                res = res.max((got - rs_ladder_function(j, x, &qd)).norm());
                res_orthonormal_scaled = res_orthonormal_scaled
                    .max((got - qfactorial(j, q).sqrt() * rs_eigenfunction(j, x, &qd)).norm());
            }
            cases.push(CaseResult::new(
                &[
                    ("relation", json!("iterated-creation")),
                    ("q", json!(q)),
                    ("j", json!(j)),
                ],
                res.max(res_orthonormal_scaled),
                ITERATED_TOL,
            ));
        }
    }
    cases
}

/// Hamiltonian eigen-relation, equality with the averaged operator
/// composition, and the q-commutation relation on test functions.
pub(crate) fn run_hamiltonian(settings: &SuiteSettings) -> Vec<CaseResult> {
    let mut jobs = Vec::new();
    for &q in &settings.q_list {
        for j in 0..=settings.j_max {
            jobs.push((q, j));
        }
    }
    let mut cases: Vec<CaseResult> = jobs
        .par_iter()
        .flat_map(|&(q, j)| {
            let qd = QDeformation::from_q(q).expect("q in (0,1)");
            let points: Vec<Complex64> =
                real_samples().into_iter().chain(complex_samples()).collect();
            let phi = rs_eigenfunction_fn(j, &qd);
            let h = hamiltonian(&phi, &qd);
            let comp_a = annihilation(&creation(&phi, &qd), &qd);
            let comp_b = creation(&annihilation(&phi, &qd), &qd);
            let eps = energy(j, q);
            let mut eig = 0.0f64;
            let mut comp = 0.0f64;
            for &x in &points {
                let hv = h.eval_unchecked(x);
                eig = eig.max((hv - eps * rs_eigenfunction(j, x, &qd)).norm());
                let cv = 0.5 * (comp_a.eval_unchecked(x) + comp_b.eval_unchecked(x));
                comp = comp.max((hv - cv).norm());
            }
            vec![
                CaseResult::new(
                    &[("relation", json!("eigen")), ("q", json!(q)), ("j", json!(j)), ("energy", json!(eps))],
                    eig,
                    EIGEN_TOL,
                ),
                CaseResult::new(
                    &[("relation", json!("composition")), ("q", json!(q)), ("j", json!(j))],
                    comp,
                    COMPOSE_TOL,
                ),
            ]
        })
        .collect();
    for &q in &settings.q_list {
        let qd = QDeformation::from_q(q).expect("q in (0,1)");
        let tests: Vec<(&str, AnalyticFunction)> = vec![
            ("cubic-gaussian", AnalyticFunction::entire(|x: Complex64| {
                (0.3 * x * x * x - x + 0.7) * (-x * x / 2.0).exp()
            })),
            ("shifted-gaussian", AnalyticFunction::entire(|x: Complex64| {
                ((x - 0.4) * (x - 0.4) * (-0.5) + c(0.0, 0.2) * x).exp() * 0.8
            })),
        ];
        let pts = real_samples();
        let cpts = complex_samples();
        for (name, f) in tests {
            let bbs = annihilation(&creation(&f, &qd), &qd);
            let bsb = creation(&annihilation(&f, &qd), &qd);
            let mut res = 0.0f64;
            for &x in pts.iter().take(9).chain(cpts.iter()) {
                let v = bbs.eval_unchecked(x) - qd.q() * bsb.eval_unchecked(x);
                res = res.max((v - f.eval_unchecked(x)).norm());
            }
            cases.push(CaseResult::new(
                &[("relation", json!("q-commutator")), ("q", json!(q)), ("test_function", json!(name))],
                res,
                COMMUTATOR_TOL,
            ));
        }
    }
    cases
}
