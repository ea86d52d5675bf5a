//! Transform suites: the m = 0 reduction, coefficient recovery under both
//! pairing conventions, Parseval on a finite eigenfunction span, and the
//! resolution-of-identity integral over the discrete measure.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::cstates::{coeff_phi, measure, PhaseSpacePoint};
use crate::oscillator::{integrate_real_line, rs_eigenfunction, QuadratureRule};
use crate::qcore::QDeformation;
use crate::transforms::{cst0, CstEvaluator, Pairing};
use crate::verify::{CaseResult, SplitMix64, SuiteSettings};

const M0_TOL: f64 = 1e-10;
const BASIS_TOL: f64 = 1e-7;
const PARSEVAL_TOL: f64 = 1e-6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn run(settings: &SuiteSettings) -> Vec<CaseResult> {
    let m_top = settings.m_max.min(3);
    let mut cases: Vec<CaseResult> = Vec::new();

    // m = 0 transform equals the dedicated specialization, both pairings
    let m0_jobs: Vec<(f64, u32, Pairing)> = settings
        .q_list
        .iter()
        .flat_map(|&q| {
            [Pairing::Sesquilinear, Pairing::Bilinear]
                .into_iter()
                .flat_map(move |p| (0..=2u32).map(move |j| (q, j, p)))
        })
        .collect();
    cases.par_extend(m0_jobs.par_iter().map(|&(q, j, pairing)| {
        let qd = QDeformation::from_q(q).expect("q");
        let rule = QuadratureRule::build(&qd, settings.j_max, 0, 1e-11).expect("rule");
        let z = c(0.35, -0.5); // inside C_q for every list q
        let p = PhaseSpacePoint::new(z, 0, qd).expect("domain");
        let ev = CstEvaluator::new(&p, &rule, pairing).expect("evaluator");
        let f = move |xi: f64| rs_eigenfunction(j, c(xi, 0.0), &qd);
        let a = ev.apply(f);
        let b = cst0(f, z, &qd, &rule, pairing).expect("cst0");
        CaseResult::new(
            &[
                ("relation", json!("m0-reduction")),
                ("q", json!(q)),
                ("j", json!(j)),
                ("pairing", json!(format!("{pairing:?}").to_lowercase())),
            ],
            (a - b).norm(),
            M0_TOL,
        )
    }));

    // basis mapping: which (pairing, target) pair recovers coefficients
    let mut map_jobs = Vec::new();
    for &q in &settings.q_list {
        for m in 0..=m_top {
            for j in 0..=settings.j_max.min(6) {
                map_jobs.push((q, m, j));
            }
        }
    }
    cases.par_extend(map_jobs.par_iter().map(|&(q, m, j)| {
        let qd = QDeformation::from_q(q).expect("q");
        let rule = QuadratureRule::build(&qd, settings.j_max.max(j), m, 1e-11).expect("rule");
        let z = c(0.28, -0.2) * (q.powi(m as i32) / (1.0 - q)).sqrt();
        let p = PhaseSpacePoint::new(z, m, qd).expect("domain");
        let f = move |xi: f64| rs_eigenfunction(j, c(xi, 0.0), &qd);
        let ses = CstEvaluator::new(&p, &rule, Pairing::Sesquilinear).expect("evaluator").apply(f);
        let bil = CstEvaluator::new(&p, &rule, Pairing::Bilinear).expect("evaluator").apply(f);
        let target = coeff_phi(j, &p);
        let d_ses_plain = (ses - target).norm();
        let d_ses_conj = (ses - target.conj()).norm();
        let d_bil_plain = (bil - target).norm();
        let d_bil_conj = (bil - target.conj()).norm();
        let best = d_ses_plain.min(d_ses_conj).min(d_bil_plain).min(d_bil_conj);
        let identified = if best == d_ses_plain {
            "sesquilinear->coefficient"
        } else if best == d_ses_conj {
            "sesquilinear->conjugate"
        } else if best == d_bil_plain {
            "bilinear->coefficient"
        } else {
            "bilinear->conjugate"
        };
        CaseResult::new(
            &[
                ("relation", json!("basis-mapping")),
                ("q", json!(q)),
                ("m", json!(m)),
                ("j", json!(j)),
                ("identified", json!(identified)),
                ("sesquilinear_vs_coefficient", json!(d_ses_plain)),
                ("sesquilinear_vs_conjugate", json!(d_ses_conj)),
                ("bilinear_vs_coefficient", json!(d_bil_plain)),
                ("bilinear_vs_conjugate", json!(d_bil_conj)),
            ],
            d_ses_plain,
            BASIS_TOL,
        )
    }));

    // Parseval over span{phi_0..phi_6}: direct coefficients, quadrature
    // coefficients, and the quadrature norm must agree
    let mut pv_jobs = Vec::new();
    for &q in &settings.q_list {
        for rep in 0..2u64 {
            pv_jobs.push((q, rep));
        }
    }
    let seed = settings.seed;
    cases.par_extend(pv_jobs.par_iter().map(|&(q, rep)| {
        let qd = QDeformation::from_q(q).expect("q");
        let rule = QuadratureRule::build(&qd, 8, 0, 1e-11).expect("rule");
        let mut rng = SplitMix64::new(seed ^ rep.wrapping_mul(0xff51_afd7_ed55_8ccd) ^ q.to_bits());
        let coeffs: Vec<Complex64> = (0..=6).map(|_| rng.complex_disk(1.0)).collect();
        let f = {
            let coeffs = coeffs.clone();
            move |xi: f64| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, &a)| a * rs_eigenfunction(j as u32, c(xi, 0.0), &qd))
                    .sum::<Complex64>()
            }
        };
        let direct: f64 = coeffs.iter().map(|a| a.norm_sqr()).sum();
        // extracted coefficients c_j = <f, phi_j>, two indices past the span
        let mut extracted = 0.0f64;
        for j in 0..=8u32 {
            let cj = integrate_real_line(
                |xi| f(xi) * rs_eigenfunction(j, c(xi, 0.0), &qd).conj(),
                &rule,
            )
            .value;
            extracted += cj.norm_sqr();
        }
        let norm_quad = integrate_real_line(|xi| f(xi) * f(xi).conj(), &rule).value.re;
        let residual = (extracted - direct).abs().max((norm_quad - direct).abs());
        CaseResult::new(
            &[
                ("relation", json!("parseval")),
                ("q", json!(q)),
                ("rep", json!(rep)),
            ],
            residual,
            PARSEVAL_TOL,
        )
    }));

    // resolution of identity in integral form: the transform's norm over the
    // discrete measure reproduces the L2 norm of f. On the circles with
    // l <= m and l = m (mod 2) the state kernel has poles on the real line
    // (|w_xi| crosses a reciprocal q-power), so the transform there is taken
    // by its continuous extension sum_j Phi_j(z) c_j with the coefficients
    // c_j extracted once by real-line quadrature.
    let mut ri_jobs = Vec::new();
    for &q in &settings.q_list {
        for m in 0..=m_top.min(1) {
            ri_jobs.push((q, m));
        }
    }
    cases.par_extend(ri_jobs.par_iter().map(|&(q, m)| {
        let qd = QDeformation::from_q(q).expect("q");
        let j_span = 6u32;
        let rule = QuadratureRule::build(&qd, j_span, m, 1e-9).expect("rule");
        let mut rng = SplitMix64::new(seed ^ 0xabcd_0000 ^ q.to_bits() ^ ((m as u64) << 44));
        let coeffs: Vec<Complex64> = (0..=j_span).map(|_| rng.complex_disk(1.0)).collect();
        let f = {
            let coeffs = coeffs.clone();
            move |xi: f64| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, &a)| a * rs_eigenfunction(j as u32, c(xi, 0.0), &qd))
                    .sum::<Complex64>()
            }
        };
        let f_table: Vec<Complex64> = rule.nodes.iter().map(|&xi| f(xi)).collect();
        let direct: f64 = coeffs.iter().map(|a| a.norm_sqr()).sum();
        let extracted: Vec<Complex64> = (0..=j_span)
            .map(|j| {
                integrate_real_line(
                    |xi| f(xi) * rs_eigenfunction(j, c(xi, 0.0), &qd).conj(),
                    &rule,
                )
                .value
            })
            .collect();
        let meas = measure(&qd, 1e-8);
        let t = (2 * j_span + 5) as usize;
        let mut norm_measure = 0.0f64;
        let mut quadrature_nodes = 0usize;
        let mut extension_nodes = 0usize;
        for (l, (&r, &w_l)) in meas.nodes.iter().zip(meas.weights.iter()).enumerate() {
            let singular = l as u32 <= m && (m - l as u32) % 2 == 0;
            let mut ang = 0.0f64;
            for k in 0..t {
                let theta = std::f64::consts::TAU * k as f64 / t as f64;
                let z = Complex64::from_polar(r, theta);
                let p = PhaseSpacePoint::new_unchecked(z, m, qd);
                let val = if singular {
                    extension_nodes += 1;
                    extracted
                        .iter()
                        .enumerate()
                        .map(|(j, &cj)| coeff_phi(j as u32, &p) * cj)
                        .sum::<Complex64>()
                } else {
                    quadrature_nodes += 1;
                    CstEvaluator::new(&p, &rule, Pairing::Sesquilinear)
                        .expect("pole-free kernel off the singular circles")
                        .apply_to_table(&f_table)
                };
                ang += val.norm_sqr();
            }
            norm_measure += w_l * ang / t as f64;
        }
        CaseResult::new(
            &[
                ("relation", json!("resolution-of-identity")),
                ("q", json!(q)),
                ("m", json!(m)),
                ("quadrature_label_points", json!(quadrature_nodes)),
                ("extension_label_points", json!(extension_nodes)),
            ],
            (norm_measure - direct).abs(),
            PARSEVAL_TOL,
        )
    }));
    cases
}
