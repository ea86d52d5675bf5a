//! Wavefunction equivalence: the superposition series against the closed
//! form, plus the algebraic `m = 0` specialization and L2 normalization.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::cstates::{cs_wavefunction_closed, cs_wavefunction_series, PhaseSpacePoint};
use crate::oscillator::{integrate_real_line, QuadratureRule};
use crate::qcore::{qexp, qpochhammer_infinite, QDeformation, Truncation};
use crate::verify::{CaseResult, SplitMix64, SuiteSettings};

const EQUIV_TOL: f64 = 1e-9;
const SPECIAL_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-7;
const DRAWS_PER_CELL: usize = 50;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn run(settings: &SuiteSettings) -> Vec<CaseResult> {
    let m_top = settings.m_max.min(3);
    let mut jobs = Vec::new();
    for &q in &settings.q_list {
        for m in 0..=m_top {
            for draw in 0..DRAWS_PER_CELL {
                jobs.push((q, m, draw as u64));
            }
        }
    }
    let seed = settings.seed;
    let mut cases: Vec<CaseResult> = jobs
        .par_iter()
        .map(|&(q, m, draw)| {
            let mut rng = SplitMix64::new(
                seed ^ draw.wrapping_mul(0xD134_2543_DE82_EF95) ^ (q.to_bits() >> 2) ^ ((m as u64) << 48),
            );
            let qd = QDeformation::from_q(q).expect("q in (0,1)");
            // keep the series ratio away from 1 and the values away from 0
            let r_max = 0.85 * (q.powi(m as i32) / (1.0 - q)).sqrt();
            let z = rng.complex_disk(r_max);
            let xi = rng.uniform(-2.0, 2.0);
            let p = PhaseSpacePoint::new(z, m, qd).expect("inside the domain by construction");
            let series = cs_wavefunction_series(&p, xi, Truncation { tol: 1e-13, max_terms: 20_000 })
                .expect("series converges inside the domain");
            let closed = cs_wavefunction_closed(&p, xi).expect("closed form on the domain");
            let residual = (series.value - closed).norm() / closed.norm();
            CaseResult::new(
                &[
                    ("relation", json!("series-vs-closed")),
                    ("q", json!(q)),
                    ("m", json!(m)),
                    ("draw", json!(draw)),
                    ("terms", json!(series.terms_used)),
                ],
                residual,
                EQUIV_TOL,
            )
        })
        .collect();

    // m = 0 algebraic specialization of the closed form
    for &q in &settings.q_list {
        let qd = QDeformation::from_q(q).expect("q in (0,1)");
        let mut rng = SplitMix64::new(settings.seed ^ 0x5157_AE11_0000_0000 ^ q.to_bits());
        for draw in 0..8u64 {
            let z = rng.complex_disk(0.8 / (1.0 - q).sqrt());
            let xi = rng.uniform(-2.0, 2.0);
            let p = PhaseSpacePoint::new(z, 0, qd).expect("m=0 domain");
            let got = cs_wavefunction_closed(&p, xi).expect("closed form");
            let zb = z.conj();
            let tr = Truncation::default();
            let eq = qexp(Complex64::new(z.norm_sqr(), 0.0), q, tr).unwrap().value.re;
            let a1 = qpochhammer_infinite(
                -I * zb * (1.0 - q).sqrt() * (2.0 * I * qd.kappa() * xi).exp(),
                q,
                tr,
            )
            .unwrap()
            .value;
            let a2 = qpochhammer_infinite(I * zb * (q * (1.0 - q)).sqrt(), q, tr).unwrap().value;
            let want = eq.sqrt().recip()
                * std::f64::consts::PI.powf(-0.25)
                * (-xi * xi / 2.0).exp()
                / (a1 * a2);
            cases.push(CaseResult::new(
                &[
                    ("relation", json!("m0-specialization")),
                    ("q", json!(q)),
                    ("draw", json!(draw)),
                ],
                (got - want).norm() / want.norm(),
                SPECIAL_TOL,
            ));
        }
    }

    // L2 normalization of the state, reported for both pairings
    for &q in &settings.q_list {
        let qd = QDeformation::from_q(q).expect("q in (0,1)");
        let rule = QuadratureRule::build(&qd, settings.j_max, settings.m_max, 1e-10).expect("quadrature");
        let mut rng = SplitMix64::new(settings.seed ^ 0x6022_0000_0000_0000 ^ q.to_bits());
        for m in 0..=m_top {
            let r_max = 0.8 * (q.powi(m as i32) / (1.0 - q)).sqrt();
            let z = rng.complex_disk(r_max);
            let p = PhaseSpacePoint::new(z, m, qd).expect("domain");
            let ses = integrate_real_line(
                |xi| {
                    let w = cs_wavefunction_closed(&p, xi).expect("closed form");
                    w * w.conj()
                },
                &rule,
            )
            .value;
            let bil = integrate_real_line(
                |xi| {
                    let w = cs_wavefunction_closed(&p, xi).expect("closed form");
                    w * w
                },
                &rule,
            )
            .value;
            cases.push(CaseResult::new(
                &[
                    ("relation", json!("state-normalization")),
                    ("q", json!(q)),
                    ("m", json!(m)),
                    ("pairing", json!("sesquilinear")),
                    ("bilinear_value_re", json!(bil.re)),
                    ("bilinear_value_im", json!(bil.im)),
                ],
                (ses - Complex64::new(1.0, 0.0)).norm(),
                NORM_TOL,
            ));
        }
    }
    cases
}
