//! q-identity suite: product-shift and inversion identities, the q-binomial
//! theorem, the terminating 2phi1 evaluation at z = q, the finite Heine
//! transformation, and the Wall-polynomial reduction identities.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::dd::{Dd, DdComplex};
use crate::qcore::{qpochhammer_finite, qpochhammer_infinite, Truncation};
use crate::qpoly::{wall, wall_reduced, wall_regularized_neg_power};
use crate::qseries::{phi21_terminating, phi32_terminating};
use crate::verify::{rel_residual, CaseResult, SplitMix64, SuiteSettings};

const TOL: f64 = 1e-11;
const CASES_PER_IDENTITY: usize = 210;

const IDENTITIES: [&str; 9] = [
    "shift-split",      // (a;q)_{n+k} = (a;q)_n (a q^n; q)_k
    "inversion",        // (a;q)_n = (a^{-1} q^{1-n}; q)_n (-a)^n q^{n(n-1)/2}
    "finite-infinite",  // (a;q)_inf = (a;q)_s (a q^s; q)_inf
    "shifted-base",     // (a q^{-n}; q)_k in terms of (a;q)_k
    "q-binomial",       // sum (a;q)_n xi^n/(q;q)_n = (a xi;q)_inf/(xi;q)_inf
    "phi21-at-q",       // 2phi1(q^{-n}, b; c; q, q) = (c/b;q)_n b^n/(c;q)_n
    "finite-heine",     // 3phi2 transformation
    "wall-reduction",   // direct vs reduced Wall evaluation
    "wall-neg-power",   // regularized parameter-inversion relation
];

struct Ctx {
    identity: &'static str,
    q: f64,
    draw: u64,
}

pub(crate) fn run(settings: &SuiteSettings) -> Vec<CaseResult> {
    let mut ctxs = Vec::new();
    for &identity in &IDENTITIES {
        for i in 0..CASES_PER_IDENTITY {
            let q = settings.q_list[i % settings.q_list.len()];
            ctxs.push(Ctx { identity, q, draw: i as u64 });
        }
    }
    let seed = settings.seed;
    ctxs.par_iter().map(|ctx| run_case(ctx, seed)).collect()
}

fn run_case(ctx: &Ctx, seed: u64) -> CaseResult {
    // per-case stream keyed by (seed, identity, q, draw) so cases are
    // independent of scheduling and of each other
    let key = seed
        ^ ctx.draw.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (ctx.q.to_bits() >> 3)
        ^ (ctx.identity.len() as u64) << 56
        ^ (ctx.identity.as_bytes()[0] as u64) << 40
        ^ (ctx.identity.as_bytes()[ctx.identity.len() - 1] as u64) << 24;
    let mut rng = SplitMix64::new(key);
    let q = ctx.q;
    let residual = match ctx.identity {
        "shift-split" => {
            let a = rng.complex_annulus(0.1, 2.0);
            let n = rng.below(13) as u32;
            let k = rng.below(13) as u32;
            let lhs = qpochhammer_finite(a, q, n + k);
            let rhs = qpochhammer_finite(a, q, n) * qpochhammer_finite(a * q.powi(n as i32), q, k);
            rel_residual(lhs, rhs)
        }
        "inversion" => {
            let a = rng.complex_annulus(0.1, 2.0);
            let n = rng.below(13) as u32;
            let lhs = qpochhammer_finite(a, q, n);
            let rhs = qpochhammer_finite(a.finv() * q.powi(1 - n as i32), q, n)
                * (-a).powu(n)
                * q.powi((n * n.saturating_sub(1) / 2) as i32);
            rel_residual(lhs, rhs)
        }
        "finite-infinite" => {
            let a = rng.complex_annulus(0.1, 0.95);
            let s = rng.below(16) as u32;
            let tr = Truncation::default();
            let lhs = qpochhammer_infinite(a, q, tr).unwrap().value;
            let rhs = qpochhammer_finite(a, q, s)
                * qpochhammer_infinite(a * q.powi(s as i32), q, tr).unwrap().value;
            rel_residual(lhs, rhs)
        }
        "shifted-base" => {
            let n = rng.below(9) as u32;
            let k = rng.below(9) as u32;
            let a = loop {
                let a = rng.complex_annulus(0.1, 2.0);
                let well_conditioned = (0..n).all(|i| {
                    (1.0 - a.finv() * q.powi(1 - k as i32 + i as i32)).norm() > 5e-2
                });
                if well_conditioned {
                    break a;
                }
            };
            let lhs = qpochhammer_finite(a * q.powi(-(n as i32)), q, k);
            let rhs = qpochhammer_finite(a.finv() * q, q, n)
                / qpochhammer_finite(a.finv() * q.powi(1 - k as i32), q, n)
                * qpochhammer_finite(a, q, k)
                * q.powi(-((n * k) as i32));
            rel_residual(lhs, rhs)
        }
        "q-binomial" => {
            let a = rng.complex_annulus(0.1, 2.0);
            let xi = rng.complex_disk(0.9);
            let tr = Truncation::default();
            // the convergent sum cancels several orders below its peak terms
            // near |xi| = 0.9, so the oracle side runs on dd scalars
            let qd = Dd::from_f64(q);
            let ad = DdComplex::from_c64(a);
            let xid = DdComplex::from_c64(xi);
            let mut sum = DdComplex::ONE;
            let mut term = DdComplex::ONE;
            let mut k = 0u32;
            loop {
                let qk = qd.powi(k);
                let num = DdComplex::ONE.sub(ad.mul_dd(qk)).mul(xid);
                let den = Dd::ONE.sub(qd.powi(k + 1));
                term = term.mul(num);
                term = DdComplex::new(term.re.div(den), term.im.div(den));
                sum = sum.add(term);
                k += 1;
                if term.to_c64().norm() < 1e-22 || k > 20_000 {
                    break;
                }
            }
            let lhs = sum.to_c64();
            let rhs = qpochhammer_infinite(a * xi, q, tr).unwrap().value
                / qpochhammer_infinite(xi, q, tr).unwrap().value;
            rel_residual(lhs, rhs)
        }
        "phi21-at-q" => {
            let n = 1 + rng.below(8) as u32;
            // both Pochhammers must stay well conditioned: a nearly vanishing
            // factor turns input roundoff of c/b into a fake residual
            let factors_ok = |a: Complex64, n: u32| {
                (0..n).all(|k| (1.0 - a * q.powi(k as i32)).norm() > 5e-2)
            };
            let (b, c) = loop {
                let b = rng.complex_annulus(0.1, 2.0);
                let c = rng.complex_annulus(0.1, 2.0);
                if factors_ok(c, n) && factors_ok(c / b, n) {
                    break (b, c);
                }
            };
            let lhs = phi21_terminating(n, b, c, q, Complex64::new(q, 0.0)).unwrap();
            let rhs = qpochhammer_finite(c / b, q, n) * b.powu(n) / qpochhammer_finite(c, q, n);
            rel_residual(lhs, rhs)
        }
        "finite-heine" => {
            let n = 1 + rng.below(6) as u32;
            let factors_ok = |a: Complex64| {
                (0..n).all(|k| (1.0 - a * q.powi(k as i32)).norm() > 5e-2)
            };
            let (xi, be, ga, ta) = loop {
                let xi = rng.complex_annulus(0.1, 1.2);
                let be = rng.complex_annulus(0.1, 1.2);
                let ga = rng.complex_annulus(0.1, 1.2);
                let ta = rng.complex_annulus(0.1, 1.2);
                if factors_ok(ta)
                    && factors_ok(Complex64::new(q.powi(1 - n as i32), 0.0) / ta)
                    && factors_ok(ga)
                    && factors_ok(xi * ta)
                {
                    break (xi, be, ga, ta);
                }
            };
            let lhs = phi32_terminating(n, xi, be, ga, Complex64::new(q.powi(1 - n as i32), 0.0) / ta, q, Complex64::new(q, 0.0)).unwrap();
            let rhs = qpochhammer_finite(xi * ta, q, n) / qpochhammer_finite(ta, q, n)
                * phi32_terminating(n, ga / be, xi, ga, xi * ta, q, be * ta * q.powi(n as i32)).unwrap();
            rel_residual(lhs, rhs)
        }
        "wall-reduction" => {
            let n = rng.below(9) as u32;
            let x = rng.complex_annulus(0.1, 1.5);
            let a = rng.complex_annulus(0.1, 1.5);
            match (wall(n, x, a, q), wall_reduced(n, x, a, q)) {
                (Ok(lhs), Ok(rhs)) => rel_residual(lhs, rhs),
                // parameter pole: regenerate deterministically from the stream
                _ => {
                    let x = rng.complex_annulus(0.2, 0.9);
                    let a = rng.complex_annulus(0.2, 0.9);
                    rel_residual(wall(n, x, a, q).unwrap(), wall_reduced(n, x, a, q).unwrap())
                }
            }
        }
        "wall-neg-power" => {
            let n = 1 + rng.below(6) as u32;
            let nn = 1 + rng.below(n as u64) as u32;
            let x = rng.complex_annulus(0.1, 1.2);
            let lhs = wall_regularized_neg_power(n, x, nn, q);
            let rhs = x.powu(nn)
                * (-1.0f64).powi(nn as i32)
                * q.powf(nn as f64 * (nn as f64 + 1.0 - 2.0 * n as f64) / 2.0)
                * qpochhammer_finite(Complex64::new(q.powi(nn as i32 + 1), 0.0), q, n - nn)
                * wall(n - nn, x, Complex64::new(q.powi(nn as i32), 0.0), q).unwrap();
            rel_residual(lhs, rhs)
        }
        other => unreachable!("unknown identity {other}"),
    };
    CaseResult::new(
        &[
            ("identity", json!(ctx.identity)),
            ("q", json!(ctx.q)),
            ("draw", json!(ctx.draw)),
        ],
        residual,
        TOL,
    )
}
