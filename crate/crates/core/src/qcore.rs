//! q-calculus primitives: Pochhammer symbols, q-numbers, q-factorials,
//! q-binomials and the q-exponential, in complex double precision with
//! controlled truncation.
//!
//! Conventions, for `0 < q < 1`:
//! - `(a;q)_n = prod_{k=0}^{n-1} (1 - a q^k)`, `(a;q)_0 = 1`
//! - `(a;q)_inf` is the convergent infinite product
//! - `(a;q)_{-m} = 1 / ( (a q^{-m}; q)_m )`
//! - `[n]_q = (1-q^n)/(1-q)`, `[n]_q! = (q;q)_n / (1-q)^n`
//! - `e_q(x) = sum_n x^n/[n]_q! = 1/((1-q)x; q)_inf`, `|x| < 1/(1-q)`
//!
//! Infinite products stop when `|a| q^k < tol (1-q)`; the convergence ratio
//! is exactly `q`, so the dropped log-tail is below `|a| q^k / (1-q)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QcsError, Result};

/// The deformation pair `(q, kappa)` with `q = exp(-2 kappa^2)`.
///
/// Constructed from either member; the other is derived, so the relation
/// holds to machine precision by construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QDeformation {
    q: f64,
    kappa: f64,
}

impl QDeformation {
    /// Build from `q` in (0,1).
    pub fn from_q(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) || !q.is_finite() {
            return Err(QcsError::InvalidDeformation(q));
        }
        Ok(QDeformation { q, kappa: (-q.ln() / 2.0).sqrt() })
    }

    /// Build from `kappa > 0`.
    pub fn from_kappa(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(QcsError::InvalidDeformation(f64::NAN));
        }
        let q = (-2.0 * kappa * kappa).exp();
        if q <= 0.0 || q >= 1.0 {
            return Err(QcsError::InvalidDeformation(q));
        }
        Ok(QDeformation { q, kappa })
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    #[inline]
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// A computed value bundled with a truncation-error bound and term count.
///
/// `abs_error_estimate` bounds the truncation remainder under the geometric
/// tail-bound policy; it does not account for f64 roundoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
}

impl SeriesValue {
    pub fn exact(value: Complex64, terms_used: usize) -> Self {
        SeriesValue { value, abs_error_estimate: 0.0, terms_used }
    }
}

/// Truncation policy: stop once the geometric tail bound drops below `tol`,
/// error out at `max_terms`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { tol: 1e-15, max_terms: 1_000_000 }
    }
}

/// Order of a q-Pochhammer symbol: finite (possibly negative) or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochhammerOrder {
    Finite(i64),
    Infinite,
}

/// Finite product `(a;q)_n`, n >= 0.
pub fn qpochhammer_finite(a: Complex64, q: f64, n: u32) -> Complex64 {
    let mut r = Complex64::new(1.0, 0.0);
    let mut aq = a;
    for _ in 0..n {
        r *= 1.0 - aq;
        aq *= q;
    }
    r
}

/// Infinite product `(a;q)_inf` with a geometric tail bound.
pub fn qpochhammer_infinite(a: Complex64, q: f64, trunc: Truncation) -> Result<SeriesValue> {
    let mut r = Complex64::new(1.0, 0.0);
    let mut aq = a;
    let mut k = 0usize;
    while aq.norm() >= trunc.tol * (1.0 - q) {
        if k >= trunc.max_terms {
            return Err(QcsError::TruncationFailure {
                tail: aq.norm() / (1.0 - q),
                tol: trunc.tol,
                terms: k,
            });
        }
        r *= 1.0 - aq;
        aq *= q;
        k += 1;
    }
    // |log remainder| <= |a| q^k / (1-q)
    let est = r.norm() * aq.norm() / (1.0 - q) * 2.0;
    Ok(SeriesValue { value: r, abs_error_estimate: est, terms_used: k })
}

/// `(a;q)_n` for extended order `n`: nonnegative, negative, or infinite.
///
/// The negative case uses `(a;q)_{-m} = 1/((a q^{-m}; q)_m)` and signals
/// [`QcsError::Pole`] when a factor vanishes.
pub fn qpochhammer(a: Complex64, q: f64, n: PochhammerOrder) -> Result<SeriesValue> {
    check_q(q)?;
    match n {
        PochhammerOrder::Finite(n) if n >= 0 => {
            Ok(SeriesValue::exact(qpochhammer_finite(a, q, n as u32), n as usize))
        }
        PochhammerOrder::Finite(n) => {
            let m = (-n) as u32;
            let shifted = a * q.powi(-(m as i32));
            let denom = qpochhammer_finite(shifted, q, m);
            if denom == Complex64::new(0.0, 0.0) {
                return Err(QcsError::Pole);
            }
            Ok(SeriesValue::exact(denom.finv(), m as usize))
        }
        PochhammerOrder::Infinite => qpochhammer_infinite(a, q, Truncation::default()),
    }
}

/// Multi-argument product `(a_1, ..., a_r; q)_n = prod_i (a_i; q)_n`.
pub fn qpochhammer_multi(args: &[Complex64], q: f64, n: PochhammerOrder) -> Result<SeriesValue> {
    let mut value = Complex64::new(1.0, 0.0);
    let mut est = 0.0;
    let mut terms = 0;
    for &a in args {
        let s = qpochhammer(a, q, n)?;
        est = est * s.value.norm() + value.norm() * s.abs_error_estimate;
        value *= s.value;
        terms += s.terms_used;
    }
    Ok(SeriesValue { value, abs_error_estimate: est, terms_used: terms })
}

/// `1/(q;q)_n` with the convention that the reciprocal vanishes for n < 0.
///
/// This is the normative reading of `1/(q;q)_{j-m}` wherever a summation
/// index runs below a finite offset: those terms drop out exactly.
pub fn qcoeff_recip(n: i64, q: f64) -> f64 {
    if n < 0 {
        0.0
    } else {
        1.0 / qpochhammer_finite(Complex64::new(q, 0.0), q, n as u32).re
    }
}

/// q-number `[n]_q = (1-q^n)/(1-q)`.
pub fn qnumber(n: u32, q: f64) -> f64 {
    (1.0 - q.powi(n as i32)) / (1.0 - q)
}

/// q-factorial `[n]_q! = (q;q)_n / (1-q)^n`.
pub fn qfactorial(n: u32, q: f64) -> f64 {
    qpochhammer_finite(Complex64::new(q, 0.0), q, n).re / (1.0 - q).powi(n as i32)
}

/// Gaussian binomial coefficient `[n choose k]_q`.
///
/// Panics if `k > n`; callers own the index contract.
pub fn qbinomial(n: u32, k: u32, q: f64) -> f64 {
    assert!(k <= n, "qbinomial requires k <= n, got k={k} n={n}");
    let qq = Complex64::new(q, 0.0);
    (qpochhammer_finite(qq, q, n)
        / (qpochhammer_finite(qq, q, k) * qpochhammer_finite(qq, q, n - k)))
    .re
}

/// `ln (a;q)_n` for real `a` with all factors `1 - a q^k` positive.
///
/// Log-space accumulation keeps near-classical products such as `(q;q)_inf`
/// meaningful after they underflow as plain doubles. `n = None` means the
/// infinite product truncated at `a q^k < tol (1-q)`.
pub fn ln_qpochhammer_positive(a: f64, q: f64, n: Option<u32>, tol: f64) -> Result<f64> {
    let mut acc = 0.0f64;
    let mut aq = a;
    let mut k = 0usize;
    let stop = |aq: f64, k: usize| match n {
        Some(n) => k >= n as usize,
        None => aq.abs() < tol * (1.0 - q),
    };
    while !stop(aq, k) {
        let f = -aq;
        if f <= -1.0 {
            return Err(QcsError::OutsideDomainOfConvergence(format!(
                "nonpositive factor 1 - a q^k at k={k} (a={a})"
            )));
        }
        acc += f.ln_1p();
        aq *= q;
        k += 1;
        if k > 10_000_000 {
            return Err(QcsError::TruncationFailure { tail: aq.abs(), tol, terms: k });
        }
    }
    Ok(acc)
}

/// q-exponential `e_q(x)`.
///
/// Sums the series and cross-checks against the reciprocal infinite product;
/// the error estimate covers both the series tail and the observed spread
/// between the two routes. Arguments outside `|x| < 1/(1-q)` are rejected.
pub fn qexp(xi: Complex64, q: f64, trunc: Truncation) -> Result<SeriesValue> {
    check_q(q)?;
    if xi.norm() * (1.0 - q) >= 1.0 {
        return Err(QcsError::OutsideDomainOfConvergence(format!(
            "|xi| = {} >= 1/(1-q) = {}",
            xi.norm(),
            1.0 / (1.0 - q)
        )));
    }
    // series route
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut n = 0usize;
    let tail = loop {
        let ratio = xi / qnumber(n as u32 + 1, q);
        term *= ratio;
        sum += term;
        n += 1;
        let r = ratio.norm();
        if r < 1.0 {
            let bound = term.norm() * r / (1.0 - r);
            if bound < trunc.tol {
                break bound;
            }
        }
        if n >= trunc.max_terms {
            return Err(QcsError::TruncationFailure { tail: term.norm(), tol: trunc.tol, terms: n });
        }
    };
    // product route: 1/((1-q) xi; q)_inf
    let prod = qpochhammer_infinite(xi * (1.0 - q), q, trunc)?;
    let pval = prod.value.finv();
    let spread = (pval - sum).norm();
    Ok(SeriesValue {
        value: pval,
        abs_error_estimate: tail.max(spread).max(prod.abs_error_estimate * pval.norm_sqr()),
        terms_used: n + prod.terms_used,
    })
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(QcsError::InvalidDeformation(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn deformation_roundtrip() {
        let qd = QDeformation::from_q(0.5).unwrap();
        assert_relative_eq!((-2.0 * qd.kappa() * qd.kappa()).exp(), 0.5, max_relative = 1e-15);
        let qd2 = QDeformation::from_kappa(qd.kappa()).unwrap();
        assert_eq!(qd2.q(), qd.q());
        assert!(QDeformation::from_q(1.0).is_err());
        assert!(QDeformation::from_q(0.0).is_err());
        assert!(QDeformation::from_q(-0.3).is_err());
        assert!(QDeformation::from_q(1.7).is_err());
    }

    #[test]
    fn pochhammer_empty_product() {
        let v = qpochhammer(Complex64::new(0.7, 0.0), 0.5, PochhammerOrder::Finite(0)).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn pochhammer_direct_product() {
        // (0.5; 0.5)_2 = (1-0.5)(1-0.25) = 0.375
        let v = qpochhammer(Complex64::new(0.5, 0.0), 0.5, PochhammerOrder::Finite(2)).unwrap();
        assert_relative_eq!(v.value.re, 0.375, max_relative = 1e-15);
        assert_eq!(v.terms_used, 2);
        assert_eq!(v.abs_error_estimate, 0.0);
    }

    #[test]
    fn pochhammer_zero_argument_infinite() {
        let v = qpochhammer(Complex64::new(0.0, 0.0), 0.5, PochhammerOrder::Infinite).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn pochhammer_negative_order() {
        // (a;q)_{-m} (a q^{-m}; q)_m = 1
        let a = Complex64::new(0.35, 0.2);
        let q = 0.6;
        let m = 3u32;
        let neg = qpochhammer(a, q, PochhammerOrder::Finite(-(m as i64))).unwrap();
        let pos = qpochhammer_finite(a * q.powi(-(m as i32)), q, m);
        assert_relative_eq!((neg.value * pos).re, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn pochhammer_negative_order_pole() {
        // a = q^2, m = 3: factor 1 - a q^{-3} q^1 = 1 - q^0 = 0
        let q = 0.5f64;
        let a = Complex64::new(q * q, 0.0);
        assert_eq!(qpochhammer(a, q, PochhammerOrder::Finite(-3)), Err(QcsError::Pole));
    }

    #[test]
    fn coeff_recip_values() {
        assert_eq!(qcoeff_recip(0, 0.5), 1.0);
        assert_eq!(qcoeff_recip(-3, 0.5), 0.0);
        assert_relative_eq!(qcoeff_recip(2, 0.5), 1.0 / 0.375, max_relative = 1e-15);
    }

    #[test]
    fn qnumber_qfactorial_qbinomial() {
        assert_relative_eq!(qnumber(3, 0.5), 1.75, max_relative = 1e-15);
        assert_eq!(qfactorial(0, 0.77), 1.0);
        assert_relative_eq!(qbinomial(2, 1, 0.5), 1.5, max_relative = 1e-15);
        // [n]_q! = prod [k]_q
        let q = 0.37;
        let mut acc = 1.0;
        for k in 1..=9u32 {
            acc *= qnumber(k, q);
        }
        assert_relative_eq!(qfactorial(9, q), acc, max_relative = 1e-13);
    }

    #[test]
    fn qexp_trivial_and_series_oracle() {
        let one = qexp(Complex64::new(0.0, 0.0), 0.5, Truncation::default()).unwrap();
        assert_eq!(one.value, Complex64::new(1.0, 0.0));
        // independent oracle: direct partial sums of sum x^n/[n]_q!
        let q = 0.5;
        let xi = Complex64::new(1.0, 0.0);
        let mut oracle = Complex64::new(0.0, 0.0);
        for n in 0..200u32 {
            oracle += xi.powu(n) / qfactorial(n, q);
        }
        let v = qexp(xi, q, Truncation::default()).unwrap();
        assert!((v.value - oracle).norm() < 1e-14, "series oracle mismatch {}", (v.value - oracle).norm());
    }

    #[test]
    fn qexp_domain_error() {
        let q = 0.5;
        let xi = Complex64::new(2.0, 0.0); // (1-q)|xi| = 1
        assert!(matches!(qexp(xi, q, Truncation::default()), Err(QcsError::OutsideDomainOfConvergence(_))));
    }

    #[test]
    fn qexp_approaches_classical_exp() {
        let xi = Complex64::new(0.5, 0.2);
        let target = xi.exp();
        let mut prev = f64::INFINITY;
        for q in [0.9, 0.99, 0.999] {
            let v = qexp(xi, q, Truncation::default()).unwrap();
            let err = (v.value - target).norm();
            assert!(err < prev, "q={q}: err {err} not below {prev}");
            prev = err;
        }
    }

    #[test]
    fn ln_pochhammer_matches_direct() {
        let q = 0.8;
        let direct = qpochhammer_finite(Complex64::new(0.3, 0.0), q, 20).re.ln();
        let ln = ln_qpochhammer_positive(0.3, q, Some(20), 1e-15).unwrap();
        assert_relative_eq!(ln, direct, max_relative = 1e-13);
        let inf = qpochhammer_infinite(Complex64::new(q, 0.0), q, Truncation::default()).unwrap();
        let ln_inf = ln_qpochhammer_positive(q, q, None, 1e-15).unwrap();
        assert_relative_eq!(ln_inf.exp(), inf.value.re, max_relative = 1e-12);
    }

    #[test]
    fn identity_shift_splits_product() {
        // (a;q)_{n+k} = (a;q)_n (a q^n; q)_k
        let a = Complex64::new(0.4, 0.8);
        let q = 0.45;
        for (n, k) in [(0u32, 5u32), (3, 4), (7, 2)] {
            let lhs = qpochhammer_finite(a, q, n + k);
            let rhs = qpochhammer_finite(a, q, n) * qpochhammer_finite(a * q.powi(n as i32), q, k);
            assert!((lhs - rhs).norm() < 1e-13 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn multi_argument_pochhammer() {
        let q = 0.5;
        let args = [Complex64::new(0.2, 0.1), Complex64::new(-0.4, 0.3)];
        let v = qpochhammer_multi(&args, q, PochhammerOrder::Finite(4)).unwrap();
        let direct = qpochhammer_finite(args[0], q, 4) * qpochhammer_finite(args[1], q, 4);
        assert!((v.value - direct).norm() < 1e-15);
    }
}
