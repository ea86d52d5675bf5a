//! Basic hypergeometric series 2phi1 and 3phi2.
//!
//! Terminating series (a numerator parameter equal to `q^{-n}`) are summed
//! exactly over `n+1` terms on double-double scalars: near `z = q` the terms
//! reach `~q^{-n(n-1)/2}` while the sum stays O(1), which plain f64 cannot
//! resolve at the certified tolerances. Convergent non-terminating series
//! require `|z| < 1` and run in f64 with a geometric tail bound.
//!
//! Term recursion updates every Pochhammer factor incrementally, one multiply
//! per parameter per term.

use num_complex::Complex64;

use crate::dd::{Dd, DdComplex};
use crate::error::{QcsError, Result};
use crate::qcore::{check_q, SeriesValue, Truncation};

/// Classify `p` as `q^{-n}` for some `0 <= n <= 10^4`, within relative
/// tolerance 1e-10. Floating-point parameters never match exactly, so callers
/// that know `n` should use the `*_terminating` entry points instead.
pub fn as_negative_q_power(p: Complex64, q: f64, n_max: u32) -> Option<u32> {
    if p.re <= 0.0 || p.im.abs() > 1e-10 * p.norm() {
        return None;
    }
    let n = (-p.re.ln() / q.ln()).round();
    if !(0.0..=n_max as f64).contains(&n) {
        return None;
    }
    let n = n as u32;
    let target = q.powi(-(n as i32));
    if (p.re - target).abs() <= 1e-10 * target && p.im.abs() <= 1e-10 * target {
        Some(n)
    } else {
        None
    }
}

/// Check whether a denominator parameter `c` hits `q^{-m}` with `m` below the
/// summation length, which zeroes a factor of `(c;q)_k`.
fn denominator_pole(c: Complex64, q: f64, terms: Option<u32>) -> Option<u32> {
    let m = as_negative_q_power(c, q, 10_000)?;
    match terms {
        Some(n) if m >= n => None,
        _ => Some(m),
    }
}

/// Terminating `2phi1(q^{-n}, b; c; q, z)`, summed exactly over `n+1` terms.
pub fn phi21_terminating(n: u32, b: Complex64, c: Complex64, q: f64, z: Complex64) -> Result<Complex64> {
    check_q(q)?;
    if let Some(m) = denominator_pole(c, q, Some(n)) {
        return Err(QcsError::DenominatorPole(format!("c = q^-{m} with m < n = {n}")));
    }
    let qd = Dd::from_f64(q);
    let zd = DdComplex::from_c64(z);
    let bd = DdComplex::from_c64(b);
    let cd = DdComplex::from_c64(c);
    let mut sum = DdComplex::ONE;
    let mut term = DdComplex::ONE;
    let qinv = qd.recip();
    // factor (1 - q^{k-n}) computed as 1 - q^{-(n-k)} to stay exact in dd
    for k in 0..n {
        let a_fac = DdComplex::new(Dd::ONE.sub(qinv.powi(n - k)), Dd::ZERO);
        let qk = qd.powi(k);
        let b_fac = DdComplex::ONE.sub(bd.mul_dd(qk));
        let c_fac = DdComplex::ONE.sub(cd.mul_dd(qk));
        let q_fac = DdComplex::new(Dd::ONE.sub(qd.powi(k + 1)), Dd::ZERO);
        term = term.mul(a_fac).mul(b_fac).mul(zd).div(c_fac.mul(q_fac));
        sum = sum.add(term);
    }
    Ok(sum.to_c64())
}

/// Terminating `3phi2(q^{-n}, a2, a3; b1, b2; q, z)` over `n+1` terms.
///
/// A zero denominator parameter contributes factor 1 via `(0;q)_k = 1`.
pub fn phi32_terminating(
    n: u32,
    a2: Complex64,
    a3: Complex64,
    b1: Complex64,
    b2: Complex64,
    q: f64,
    z: Complex64,
) -> Result<Complex64> {
    check_q(q)?;
    for b in [b1, b2] {
        if let Some(m) = denominator_pole(b, q, Some(n)) {
            return Err(QcsError::DenominatorPole(format!("denominator = q^-{m} with m < n = {n}")));
        }
    }
    let qd = Dd::from_f64(q);
    let zd = DdComplex::from_c64(z);
    let a2d = DdComplex::from_c64(a2);
    let a3d = DdComplex::from_c64(a3);
    let b1d = DdComplex::from_c64(b1);
    let b2d = DdComplex::from_c64(b2);
    let mut sum = DdComplex::ONE;
    let mut term = DdComplex::ONE;
    let qinv = qd.recip();
    for k in 0..n {
        let qk = qd.powi(k);
        let a_fac = DdComplex::new(Dd::ONE.sub(qinv.powi(n - k)), Dd::ZERO);
        let num = a_fac
            .mul(DdComplex::ONE.sub(a2d.mul_dd(qk)))
            .mul(DdComplex::ONE.sub(a3d.mul_dd(qk)))
            .mul(zd);
        let den = DdComplex::ONE
            .sub(b1d.mul_dd(qk))
            .mul(DdComplex::ONE.sub(b2d.mul_dd(qk)))
            .mul(DdComplex::new(Dd::ONE.sub(qd.powi(k + 1)), Dd::ZERO));
        term = term.mul(num).div(den);
        sum = sum.add(term);
    }
    Ok(sum.to_c64())
}

/// `2phi1(a, b; c; q, z)` with automatic termination detection.
///
/// If `a` or `b` matches `q^{-n}` the terminating path is used (exact term
/// count, zero tail estimate); otherwise the series must converge, `|z| < 1`.
pub fn phi21(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    q: f64,
    z: Complex64,
    trunc: Truncation,
) -> Result<SeriesValue> {
    check_q(q)?;
    let term_n = as_negative_q_power(a, q, 10_000).or_else(|| as_negative_q_power(b, q, 10_000));
    if let Some(n) = term_n {
        // route the terminating parameter to the first slot exactly
        let other = if as_negative_q_power(a, q, 10_000) == Some(n) { b } else { a };
        let v = phi21_terminating(n, other, c, q, z)?;
        return Ok(SeriesValue::exact(v, n as usize + 1));
    }
    if z.norm() >= 1.0 {
        return Err(QcsError::DivergentSeries(z.norm()));
    }
    if let Some(m) = denominator_pole(c, q, None) {
        return Err(QcsError::DenominatorPole(format!("c = q^-{m} in non-terminating series")));
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut qk = 1.0f64;
    let mut k = 0usize;
    loop {
        let ratio = ((1.0 - a * qk) * (1.0 - b * qk)) / ((1.0 - c * qk) * (1.0 - q * qk)) * z;
        term *= ratio;
        sum += term;
        qk *= q;
        k += 1;
        // future ratios tend to |z|; bound with the current worst case
        let rho = (1.0 + a.norm() * qk) * (1.0 + b.norm() * qk) * z.norm()
            / (((1.0 - c.norm() * qk).max(1e-3)) * (1.0 - q * qk));
        if rho < 1.0 {
            let tail = term.norm() * rho / (1.0 - rho);
            if tail < trunc.tol {
                return Ok(SeriesValue { value: sum, abs_error_estimate: tail, terms_used: k });
            }
        }
        if k >= trunc.max_terms {
            return Err(QcsError::TruncationFailure { tail: term.norm(), tol: trunc.tol, terms: k });
        }
    }
}

/// `3phi2(a1, a2, a3; b1, b2; q, z)` with automatic termination detection.
pub fn phi32(
    a1: Complex64,
    a2: Complex64,
    a3: Complex64,
    b1: Complex64,
    b2: Complex64,
    q: f64,
    z: Complex64,
    trunc: Truncation,
) -> Result<SeriesValue> {
    check_q(q)?;
    let candidates = [a1, a2, a3];
    let hit = candidates
        .iter()
        .enumerate()
        .find_map(|(i, &p)| as_negative_q_power(p, q, 10_000).map(|n| (i, n)));
    if let Some((i, n)) = hit {
        let rest: Vec<Complex64> =
            (0..3).filter(|&j| j != i).map(|j| candidates[j]).collect();
        let v = phi32_terminating(n, rest[0], rest[1], b1, b2, q, z)?;
        return Ok(SeriesValue::exact(v, n as usize + 1));
    }
    if z.norm() >= 1.0 {
        return Err(QcsError::DivergentSeries(z.norm()));
    }
    for b in [b1, b2] {
        if let Some(m) = denominator_pole(b, q, None) {
            return Err(QcsError::DenominatorPole(format!("denominator = q^-{m} in non-terminating series")));
        }
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut qk = 1.0f64;
    let mut k = 0usize;
    loop {
        let num = (1.0 - a1 * qk) * (1.0 - a2 * qk) * (1.0 - a3 * qk);
        let den = (1.0 - b1 * qk) * (1.0 - b2 * qk) * (1.0 - q * qk);
        term *= num / den * z;
        sum += term;
        qk *= q;
        k += 1;
        let rho = (1.0 + a1.norm() * qk) * (1.0 + a2.norm() * qk) * (1.0 + a3.norm() * qk) * z.norm()
            / (((1.0 - b1.norm() * qk).max(1e-3)) * ((1.0 - b2.norm() * qk).max(1e-3)) * (1.0 - q * qk));
        if rho < 1.0 {
            let tail = term.norm() * rho / (1.0 - rho);
            if tail < trunc.tol {
                return Ok(SeriesValue { value: sum, abs_error_estimate: tail, terms_used: k });
            }
        }
        if k >= trunc.max_terms {
            return Err(QcsError::TruncationFailure { tail: term.norm(), tol: trunc.tol, terms: k });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::qpochhammer_finite;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn detection_accepts_exact_powers() {
        let q = 0.5f64;
        assert_eq!(as_negative_q_power(c(1.0, 0.0), q, 100), Some(0));
        assert_eq!(as_negative_q_power(c(q.powi(-7), 0.0), q, 100), Some(7));
        assert_eq!(as_negative_q_power(c(q.powi(-7) * (1.0 + 1e-8), 0.0), q, 100), None);
        assert_eq!(as_negative_q_power(c(0.3, 0.0), q, 100), None);
        assert_eq!(as_negative_q_power(c(2.0, 0.5), q, 100), None);
    }

    #[test]
    fn unit_numerator_parameter_collapses_series() {
        // a = q^0 = 1 makes (1;q)_k vanish for k >= 1
        let q = 0.4f64;
        let v = phi21(c(1.0, 0.0), c(0.3, 0.1), c(0.2, 0.0), q, c(0.9, 0.0), Truncation::default()).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
        assert_eq!(v.abs_error_estimate, 0.0);
    }

    #[test]
    fn terminating_counts_exact_terms() {
        let q = 0.5f64;
        let v = phi21(c(q.powi(-4), 0.0), c(0.3, 0.2), c(-0.4, 0.1), q, c(2.7, 1.1), Truncation::default()).unwrap();
        assert_eq!(v.terms_used, 5);
        assert_eq!(v.abs_error_estimate, 0.0);
    }

    #[test]
    fn q_chu_vandermonde_evaluation() {
        // 2phi1(q^{-n}, b; c; q, q) = (c/b;q)_n b^n / (c;q)_n
        let q = 0.5f64;
        for n in [1u32, 3, 6, 8] {
            let b = c(0.8, 0.5);
            let cc = c(-0.6, 0.9);
            let lhs = phi21_terminating(n, b, cc, q, c(q, 0.0)).unwrap();
            let rhs = qpochhammer_finite(cc / b, q, n) * b.powu(n) / qpochhammer_finite(cc, q, n);
            assert!(
                (lhs - rhs).norm() / rhs.norm() < 1e-12,
                "n={n}: rel residual {}",
                (lhs - rhs).norm() / rhs.norm()
            );
        }
    }

    #[test]
    fn wall_first_degree_via_phi21() {
        // 2phi1(q^{-1}, 0; aq; q, qx) = 1 - x/(1-aq)
        let q = 0.35;
        let a = c(0.4, -0.2);
        let x = c(0.7, 0.3);
        let v = phi21_terminating(1, ZERO, a * q, q, x * q).unwrap();
        let expect = 1.0 - x / (1.0 - a * q);
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn nonterminating_matches_q_binomial_theorem() {
        // 1phi0 embedded: 2phi1(a, 0-as-b with c=0?) -- use b=0, c=0:
        // sum (a;q)_k z^k/(q;q)_k = (az;q)_inf/(z;q)_inf
        let q = 0.5f64;
        let a = c(0.3, 0.4);
        let z = c(0.5, -0.2);
        let v = phi21(a, ZERO, ZERO, q, z, Truncation::default()).unwrap();
        let rhs = crate::qcore::qpochhammer_infinite(a * z, q, Truncation::default()).unwrap().value
            / crate::qcore::qpochhammer_infinite(z, q, Truncation::default()).unwrap().value;
        assert!((v.value - rhs).norm() < 1e-12);
    }

    #[test]
    fn divergent_series_rejected() {
        let q = 0.5f64;
        let r = phi21(c(0.3, 0.0), c(0.4, 0.0), c(0.5, 0.0), q, c(1.2, 0.0), Truncation::default());
        assert!(matches!(r, Err(QcsError::DivergentSeries(_))));
    }

    #[test]
    fn denominator_pole_rejected() {
        let q = 0.5f64;
        // c = q^{-2} while terminating index is 5
        let r = phi21_terminating(5, c(0.3, 0.0), c(q.powi(-2), 0.0), q, c(0.4, 0.0));
        assert!(matches!(r, Err(QcsError::DenominatorPole(_))));
        // pole beyond the termination index is harmless
        assert!(phi21_terminating(2, c(0.3, 0.0), c(q.powi(-2), 0.0), q, c(0.4, 0.0)).is_ok());
    }

    #[test]
    fn phi32_trivial_and_zero_denominator() {
        let q = 0.5f64;
        let v = phi32(c(1.0, 0.0), c(0.2, 0.0), c(0.4, 0.0), c(0.3, 0.0), ZERO, q, c(0.9, 0.0), Truncation::default()).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
        // (0;q)_k = 1 in the denominator: finite everywhere
        let v = phi32_terminating(3, c(0.2, 0.1), c(-0.3, 0.4), c(0.25, 0.0), ZERO, q, c(q, 0.0)).unwrap();
        assert!(v.is_finite());
    }

    #[test]
    fn finite_heine_transformation() {
        let q = 0.5f64;
        let (xi, be, ga, ta) = (c(0.7, -0.3), c(0.4, 0.6), c(-0.8, 0.2), c(0.9, 0.33));
        for n in [1u32, 2, 4, 6] {
            let lhs = phi32_terminating(n, xi, be, ga, c(q.powi(1 - n as i32), 0.0) / ta, q, c(q, 0.0)).unwrap();
            let rhs = qpochhammer_finite(xi * ta, q, n) / qpochhammer_finite(ta, q, n)
                * phi32_terminating(n, ga / be, xi, ga, xi * ta, q, be * ta * q.powi(n as i32)).unwrap();
            assert!(
                (lhs - rhs).norm() / rhs.norm().max(1.0) < 1e-13,
                "n={n}: {}",
                (lhs - rhs).norm()
            );
        }
    }
}
