//! Polynomial families: Wall, Rogers-Szego, Stieltjes-Wigert, Al-Salam-Chihara,
//! 2D q-Hermite, and the classical limits (Hermite, Laguerre, 2D complex
//! Hermite). Degrees stay at desk scale (~30), so everything is a direct
//! finite sum; the lattice-sensitive sums run on double-double scalars.

use num_complex::Complex64;

use crate::dd::{Dd, DdComplex};
use crate::error::{QcsError, Result};
use crate::qcore::{check_q, qbinomial, qfactorial, qpochhammer_finite};
use crate::qseries::phi21_terminating;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Wall polynomial `P_n(x; a | q) = 2phi1(q^{-n}, 0; aq; q, qx)`.
pub fn wall(n: u32, x: Complex64, a: Complex64, q: f64) -> Result<Complex64> {
    phi21_terminating(n, C_ZERO, a * q, q, x * q).map_err(|e| match e {
        QcsError::DenominatorPole(msg) => QcsError::InvalidWallParameter(msg),
        other => other,
    })
}

/// Wall polynomial through the reduced representation
/// `((x q^{1-n}; q)_n / (aq; q)_n) 2phi1(q^{-n}, 0; x q^{1-n}; q, a q^{n+1})`.
///
/// Same value as [`wall`]; kept as an independent evaluation path.
pub fn wall_reduced(n: u32, x: Complex64, a: Complex64, q: f64) -> Result<Complex64> {
    check_q(q)?;
    let xq = x * q.powi(1 - n as i32);
    let den = qpochhammer_finite(a * q, q, n);
    if den == C_ZERO {
        return Err(QcsError::InvalidWallParameter(format!("(aq;q)_{n} vanishes for a = {a}")));
    }
    let phi = phi21_terminating(n, C_ZERO, xq, q, a * q.powi(n as i32 + 1)).map_err(|e| match e {
        QcsError::DenominatorPole(msg) => QcsError::InvalidWallParameter(msg),
        other => other,
    })?;
    Ok(qpochhammer_finite(xq, q, n) / den * phi)
}

/// The regularized product `(aq;q)_n P_n(x; a | q)`, entire in `a`:
/// `sum_k ((q^{-n};q)_k/(q;q)_k) (qx)^k (a q^{k+1}; q)_{n-k}`.
///
/// Stays finite where `P_n` itself has a parameter pole (`aq = q^{-k}`),
/// which is how identities at `a = q^{-N}` are checked numerically.
pub fn wall_regularized(n: u32, x: Complex64, a: Complex64, q: f64) -> Complex64 {
    let qd = Dd::from_f64(q);
    let qinv = qd.recip();
    let ad = DdComplex::from_c64(a);
    let qx = DdComplex::from_c64(x).mul_dd(qd);
    let mut coeff = DdComplex::ONE; // (q^{-n};q)_k / (q;q)_k * (qx)^k
    let mut sum = DdComplex::ZERO;
    for k in 0..=n {
        // (a q^{k+1}; q)_{n-k}
        let mut tail = DdComplex::ONE;
        let mut aq = ad.mul_dd(qd.powi(k + 1));
        for _ in 0..(n - k) {
            tail = tail.mul(DdComplex::ONE.sub(aq));
            aq = aq.mul_dd(qd);
        }
        sum = sum.add(coeff.mul(tail));
        if k < n {
            let fac = DdComplex::new(Dd::ONE.sub(qinv.powi(n - k)), Dd::ZERO);
            let den = Dd::ONE.sub(qd.powi(k + 1));
            coeff = coeff.mul(fac).mul(qx);
            coeff = DdComplex::new(coeff.re.div(den), coeff.im.div(den));
        }
    }
    sum.to_c64()
}

/// [`wall_regularized`] specialized to `a = q^{-npow}`, with every factor
/// `1 - q^{k+1-npow+i}` built from its integer exponent so the structural
/// zeros (exponent 0) are exact rather than rounded. This is the form the
/// parameter-inversion identity is checked in.
pub fn wall_regularized_neg_power(n: u32, x: Complex64, npow: u32, q: f64) -> Complex64 {
    let qd = Dd::from_f64(q);
    let qinv = qd.recip();
    let pow = |e: i64| -> Dd {
        if e >= 0 {
            qd.powi(e as u32)
        } else {
            qinv.powi((-e) as u32)
        }
    };
    let qx = DdComplex::from_c64(x).mul_dd(qd);
    let mut coeff = DdComplex::ONE;
    let mut sum = DdComplex::ZERO;
    for k in 0..=n {
        let mut tail = Dd::ONE;
        let mut vanished = false;
        for i in 0..(n - k) {
            let e = k as i64 + 1 - npow as i64 + i as i64;
            if e == 0 {
                vanished = true;
                break;
            }
            tail = tail.mul(Dd::ONE.sub(pow(e)));
        }
        if !vanished {
            sum = sum.add(coeff.mul_dd(tail));
        }
        if k < n {
            let fac = DdComplex::new(Dd::ONE.sub(qinv.powi(n - k)), Dd::ZERO);
            let den = Dd::ONE.sub(qd.powi(k + 1));
            coeff = coeff.mul(fac).mul(qx);
            coeff = DdComplex::new(coeff.re.div(den), coeff.im.div(den));
        }
    }
    sum.to_c64()
}

/// Rogers-Szego polynomial `H_n(xi; q) = sum_k [n choose k]_q (q^{-1/2} xi)^k`.
pub fn rogers_szego(n: u32, xi: Complex64, q: f64) -> Complex64 {
    let t = xi * q.powf(-0.5);
    let mut coeff = 1.0f64; // [n choose k]_q
    let mut power = C_ONE;
    let mut sum = C_ZERO;
    for k in 0..=n {
        sum += coeff * power;
        if k < n {
            coeff *= (1.0 - q.powi((n - k) as i32)) / (1.0 - q.powi(k as i32 + 1));
            power *= t;
        }
    }
    sum
}

/// Stieltjes-Wigert polynomial `s_n(x; q) = sum_k [n choose k]_q q^{k^2} x^k`.
pub fn stieltjes_wigert(n: u32, x: Complex64, q: f64) -> Complex64 {
    let mut sum = C_ZERO;
    for k in 0..=n {
        sum += qbinomial(n, k, q) * q.powi((k * k) as i32) * x.powu(k);
    }
    sum
}

/// `s_n(x; q^{-1})` evaluated through base-q arithmetic:
/// `[n,k]_{1/q} (1/q)^{k^2} = [n,k]_q q^{-nk}`, so the sum is
/// `sum_k [n choose k]_q q^{-nk} x^k`. Connected to Rogers-Szego by
/// `s_n(x; q^{-1}) = H_n(x q^{1/2-n}; q)`.
pub fn stieltjes_wigert_recip_base(n: u32, x: Complex64, q: f64) -> Complex64 {
    let mut sum = C_ZERO;
    for k in 0..=n {
        sum += qbinomial(n, k, q) * q.powi(-((n * k) as i32)) * x.powu(k);
    }
    sum
}

/// Al-Salam-Chihara polynomial `Q_m(x; alpha, beta | q)` with
/// `x = (u + u^{-1})/2`, parameterized by `u`.
///
/// Evaluated by expanding the defining terminating 3phi2 term-by-term as a
/// polynomial in `alpha` (every Pochhammer factor is linear in `alpha`), then
/// cancelling the `alpha^{-m}` prefactor by an exponent shift. No division by
/// `alpha` or by `(alpha beta; q)_k` occurs, so `alpha = 0`, `beta = 0` and
/// the removable degeneracies `alpha beta = q^{-k}` are ordinary inputs: the
/// value is a polynomial in `x`, `alpha`, `beta`.
pub fn al_salam_chihara(m: u32, u: Complex64, alpha: Complex64, beta: Complex64, q: f64) -> Result<Complex64> {
    check_q(q)?;
    if u == C_ZERO {
        return Err(QcsError::InvalidWallParameter("Al-Salam-Chihara requires u != 0".into()));
    }
    let qd = Dd::from_f64(q);
    let qinv = qd.recip();
    let ud = DdComplex::from_c64(u);
    let uinv = DdComplex::ONE.div(ud);
    let bd = DdComplex::from_c64(beta);
    // accumulate coefficients of alpha^p, p = 0..2m, of
    //   sum_k c_k (alpha u; q)_k (alpha/u; q)_k (alpha beta q^k; q)_{m-k}
    let deg = 2 * m as usize;
    let mut acc = vec![DdComplex::ZERO; deg + 1];
    let mut c_k = DdComplex::ONE; // (q^{-m};q)_k q^k / (q;q)_k
    let mut work = vec![DdComplex::ZERO; deg + 1];
    for k in 0..=m {
        work.iter_mut().for_each(|w| *w = DdComplex::ZERO);
        work[0] = c_k;
        let mut top = 0usize;
        // multiply by the linear factors (1 - gamma alpha)
        let mul_linear = |work: &mut Vec<DdComplex>, top: &mut usize, gamma: DdComplex| {
            *top += 1;
            for p in (1..=*top).rev() {
                let shifted = work[p - 1].mul(gamma);
                work[p] = work[p].sub(shifted);
            }
        };
        for i in 0..k {
            mul_linear(&mut work, &mut top, ud.mul_dd(qd.powi(i)));
            mul_linear(&mut work, &mut top, uinv.mul_dd(qd.powi(i)));
        }
        for i in 0..(m - k) {
            mul_linear(&mut work, &mut top, bd.mul_dd(qd.powi(k + i)));
        }
        for p in 0..=top {
            acc[p] = acc[p].add(work[p]);
        }
        if k < m {
            let fac = DdComplex::new(Dd::ONE.sub(qinv.powi(m - k)), Dd::ZERO).mul_dd(qd);
            let den = Dd::ONE.sub(qd.powi(k + 1));
            c_k = c_k.mul(fac);
            c_k = DdComplex::new(c_k.re.div(den), c_k.im.div(den));
        }
    }
    // alpha^{-m}: powers below m cancel algebraically; evaluate the rest by Horner
    let ad = DdComplex::from_c64(alpha);
    let mut val = DdComplex::ZERO;
    for p in (m as usize..=deg).rev() {
        val = val.mul(ad).add(acc[p]);
    }
    Ok(val.to_c64())
}

/// 2D q-deformed complex Hermite polynomial
/// `H_{m,j}(z, zeta | q) = sum_k [m,k]_q [j,k]_q (-1)^k q^{k(k-1)/2} (q;q)_k z^{m-k} zeta^{j-k}`.
pub fn qhermite2d(m: u32, j: u32, z: Complex64, zeta: Complex64, q: f64) -> Complex64 {
    let top = m.min(j);
    let mut sum = C_ZERO;
    let mut sign = 1.0f64;
    for k in 0..=top {
        let c = qbinomial(m, k, q) * qbinomial(j, k, q) * q.powi((k * k.saturating_sub(1) / 2) as i32)
            * qpochhammer_finite(Complex64::new(q, 0.0), q, k).re;
        sum += sign * c * z.powu(m - k) * zeta.powu(j - k);
        sign = -sign;
    }
    sum
}

/// Scale-normalized form whose q->1 limit is the classical 2D Hermite
/// polynomial: `H_{m,j}(sqrt(1-q) z, sqrt(1-q) zeta | q) / (1-q)^{(m+j)/2}
/// = sum_k [m,k]_q [j,k]_q (-1)^k q^{k(k-1)/2} [k]_q! z^{m-k} zeta^{j-k}`.
pub fn qhermite2d_rescaled(m: u32, j: u32, z: Complex64, zeta: Complex64, q: f64) -> Complex64 {
    let top = m.min(j);
    let mut sum = C_ZERO;
    let mut sign = 1.0f64;
    for k in 0..=top {
        let c = qbinomial(m, k, q) * qbinomial(j, k, q) * q.powi((k * k.saturating_sub(1) / 2) as i32)
            * qfactorial(k, q);
        sum += sign * c * z.powu(m - k) * zeta.powu(j - k);
        sign = -sign;
    }
    sum
}

fn fact(n: u32) -> f64 {
    (1..=n).fold(1.0f64, |acc, k| acc * k as f64)
}

fn binom(n: u32, k: u32) -> f64 {
    fact(n) / (fact(k) * fact(n - k))
}

/// Classical Hermite polynomial
/// `H_n(xi) = n! sum_k (-1)^k (2 xi)^{n-2k} / (k! (n-2k)!)`.
pub fn hermite(n: u32, xi: Complex64) -> Complex64 {
    let mut sum = C_ZERO;
    let mut sign = 1.0f64;
    for k in 0..=(n / 2) {
        sum += sign / (fact(k) * fact(n - 2 * k)) * (2.0 * xi).powu(n - 2 * k);
        sign = -sign;
    }
    fact(n) * sum
}

/// Laguerre polynomial `L_m^{(0)}(x) = sum_k (-1)^k C(m,k) x^k / k!`.
pub fn laguerre0(m: u32, x: Complex64) -> Complex64 {
    let mut sum = C_ZERO;
    let mut sign = 1.0f64;
    for k in 0..=m {
        sum += sign * binom(m, k) / fact(k) * x.powu(k);
        sign = -sign;
    }
    sum
}

/// Classical 2D complex Hermite polynomial
/// `H_{m,j}(z, zeta) = sum_k (-1)^k k! C(m,k) C(j,k) z^{m-k} zeta^{j-k}`.
pub fn complex_hermite(m: u32, j: u32, z: Complex64, zeta: Complex64) -> Complex64 {
    let top = m.min(j);
    let mut sum = C_ZERO;
    let mut sign = 1.0f64;
    for k in 0..=top {
        sum += sign * fact(k) * binom(m, k) * binom(j, k) * z.powu(m - k) * zeta.powu(j - k);
        sign = -sign;
    }
    sum
}
