//! Coherent-state transforms: the q-deformed transform over `C_{q,m}` by
//! real-line quadrature, its `m = 0` specialization, and the classical
//! targets (Bargmann transform and its true-polyanalytic extension) for the
//! `q -> 1` sweeps.
//!
//! The transform of `f` at label `z` is `sqrt(N) <f, Psi_z>`. Two pairings
//! are exposed: [`Pairing::Sesquilinear`] integrates `f` against the
//! conjugated state kernel and is the convention under which the transform
//! maps `phi_j` to `Phi_j(z)` and is isometric; [`Pairing::Bilinear`]
//! integrates against the kernel itself (no conjugation). The suites record
//! which convention realizes which property.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cstates::{cs_kernel_unnormalized, PhaseSpacePoint};
use crate::error::Result;
use crate::oscillator::{pairwise_sum, QuadratureRule};
use crate::qcore::{qpochhammer_infinite, QDeformation, Truncation};
use crate::qpoly::hermite;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pairing convention for `<f, Psi_z>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    /// `int f conj(Psi_z)`: coefficient recovery and isometry hold here.
    Sesquilinear,
    /// `int f Psi_z`, no conjugation.
    Bilinear,
}

/// Argument convention for the Hermite factor of the polyanalytic Bargmann
/// transform: `H_m(xi - (z + zbar)/den)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermiteShift {
    /// `den = sqrt(2)`; the convention the q -> 1 limit actually matches.
    SqrtTwo,
    /// `den = 2`.
    Two,
}

impl HermiteShift {
    fn denominator(self) -> f64 {
        match self {
            HermiteShift::SqrtTwo => std::f64::consts::SQRT_2,
            HermiteShift::Two => 2.0,
        }
    }
}

/// Transform evaluator with the state kernel precomputed at the quadrature
/// nodes, so sweeps over many `f` at a fixed label reuse the expensive
/// Pochhammer evaluations.
pub struct CstEvaluator {
    weights: Vec<f64>,
    nodes: Vec<f64>,
    kernel: Vec<Complex64>,
}

impl CstEvaluator {
    pub fn new(p: &PhaseSpacePoint, rule: &QuadratureRule, pairing: Pairing) -> Result<Self> {
        let mut kernel = Vec::with_capacity(rule.nodes.len());
        for &x in &rule.nodes {
            let w = cs_kernel_unnormalized(p, x)?;
            kernel.push(match pairing {
                Pairing::Sesquilinear => w.conj(),
                Pairing::Bilinear => w,
            });
        }
        Ok(CstEvaluator { weights: rule.weights.clone(), nodes: rule.nodes.clone(), kernel })
    }

    /// Apply to `f` given as a real-line evaluation.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let terms: Vec<Complex64> = self
            .nodes
            .iter()
            .zip(self.weights.iter())
            .zip(self.kernel.iter())
            .map(|((&x, &w), &k)| w * k * f(x))
            .collect();
        pairwise_sum(&terms)
    }

    /// Apply to `f` pre-tabulated at the rule nodes (for sweeps where `f`
    /// is fixed and the label varies).
    pub fn apply_to_table(&self, values: &[Complex64]) -> Complex64 {
        assert_eq!(values.len(), self.nodes.len(), "table length must match the rule nodes");
        let terms: Vec<Complex64> = values
            .iter()
            .zip(self.weights.iter())
            .zip(self.kernel.iter())
            .map(|((&v, &w), &k)| w * k * v)
            .collect();
        pairwise_sum(&terms)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// Coherent-state transform `sqrt(N) <f, Psi_z>` by quadrature.
pub fn cst(
    f: impl Fn(f64) -> Complex64,
    p: &PhaseSpacePoint,
    rule: &QuadratureRule,
    pairing: Pairing,
) -> Result<Complex64> {
    Ok(CstEvaluator::new(p, rule, pairing)?.apply(f))
}

/// The `m = 0` transform, written out directly:
/// kernel `pi^{-1/4} e^{-xi^2/2} / ((-i zbar sqrt(1-q) e^{2 i kappa xi}; q)_inf
/// (i zbar sqrt(q(1-q)); q)_inf)`, conjugated for the sesquilinear pairing.
pub fn cst0(
    f: impl Fn(f64) -> Complex64,
    z: Complex64,
    qd: &QDeformation,
    rule: &QuadratureRule,
    pairing: Pairing,
) -> Result<Complex64> {
    let p = PhaseSpacePoint::new(z, 0, *qd)?;
    p.check_domain()?;
    let q = qd.q();
    let kappa = qd.kappa();
    let zb = z.conj();
    let fixed = qpochhammer_infinite(I * zb * (q * (1.0 - q)).sqrt(), q, Truncation::default())?.value;
    let terms: Vec<Complex64> = rule
        .nodes
        .iter()
        .zip(rule.weights.iter())
        .map(|(&xi, &w)| {
            let osc = qpochhammer_infinite(
                -I * zb * (1.0 - q).sqrt() * (2.0 * I * kappa * xi).exp(),
                q,
                Truncation::default(),
            )
            .expect("argument inside the unit disk on C_q")
            .value;
            let kern = PI.powf(-0.25) * (-xi * xi / 2.0).exp() / (osc * fixed);
            let kern = match pairing {
                Pairing::Sesquilinear => kern.conj(),
                Pairing::Bilinear => kern,
            };
            w * kern * f(xi)
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Classical Bargmann transform
/// `pi^{-1/4} int exp(-xi^2/2 + sqrt(2) xi z - z^2/2) f(xi) dxi`.
pub fn bargmann_classical(
    f: impl Fn(f64) -> Complex64,
    z: Complex64,
    rule: &QuadratureRule,
) -> Complex64 {
    let terms: Vec<Complex64> = rule
        .nodes
        .iter()
        .zip(rule.weights.iter())
        .map(|(&xi, &w)| {
            w * PI.powf(-0.25)
                * (-xi * xi / 2.0 + std::f64::consts::SQRT_2 * xi * z - z * z / 2.0).exp()
                * f(xi)
        })
        .collect();
    pairwise_sum(&terms)
}

/// True-polyanalytic Bargmann transform of order `m`:
/// `(-1)^m (2^m m! sqrt(pi))^{-1/2}
///  int e^{-z^2/2 - xi^2/2 + sqrt(2) xi z} H_m(xi - (z+zbar)/den) f(xi) dxi`.
pub fn polyanalytic_bargmann(
    f: impl Fn(f64) -> Complex64,
    z: Complex64,
    m: u32,
    rule: &QuadratureRule,
    shift: HermiteShift,
) -> Complex64 {
    let den = shift.denominator();
    let mfact = (1..=m).fold(1.0f64, |acc, k| acc * k as f64);
    let norm = (-1.0f64).powi(m as i32) / (2.0f64.powi(m as i32) * mfact * PI.sqrt()).sqrt();
    let s = (z + z.conj()).re / den;
    let terms: Vec<Complex64> = rule
        .nodes
        .iter()
        .zip(rule.weights.iter())
        .map(|(&xi, &w)| {
            w * (-z * z / 2.0 - xi * xi / 2.0 + std::f64::consts::SQRT_2 * xi * z).exp()
                * hermite(m, Complex64::new(xi - s, 0.0))
                * f(xi)
        })
        .collect();
    norm * pairwise_sum(&terms)
}

/// Squared norm `int_C |F(z)|^2 pi^{-1} e^{-|z|^2} dA(z)` by a polar grid:
/// Gauss-Legendre in the radius and trapezoid in the angle.
pub fn gaussian_plane_norm_sq(
    f: impl Fn(Complex64) -> Complex64,
    radial_points: usize,
    angular_points: usize,
    r_max: f64,
) -> f64 {
    // map GL nodes from [-1,1] to [0, r_max]
    let (gx, gw) = crate::oscillator::gauss_legendre_pair(radial_points);
    let mut total = 0.0;
    for (&x, &w) in gx.iter().zip(gw.iter()) {
        let r = 0.5 * r_max * (x + 1.0);
        let wr = 0.5 * r_max * w;
        let mut ang = 0.0;
        for k in 0..angular_points {
            let theta = 2.0 * PI * k as f64 / angular_points as f64;
            ang += f(Complex64::from_polar(r, theta)).norm_sqr();
        }
        ang /= angular_points as f64;
        total += wr * ang * (-r * r).exp() * r * 2.0;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstates::coeff_phi;
    use crate::oscillator::rs_eigenfunction;
    use crate::qpoly::hermite as hermite_poly;

    fn qd(q: f64) -> QDeformation {
        QDeformation::from_q(q).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hermite_fn(j: u32) -> impl Fn(f64) -> Complex64 {
        let fact = (1..=j).fold(1.0f64, |acc, k| acc * k as f64);
        let norm = (PI.sqrt() * 2.0f64.powi(j as i32) * fact).sqrt().recip();
        move |xi| norm * hermite_poly(j, c(xi, 0.0)) * (-xi * xi / 2.0).exp()
    }

    #[test]
    fn bargmann_maps_hermite_functions_to_monomials() {
        let d = qd(0.5);
        let rule = QuadratureRule::build(&d, 8, 0, 1e-12).unwrap();
        let z = c(0.7, -0.4);
        for j in 0..=6u32 {
            let fact = (1..=j).fold(1.0f64, |acc, k| acc * k as f64);
            let got = bargmann_classical(hermite_fn(j), z, &rule);
            let want = z.powu(j) / fact.sqrt();
            assert!((got - want).norm() < 1e-10, "j={j}: {}", (got - want).norm());
        }
        // zero function maps to zero, z=0 on h_0 gives 1
        assert_eq!(bargmann_classical(|_| c(0.0, 0.0), z, &rule), c(0.0, 0.0));
        let one = bargmann_classical(hermite_fn(0), c(0.0, 0.0), &rule);
        assert!((one - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn polyanalytic_reduces_to_bargmann_at_m0() {
        let d = qd(0.5);
        let rule = QuadratureRule::build(&d, 8, 0, 1e-12).unwrap();
        let z = c(0.3, 0.6);
        for j in [0u32, 1, 3] {
            let a = polyanalytic_bargmann(hermite_fn(j), z, 0, &rule, HermiteShift::SqrtTwo);
            let b = bargmann_classical(hermite_fn(j), z, &rule);
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn polyanalytic_m1_of_ground_state_is_zbar() {
        let d = qd(0.5);
        let rule = QuadratureRule::build(&d, 8, 0, 1e-12).unwrap();
        for z in [c(0.4, 0.2), c(-0.3, 0.7)] {
            let got = polyanalytic_bargmann(hermite_fn(0), z, 1, &rule, HermiteShift::SqrtTwo);
            assert!((got - z.conj()).norm() < 1e-11, "z={z}");
        }
    }

    #[test]
    fn polyanalytic_isometry_on_low_modes() {
        let d = qd(0.5);
        let rule = QuadratureRule::build(&d, 8, 0, 1e-12).unwrap();
        for m in [1u32, 2] {
            for j in [0u32, 1] {
                let n2 = gaussian_plane_norm_sq(
                    |z| polyanalytic_bargmann(hermite_fn(j), z, m, &rule, HermiteShift::SqrtTwo),
                    60,
                    48,
                    6.0,
                );
                assert!((n2 - 1.0).abs() < 1e-5, "m={m} j={j}: {n2}");
            }
        }
    }

    #[test]
    fn cst_m0_equals_cst0() {
        let d = qd(0.5);
        let rule = QuadratureRule::build(&d, 8, 0, 1e-11).unwrap();
        let z = c(0.35, -0.5);
        let p = PhaseSpacePoint::new(z, 0, d).unwrap();
        for pairing in [Pairing::Sesquilinear, Pairing::Bilinear] {
            for j in [0u32, 2] {
                let a = cst(hermite_fn(j), &p, &rule, pairing).unwrap();
                let b = cst0(hermite_fn(j), z, &d, &rule, pairing).unwrap();
                assert!((a - b).norm() < 1e-12, "{pairing:?} j={j}: {}", (a - b).norm());
            }
        }
    }

    #[test]
    fn sesquilinear_cst_recovers_coefficients() {
        let d = qd(0.5);
        let rule = QuadratureRule::build(&d, 8, 4, 1e-11).unwrap();
        for m in 0..=2u32 {
            let z = c(0.28, -0.2);
            let p = PhaseSpacePoint::new(z, m, d).unwrap();
            let ev = CstEvaluator::new(&p, &rule, Pairing::Sesquilinear).unwrap();
            for j in 0..=4u32 {
                let got = ev.apply(|xi| rs_eigenfunction(j, c(xi, 0.0), &d));
                let want = coeff_phi(j, &p);
                assert!(
                    (got - want).norm() < 1e-9,
                    "m={m} j={j}: {}",
                    (got - want).norm()
                );
                // the conjugate target only coincides where Phi_j is real
                if j != m {
                    assert!((got - want.conj()).norm() > 1e-3);
                }
            }
        }
    }

    #[test]
    fn cst_linearity_at_fixed_nodes() {
        let d = qd(0.4);
        let rule = QuadratureRule::build(&d, 6, 2, 1e-10).unwrap();
        let p = PhaseSpacePoint::new(c(0.25, 0.15), 1, d).unwrap();
        let ev = CstEvaluator::new(&p, &rule, Pairing::Sesquilinear).unwrap();
        let (a, b) = (c(0.7, -0.3), c(-0.2, 1.1));
        let f = hermite_fn(1);
        let g = hermite_fn(3);
        let lhs = ev.apply(|x| a * f(x) + b * g(x));
        let rhs = a * ev.apply(&f) + b * ev.apply(&g);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn cst0_approaches_classical_bargmann() {
        let z = c(0.4, 0.3);
        for j in [1u32, 2] {
            let mut prev = f64::INFINITY;
            for q in [0.9, 0.99, 0.999] {
                let d = qd(q);
                let rule = QuadratureRule::build(&d, 6, 0, 1e-11).unwrap();
                let target = bargmann_classical(hermite_fn(j), z, &rule);
                let got = cst0(hermite_fn(j), z, &d, &rule, Pairing::Sesquilinear).unwrap();
                let err = (got - target).norm();
                assert!(err < prev, "j={j} q={q}: {err} !< {prev}");
                prev = err;
            }
        }
    }

    #[test]
    fn cst_approaches_polyanalytic_bargmann_with_sqrt2_shift() {
        let z = c(0.35, 0.2);
        for (m, j) in [(1u32, 1u32), (2, 0)] {
            let mut prev = f64::INFINITY;
            let mut prev_two = f64::INFINITY;
            let mut two_decreased = true;
            for q in [0.9, 0.99, 0.999] {
                let d = qd(q);
                let rule = QuadratureRule::build(&d, 6, m, 1e-11).unwrap();
                let p = PhaseSpacePoint::new(z, m, d).unwrap();
                let got = cst(hermite_fn(j), &p, &rule, Pairing::Sesquilinear).unwrap();
                let t_sqrt2 = polyanalytic_bargmann(hermite_fn(j), z, m, &rule, HermiteShift::SqrtTwo);
                let t_two = polyanalytic_bargmann(hermite_fn(j), z, m, &rule, HermiteShift::Two);
                let err = (got - t_sqrt2).norm();
                assert!(err < prev, "m={m} j={j} q={q}");
                prev = err;
                let err_two = (got - t_two).norm();
                two_decreased &= err_two < prev_two && err_two < 0.5 * err.max(1e-12);
                prev_two = err_two;
            }
            assert!(!two_decreased, "the den=2 convention should not win the sweep");
        }
    }
}
