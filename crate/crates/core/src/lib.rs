//! Numerics for generalized q-deformed coherent states built on the
//! Rogers-Szego oscillator.
//!
//! The crate provides, layer by layer:
//! - [`qcore`]: q-Pochhammer symbols, q-numbers/factorials/binomials and the
//!   q-exponential, in complex double precision with controlled truncation
//! - [`qseries`]: basic hypergeometric series 2phi1 and 3phi2, terminating
//!   and convergent
//! - [`qpoly`]: Wall, Rogers-Szego, Stieltjes-Wigert, Al-Salam-Chihara and
//!   2D q-Hermite polynomials plus their classical limits
//! - [`oscillator`]: the q-oscillator eigenfunctions, shift-operator ladder
//!   and Hamiltonian realizations, energies, and real-line quadrature
//! - [`cstates`]: the coherent-state coefficient system, normalization,
//!   wavefunctions (series and closed form), and the discrete radial measure
//! - [`kernels`]: reproducing kernels in series, intermediate and closed
//!   form, plus the classical limit kernel
//! - [`transforms`]: the coherent-state transform, its m = 0 specialization,
//!   and the classical (polyanalytic) Bargmann transforms
//! - [`verify`]: seeded verification suites emitting structured JSON reports
//!
//! Everything is a pure function of its arguments; all entry points are safe
//! for concurrent use. Where terminating hypergeometric sums cancel below
//! f64 resolution (lattice-edge Wall values, the 2phi1 evaluation at z = q),
//! summation runs on double-double scalars internally and rounds once.

pub mod cstates;
mod dd;
pub mod error;
pub mod kernels;
pub mod oscillator;
pub mod qcore;
pub mod qpoly;
pub mod qseries;
pub mod transforms;
pub mod verify;

pub use error::{QcsError, Result};
pub use qcore::{PochhammerOrder, QDeformation, SeriesValue, Truncation};
