//! Verification suites: every identity, orthogonality relation, equivalence
//! and classical-limit statement the library certifies, runnable individually
//! or all at once, emitting structured [`VerificationReport`]s.
//!
//! Case generation is seeded (splitmix64) and case evaluation is pure, so a
//! report is a deterministic function of (suite, settings, seed). Cases run
//! in parallel; each case's arithmetic is single-threaded with fixed
//! summation order, and reports are assembled in canonical parameter order,
//! so output bytes do not depend on the worker count.

mod rng;
mod report;
mod suites;

pub use report::{CaseResult, ReportSettings, Summary, VerificationReport, SCHEMA_VERSION};
pub use rng::SplitMix64;

/// The available suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    QIdentities,
    WallOrthogonality,
    CoeffOrthonormality,
    RsOrthonormality,
    Ladder,
    Hamiltonian,
    WavefunctionClosedVsSeries,
    KernelThreeForms,
    Reproducing,
    LimitsQ1,
    TransformIsometry,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::QIdentities,
        Suite::WallOrthogonality,
        Suite::CoeffOrthonormality,
        Suite::RsOrthonormality,
        Suite::Ladder,
        Suite::Hamiltonian,
        Suite::WavefunctionClosedVsSeries,
        Suite::KernelThreeForms,
        Suite::Reproducing,
        Suite::LimitsQ1,
        Suite::TransformIsometry,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::QIdentities => "qidentities",
            Suite::WallOrthogonality => "wall-orthogonality",
            Suite::CoeffOrthonormality => "coeff-orthonormality",
            Suite::RsOrthonormality => "rs-orthonormality",
            Suite::Ladder => "ladder",
            Suite::Hamiltonian => "hamiltonian",
            Suite::WavefunctionClosedVsSeries => "wavefunction-closed-vs-series",
            Suite::KernelThreeForms => "kernel-three-forms",
            Suite::Reproducing => "reproducing",
            Suite::LimitsQ1 => "limits-q1",
            Suite::TransformIsometry => "transform-isometry",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|s| s.name() == name)
    }
}

/// Suite parameters. Defaults: `q_list = [0.3, 0.5, 0.8]`, `m_max = 4`,
/// `j_max = 8`, `seed = 7`.
#[derive(Clone, Debug)]
pub struct SuiteSettings {
    pub q_list: Vec<f64>,
    pub m_max: u32,
    pub j_max: u32,
    pub seed: u64,
    /// Include wall-clock timing in the summary (off by default so identical
    /// runs produce byte-identical reports).
    pub timings: bool,
}

impl Default for SuiteSettings {
    fn default() -> Self {
        SuiteSettings { q_list: vec![0.3, 0.5, 0.8], m_max: 4, j_max: 8, seed: 7, timings: false }
    }
}

impl SuiteSettings {
    pub(crate) fn report_settings(&self) -> ReportSettings {
        ReportSettings { q_list: self.q_list.clone(), m_max: self.m_max, j_max: self.j_max }
    }
}

/// Run one suite. Honors `QCS_THREADS` as a cap on worker threads.
pub fn run_suite(suite: Suite, settings: &SuiteSettings) -> VerificationReport {
    let started = std::time::Instant::now();
    let cases = with_thread_cap(|| match suite {
        Suite::QIdentities => suites::identities::run(settings),
        Suite::WallOrthogonality => suites::orthogonality::run_wall(settings),
        Suite::CoeffOrthonormality => suites::orthogonality::run_coeff(settings),
        Suite::RsOrthonormality => suites::oscillator::run_orthonormality(settings),
        Suite::Ladder => suites::oscillator::run_ladder(settings),
        Suite::Hamiltonian => suites::oscillator::run_hamiltonian(settings),
        Suite::WavefunctionClosedVsSeries => suites::states::run(settings),
        Suite::KernelThreeForms => suites::kernels::run_three_forms(settings),
        Suite::Reproducing => suites::kernels::run_reproducing(settings),
        Suite::LimitsQ1 => suites::limits::run(settings),
        Suite::TransformIsometry => suites::transforms::run(settings),
    });
    let elapsed = settings.timings.then(|| started.elapsed().as_millis() as u64);
    VerificationReport::assemble(suite.name(), settings.seed, settings.report_settings(), cases, elapsed)
}

/// Run every suite in declaration order.
pub fn run_all(settings: &SuiteSettings) -> Vec<VerificationReport> {
    Suite::ALL.iter().map(|s| run_suite(*s, settings)).collect()
}

fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    match std::env::var("QCS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
            .install(f),
        _ => f(),
    }
}

/// Relative residual scaled by the larger of the operands and 1.
pub(crate) fn rel_residual(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}
