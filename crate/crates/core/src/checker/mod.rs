//! Numeric verification of interlacing inequalities, bounds and spectral
//! relations on random instances, with discretization-aware verdicts.

mod interlacing;
mod random;
mod relations;
mod suite;
mod verdict;

pub use interlacing::*;
pub use random::{random_graph, random_graph_with, random_strength, Family, GenerateError, GraphParams, Sign};
pub use relations::*;
pub use suite::{
    check_ids, run_check, run_suite, CheckReport, InstanceReport, StatusCounts, SuiteConfig, SuiteError,
    SuiteOverride, SuiteRanges, SuiteReport, WorstCase,
};
pub use verdict::{check_chain, check_eq, check_eq_within, check_le, check_le_exact, Estimate, Status, Verdict};

use crate::bounds::BoundError;
use crate::graph::{GraphError, MetricGraph};
use crate::spectrum::{solve_spectrum_with, Mesh, SolveOptions, Spectrum, SpectrumError};
use crate::surgery::SurgeryError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CheckError {
    #[error("vertex '{0}' does not carry a delta-prime or anti-standard condition")]
    NotDeltaPrime(String),
    #[error("vertex '{0}' does not carry a delta or standard condition")]
    NotDelta(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
}

/// Mesh, index range and solver options shared by the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckContext {
    pub elements_per_edge: usize,
    pub k_max: usize,
    pub options: SolveOptions,
}

impl CheckContext {
    pub fn new(elements_per_edge: usize, k_max: usize) -> Self {
        CheckContext {
            elements_per_edge,
            k_max,
            options: SolveOptions::default(),
        }
    }

    pub fn doubled(&self) -> Self {
        CheckContext {
            elements_per_edge: 2 * self.elements_per_edge,
            ..self.clone()
        }
    }

    /// The `k` lowest eigenvalues of `g`.
    pub fn spectrum(&self, g: &MetricGraph, k: usize) -> Result<Spectrum, CheckError> {
        let mesh = Mesh::uniform(self.elements_per_edge)?;
        Ok(solve_spectrum_with(g, &mesh, k, &self.options)?)
    }
}

/// `lambda_k(name)`, as used in verdict relations.
pub(crate) fn label(name: &str, k: usize) -> String {
    format!("lambda_{k}({name})")
}

/// `lambda_a(x) <= lambda_b(y)` as a verdict.
pub(crate) fn compare(x: (&str, &Spectrum, usize), y: (&str, &Spectrum, usize)) -> Verdict {
    check_le(
        format!("{} <= {}", label(x.0, x.2), label(y.0, y.2)),
        Estimate::eigenvalue(x.1, x.2),
        Estimate::eigenvalue(y.1, y.2),
    )
}

/// Whether `a <= b` holds beyond the error budget, for hypotheses of the checked inequalities.
pub(crate) fn surely_le(a: Estimate, b: Estimate) -> bool {
    let floor = 1e-9 * (1.0 + a.value.abs().max(b.value.abs()));
    a.value + a.error + floor <= b.value - b.error
}

/// Smallest `k` with `λ_k ≥ 0` up to the tie floor.
pub(crate) fn first_nonnegative(s: &Spectrum) -> Option<usize> {
    s.eigenvalues
        .iter()
        .position(|&x| x >= -1e-9 * (1.0 + x.abs()))
        .map(|i| i + 1)
}
