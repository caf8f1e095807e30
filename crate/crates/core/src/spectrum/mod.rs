//! Variational eigenvalues of graph Laplacians with linear finite elements.

mod assembly;
mod dense;
mod form;
mod mesh;
mod sturm;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::graph::MetricGraph;

pub use assembly::{
    assemble_forms, assemble_forms_with, ConstraintRow, EdgeDofs, EndpointBasis, Fault, FormAssembly,
    VertexTerm,
};
pub use dense::{constrained_basis, dense_eigenvalues};
pub use form::{quadratic_form_value, rayleigh_quotient, NodalFunction};
pub use mesh::Mesh;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectrumError {
    #[error("k_max must be at least 1")]
    KMaxZero,
    #[error("k_max = {k_max} exceeds the {dofs} degrees of freedom of the constrained space")]
    KMaxExceedsDofs { k_max: usize, dofs: usize },
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("λ = {lambda} is not below the largest computed eigenvalue {limit}")]
    LambdaBeyondComputedRange { lambda: f64, limit: f64 },
    #[error("function violates a vertex constraint (residual {residual:e})")]
    ConstraintViolation { residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SolveMethod {
    /// Inertia counting with bisection; linear cost in the number of elements.
    #[default]
    Bisection,
    /// Dense generalized eigenproblem; cubic cost, kept as a reference.
    Dense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub method: SolveMethod,
    /// Relative cluster tolerance: λ_i and λ_j share a cluster when |λ_i − λ_j| < tol·(1 + |λ|).
    pub cluster_tolerance: f64,
    #[doc(hidden)]
    pub fault: Option<Fault>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: SolveMethod::Bisection,
            cluster_tolerance: 1e-9,
            fault: None,
        }
    }
}

/// Lowest eigenvalues with error estimates from a two-mesh comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Eigenvalues on the refined mesh, ascending.
    pub eigenvalues: Vec<f64>,
    /// |λ_k(n) − λ_k(2n)| / 3 for each k.
    pub error_estimates: Vec<f64>,
    /// Groups of 1-based indices of numerically equal eigenvalues, singletons included.
    pub clusters: Vec<Vec<usize>>,
    pub cluster_tolerance: f64,
    /// Coarse element count n; the eigenvalues come from 2n.
    pub elements_per_edge: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshDocument {
    pub elements_per_edge: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumDocument {
    pub eigenvalues: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub clusters: Vec<Vec<usize>>,
    pub mesh: MeshDocument,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// λ_k with 1-based k.
    pub fn eigenvalue(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.eigenvalues.get(i).copied())
    }

    /// Error estimate of λ_k with 1-based k.
    pub fn error(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.error_estimates.get(i).copied())
    }

    pub fn to_document(&self) -> SpectrumDocument {
        SpectrumDocument {
            eigenvalues: self.eigenvalues.clone(),
            error_estimates: self.error_estimates.clone(),
            clusters: self.clusters.clone(),
            mesh: MeshDocument {
                elements_per_edge: self.elements_per_edge,
            },
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("spectrum documents always serialise")
    }
}

/// Absolute eigenvalue scale (π/L)² of a graph.
pub fn natural_scale(graph: &MetricGraph) -> f64 {
    let l = graph.total_length();
    (PI / l).powi(2)
}

/// Lowest `k_max` eigenvalues of the discrete problem on one mesh.
pub fn discrete_eigenvalues(
    graph: &MetricGraph,
    mesh: &Mesh,
    k_max: usize,
    options: &SolveOptions,
) -> Result<Vec<f64>, SpectrumError> {
    if k_max == 0 {
        return Err(SpectrumError::KMaxZero);
    }
    let asm = assemble_forms_with(graph, mesh, options.fault);
    match options.method {
        SolveMethod::Bisection => {
            let counter = sturm::PencilCounter::new(&asm);
            let dofs = counter.reduced_dimension();
            if k_max > dofs {
                return Err(SpectrumError::KMaxExceedsDofs { k_max, dofs });
            }
            Ok(counter.lowest(k_max, natural_scale(graph)))
        }
        SolveMethod::Dense => {
            let dofs = asm.reduced_dimension();
            if k_max > dofs {
                return Err(SpectrumError::KMaxExceedsDofs { k_max, dofs });
            }
            let mut all = dense_eigenvalues(&asm)?;
            all.truncate(k_max);
            Ok(all)
        }
    }
}

pub fn solve_spectrum(graph: &MetricGraph, mesh: &Mesh, k_max: usize) -> Result<Spectrum, SpectrumError> {
    solve_spectrum_with(graph, mesh, k_max, &SolveOptions::default())
}

/// Solves on `mesh` and on its refinement; reports the refined values.
pub fn solve_spectrum_with(
    graph: &MetricGraph,
    mesh: &Mesh,
    k_max: usize,
    options: &SolveOptions,
) -> Result<Spectrum, SpectrumError> {
    let coarse = discrete_eigenvalues(graph, mesh, k_max, options)?;
    let fine = discrete_eigenvalues(graph, &mesh.refined(), k_max, options)?;
    for (k, (c, f)) in coarse.iter().zip(&fine).enumerate() {
        if *f > *c + 1e-9 * (1.0 + c.abs()) {
            log::warn!("refinement raised λ_{} from {c} to {f}", k + 1);
        }
    }
    let error_estimates = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (c - f).abs() / 3.0)
        .collect();
    let clusters = clusters(&fine, options.cluster_tolerance);
    Ok(Spectrum {
        eigenvalues: fine,
        error_estimates,
        clusters,
        cluster_tolerance: options.cluster_tolerance,
        elements_per_edge: mesh.default_elements(),
    })
}

/// Groups consecutive eigenvalues closer than `tol·(1 + |λ|)`; indices are 1-based.
pub fn clusters(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(group) if i > 0 && (v - values[i - 1]).abs() < tol * (1.0 + v.abs()) => {
                group.push(i + 1)
            }
            _ => out.push(vec![i + 1]),
        }
    }
    out
}

/// Number of computed eigenvalues not exceeding `lambda`.
pub fn counting_function(spectrum: &Spectrum, lambda: f64) -> Result<usize, SpectrumError> {
    let limit = spectrum.eigenvalues.last().copied().unwrap_or(f64::NEG_INFINITY);
    if !(lambda < limit) {
        return Err(SpectrumError::LambdaBeyondComputedRange { lambda, limit });
    }
    Ok(spectrum.eigenvalues.iter().filter(|&&x| x <= lambda).count())
}
