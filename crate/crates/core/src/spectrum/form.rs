use crate::graph::MetricGraph;

use super::assembly::{assemble_forms, FormAssembly};
use super::{Mesh, SpectrumError};

/// A continuous piecewise-linear function on each edge, given by nodal values.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalFunction {
    /// Values at the nodes of each edge, `elements + 1` per edge.
    pub values: Vec<Vec<f64>>,
}

impl NodalFunction {
    /// Interpolates `f(edge index, x)` with `x ∈ [0, ℓ_e]` at the mesh nodes.
    pub fn interpolate(graph: &MetricGraph, mesh: &Mesh, f: impl Fn(usize, f64) -> f64) -> Self {
        let values = graph
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| mesh.node_coordinates(e).into_iter().map(|x| f(i, x)).collect())
            .collect();
        NodalFunction { values }
    }

    pub fn constant(graph: &MetricGraph, mesh: &Mesh, c: f64) -> Self {
        Self::interpolate(graph, mesh, |_, _| c)
    }

    fn flatten(&self, asm: &FormAssembly) -> Result<Vec<f64>, SpectrumError> {
        let mut x = vec![0.0; asm.dof_count];
        if self.values.len() != asm.edges.len() {
            return Err(SpectrumError::InvalidMesh("function has the wrong number of edges".into()));
        }
        for (e, vals) in asm.edges.iter().zip(&self.values) {
            if vals.len() != e.elements + 1 {
                return Err(SpectrumError::InvalidMesh("function does not match the mesh".into()));
            }
            x[e.first()..=e.last()].copy_from_slice(vals);
        }
        Ok(x)
    }
}

fn checked_vector(graph: &MetricGraph, mesh: &Mesh, f: &NodalFunction) -> Result<(FormAssembly, Vec<f64>), SpectrumError> {
    let asm = assemble_forms(graph, mesh);
    let x = f.flatten(&asm)?;
    let size = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for row in &asm.constraints {
        let r: f64 = row.entries.iter().map(|&(d, c)| c * x[d]).sum();
        if r.abs() > 1e-10 * (1.0 + size) {
            return Err(SpectrumError::ConstraintViolation { residual: r.abs() });
        }
    }
    Ok((asm, x))
}

/// ∫|f′|² plus the vertex terms of the graph's conditions.
pub fn quadratic_form_value(graph: &MetricGraph, mesh: &Mesh, f: &NodalFunction) -> Result<f64, SpectrumError> {
    let (asm, x) = checked_vector(graph, mesh, f)?;
    Ok(form_value(&asm, &x))
}

/// Form value divided by the squared L² norm.
pub fn rayleigh_quotient(graph: &MetricGraph, mesh: &Mesh, f: &NodalFunction) -> Result<f64, SpectrumError> {
    let (asm, x) = checked_vector(graph, mesh, f)?;
    let mut norm = 0.0;
    for e in &asm.edges {
        let h = e.element_length;
        for j in e.first()..e.last() {
            let (a, b) = (x[j], x[j + 1]);
            norm += h / 3.0 * (a * a + a * b + b * b);
        }
    }
    Ok(form_value(&asm, &x) / norm)
}

fn form_value(asm: &FormAssembly, x: &[f64]) -> f64 {
    let mut total = 0.0;
    for e in &asm.edges {
        let h = e.element_length;
        for j in e.first()..e.last() {
            let d = x[j + 1] - x[j];
            total += d * d / h;
        }
    }
    for t in &asm.vertex_terms {
        let s: f64 = t.dofs.iter().map(|&d| x[d]).sum();
        total += t.coefficient * s * s;
    }
    total
}
