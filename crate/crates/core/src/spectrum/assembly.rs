use nalgebra::{DMatrix, SymmetricEigen};

use crate::graph::{End, MetricGraph, VertexCondition};

use super::Mesh;

/// Test-only corruption of the assembled forms, used to check that the checker notices.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Fault {
    FlipDeltaPrimeSign,
}

/// Degrees of freedom of one edge: nodal values `offset ..= offset + elements`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDofs {
    pub edge: usize,
    pub offset: usize,
    pub elements: usize,
    pub element_length: f64,
}

impl EdgeDofs {
    pub fn first(&self) -> usize {
        self.offset
    }

    pub fn last(&self) -> usize {
        self.offset + self.elements
    }

    pub fn endpoint(&self, end: End) -> usize {
        match end {
            End::From => self.first(),
            End::To => self.last(),
        }
    }
}

/// `coefficient · (Σ_{d ∈ dofs} x_d)²` added to the stiffness form.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexTerm {
    pub vertex: usize,
    pub coefficient: f64,
    pub dofs: Vec<usize>,
}

/// One linear constraint `Σ c_i x_i = 0` on endpoint values.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintRow {
    pub vertex: usize,
    pub entries: Vec<(usize, f64)>,
}

/// Piecewise-linear discretisation of the quadratic form of a graph.
///
/// Endpoint values of different edges at a vertex are separate unknowns;
/// continuity, balance and Dirichlet conditions enter as constraint rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FormAssembly {
    pub dof_count: usize,
    pub edges: Vec<EdgeDofs>,
    /// Endpoint unknowns at each vertex, in `endpoints_at` order.
    pub vertex_dofs: Vec<Vec<usize>>,
    pub vertex_terms: Vec<VertexTerm>,
    pub constraints: Vec<ConstraintRow>,
}

/// Orthonormal basis of the constrained endpoint space.
#[derive(Debug, Clone)]
pub struct EndpointBasis {
    /// All endpoint unknowns, grouped by vertex.
    pub dofs: Vec<usize>,
    /// `dofs.len() × dim` matrix with orthonormal columns spanning the null space of the constraints.
    pub z: DMatrix<f64>,
    pub dropped_rows: usize,
}

pub fn assemble_forms(graph: &MetricGraph, mesh: &Mesh) -> FormAssembly {
    assemble_forms_with(graph, mesh, None)
}

#[doc(hidden)]
pub fn assemble_forms_with(graph: &MetricGraph, mesh: &Mesh, fault: Option<Fault>) -> FormAssembly {
    let mut offset = 0;
    let edges: Vec<EdgeDofs> = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let n = mesh.elements_for(e);
            let d = EdgeDofs {
                edge: i,
                offset,
                elements: n,
                element_length: e.length / n as f64,
            };
            offset += n + 1;
            d
        })
        .collect();
    let mut vertex_dofs = Vec::with_capacity(graph.vertex_count());
    let mut vertex_terms = Vec::new();
    let mut constraints = Vec::new();
    for v in 0..graph.vertex_count() {
        let dofs: Vec<usize> = graph
            .endpoints_at(v)
            .into_iter()
            .map(|p| edges[p.edge].endpoint(p.end))
            .collect();
        let continuity = |rows: &mut Vec<ConstraintRow>| {
            for &d in &dofs[1.min(dofs.len())..] {
                rows.push(ConstraintRow {
                    vertex: v,
                    entries: vec![(dofs[0], 1.0), (d, -1.0)],
                });
            }
        };
        match graph.condition(v) {
            VertexCondition::Standard => continuity(&mut constraints),
            VertexCondition::Delta(alpha) => {
                continuity(&mut constraints);
                if let Some(&d0) = dofs.first() {
                    vertex_terms.push(VertexTerm {
                        vertex: v,
                        coefficient: alpha,
                        dofs: vec![d0],
                    });
                }
            }
            VertexCondition::Dirichlet => {
                for &d in &dofs {
                    constraints.push(ConstraintRow {
                        vertex: v,
                        entries: vec![(d, 1.0)],
                    });
                }
            }
            VertexCondition::Neumann => {}
            VertexCondition::AntiStandard => {
                if !dofs.is_empty() {
                    constraints.push(ConstraintRow {
                        vertex: v,
                        entries: dofs.iter().map(|&d| (d, 1.0)).collect(),
                    });
                }
            }
            VertexCondition::DeltaPrime(alpha) => {
                let sign = if fault == Some(Fault::FlipDeltaPrimeSign) { -1.0 } else { 1.0 };
                vertex_terms.push(VertexTerm {
                    vertex: v,
                    coefficient: sign / alpha,
                    dofs: dofs.clone(),
                });
            }
        }
        vertex_dofs.push(dofs);
    }
    FormAssembly {
        dof_count: offset,
        edges,
        vertex_dofs,
        vertex_terms,
        constraints,
    }
}

impl FormAssembly {
    /// Dense stiffness matrix including the vertex terms.
    pub fn stiffness(&self) -> DMatrix<f64> {
        let mut k = DMatrix::zeros(self.dof_count, self.dof_count);
        for e in &self.edges {
            let s = 1.0 / e.element_length;
            for j in 0..e.elements {
                let (a, b) = (e.offset + j, e.offset + j + 1);
                k[(a, a)] += s;
                k[(b, b)] += s;
                k[(a, b)] -= s;
                k[(b, a)] -= s;
            }
        }
        for t in &self.vertex_terms {
            for &i in &t.dofs {
                for &j in &t.dofs {
                    k[(i, j)] += t.coefficient;
                }
            }
        }
        k
    }

    /// Dense consistent mass matrix.
    pub fn mass(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dof_count, self.dof_count);
        for e in &self.edges {
            let h = e.element_length;
            for j in 0..e.elements {
                let (a, b) = (e.offset + j, e.offset + j + 1);
                m[(a, a)] += h / 3.0;
                m[(b, b)] += h / 3.0;
                m[(a, b)] += h / 6.0;
                m[(b, a)] += h / 6.0;
            }
        }
        m
    }

    pub fn constraint_matrix(&self) -> DMatrix<f64> {
        let mut c = DMatrix::zeros(self.constraints.len(), self.dof_count);
        for (r, row) in self.constraints.iter().enumerate() {
            for &(d, v) in &row.entries {
                c[(r, d)] += v;
            }
        }
        c
    }

    /// Null space of the constraints restricted to endpoint unknowns, built vertex by vertex.
    pub fn endpoint_basis(&self) -> EndpointBasis {
        let mut dofs = Vec::new();
        let mut blocks = Vec::new();
        let mut dropped_rows = 0;
        for (v, vd) in self.vertex_dofs.iter().enumerate() {
            let rows: Vec<&ConstraintRow> =
                self.constraints.iter().filter(|r| r.vertex == v).collect();
            let d = vd.len();
            let block = if rows.is_empty() {
                DMatrix::identity(d, d)
            } else {
                let mut c = DMatrix::zeros(rows.len(), d);
                for (r, row) in rows.iter().enumerate() {
                    for &(dof, val) in &row.entries {
                        let local = vd.iter().position(|&x| x == dof).expect("endpoint dof");
                        c[(r, local)] += val;
                    }
                }
                let (basis, rank) = null_space(&c);
                if rank < rows.len() {
                    log::warn!(
                        "dropping {} redundant constraint rows at vertex {v}",
                        rows.len() - rank
                    );
                    dropped_rows += rows.len() - rank;
                }
                basis
            };
            dofs.extend_from_slice(vd);
            blocks.push(block);
        }
        let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
        let mut z = DMatrix::zeros(dofs.len(), cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            z.view_mut((r0, c0), (b.nrows(), b.ncols())).copy_from(&b);
            r0 += b.nrows();
            c0 += b.ncols();
        }
        EndpointBasis {
            dofs,
            z,
            dropped_rows,
        }
    }

    /// Dimension of the constrained discrete space.
    pub fn reduced_dimension(&self) -> usize {
        let interior: usize = self.edges.iter().map(|e| e.elements - 1).sum();
        interior + self.endpoint_basis().z.ncols()
    }
}

/// Orthonormal null space of a small matrix and its numerical rank.
fn null_space(c: &DMatrix<f64>) -> (DMatrix<f64>, usize) {
    let gram = c.transpose() * c;
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let tol = 1e-12 * top.max(f64::MIN_POSITIVE);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let nullity = order.iter().filter(|&&i| eig.eigenvalues[i] <= tol).count();
    let rank = c.ncols() - nullity;
    let mut z = DMatrix::zeros(c.ncols(), nullity);
    for (j, &i) in order.iter().take(nullity).enumerate() {
        z.set_column(j, &eig.eigenvectors.column(i));
    }
    (z, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn interval(a: VertexCondition, b: VertexCondition) -> MetricGraph {
        GraphBuilder::new()
            .vertex("a", a)
            .vertex("b", b)
            .edge("e", "a", "b", 1.0)
            .build()
            .unwrap()
    }

    #[test]
    fn neumann_interval_has_no_rows_or_terms() {
        let f = assemble_forms(
            &interval(VertexCondition::Neumann, VertexCondition::Neumann),
            &Mesh::uniform(4).unwrap(),
        );
        assert!(f.constraints.is_empty());
        assert!(f.vertex_terms.is_empty());
        assert_eq!(f.dof_count, 5);
    }

    #[test]
    fn anti_standard_pendant_is_single_zero_row() {
        let f = assemble_forms(
            &interval(VertexCondition::AntiStandard, VertexCondition::Neumann),
            &Mesh::uniform(4).unwrap(),
        );
        assert_eq!(f.constraints.len(), 1);
        assert_eq!(f.constraints[0].entries, vec![(0, 1.0)]);
    }

    #[test]
    fn delta_prime_loop_term_has_both_ends() {
        let g = GraphBuilder::new()
            .vertex("v", VertexCondition::DeltaPrime(2.0))
            .edge("l", "v", "v", 1.0)
            .build()
            .unwrap();
        let f = assemble_forms(&g, &Mesh::uniform(3).unwrap());
        assert_eq!(f.vertex_terms.len(), 1);
        assert_eq!(f.vertex_terms[0].dofs, vec![0, 3]);
        assert_eq!(f.vertex_terms[0].coefficient, 0.5);
        let k = f.stiffness();
        assert!((k[(0, 3)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matrices_are_symmetric_and_mass_positive() {
        let g = GraphBuilder::new()
            .vertex("v", VertexCondition::Delta(-1.5))
            .vertex("w", VertexCondition::DeltaPrime(0.7))
            .edge("a", "v", "w", 1.0)
            .edge("b", "v", "w", 0.5)
            .edge("c", "w", "w", 2.0)
            .build()
            .unwrap();
        let f = assemble_forms(&g, &Mesh::uniform(5).unwrap());
        let k = f.stiffness();
        let m = f.mass();
        assert_eq!(k, k.transpose());
        assert_eq!(m, m.transpose());
        assert!(m.clone().cholesky().is_some());
        let basis = f.endpoint_basis();
        let c = f.constraint_matrix();
        let mut full = DMatrix::zeros(f.dof_count, basis.z.ncols());
        for (r, &d) in basis.dofs.iter().enumerate() {
            full.set_row(d, &basis.z.row(r));
        }
        assert!((c * &full).amax() < 1e-12);
        let gram = full.transpose() * &full;
        assert!((gram - DMatrix::identity(basis.z.ncols(), basis.z.ncols())).amax() < 1e-12);
    }
}
