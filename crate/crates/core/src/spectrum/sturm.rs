//! Eigenvalues of the reduced pencil by inertia counting and bisection.
//!
//! For a shift σ the number of eigenvalues below σ equals the number of
//! negative eigenvalues of A − σB. Interior unknowns of each edge form a
//! tridiagonal block, split by the reversal symmetry of the edge and eliminated
//! with LDLᵀ recurrences; what remains is a small matrix on the constrained
//! endpoint space whose inertia is read off a dense symmetric eigendecomposition.

use nalgebra::{DMatrix, SymmetricEigen};

use super::assembly::FormAssembly;

struct EdgeBlock {
    interior: usize,
    h: f64,
    p0: usize,
    pn: usize,
}

pub(crate) struct PencilCounter {
    edges: Vec<EdgeBlock>,
    z: DMatrix<f64>,
    reduced_vertex_form: DMatrix<f64>,
    reduced_dim: usize,
}

/// One endpoint combination of an edge after folding. When the last interior
/// pivot is small its node is kept in the reduced system, which avoids a huge
/// rank-one term that would swamp the small eigenvalues of the reduced matrix.
#[derive(Debug, Clone, Copy)]
enum Branch {
    Eliminated(f64),
    Kept { end: f64, coupling: f64, pivot: f64 },
}

/// Ratio above which an eliminated pole term counts as huge.
const KEEP_RATIO: f64 = 1e3;

/// Both endpoint combinations of one edge (symmetric, antisymmetric) plus the
/// number of negative interior pivots already accounted for. The interior
/// block commutes with reversal, so it folds into two tridiagonal blocks whose
/// poles never mix.
fn edge_schur(e: &EdgeBlock, sigma: f64) -> (Branch, Branch, usize) {
    let h = e.h;
    let a = 2.0 / h - sigma * (4.0 * h / 6.0);
    let b = -1.0 / h - sigma * (h / 6.0);
    let end = 1.0 / h - sigma * (2.0 * h / 6.0);
    let m = e.interior;
    if m == 0 {
        return (Branch::Eliminated(end + b), Branch::Eliminated(end - b), 0);
    }
    let pivmin = f64::MIN_POSITIVE * (1.0 + b * b);
    let mut negatives = 0;
    // Eliminates from the middle toward the first folded node, which couples
    // to the endpoint combination with `coupling`.
    let mut branch = |dim: usize, last_diag: f64, last_off: f64, coupling: f64| -> Branch {
        if dim == 0 {
            return Branch::Eliminated(end);
        }
        let mut d = last_diag;
        for i in 0..dim {
            if i > 0 {
                if d < 0.0 {
                    negatives += 1;
                }
                let off = if i == 1 { last_off } else { b };
                d = a - off * off / d;
            }
            if d.abs() < pivmin {
                d = -pivmin;
            }
        }
        let pole = coupling * coupling / d;
        if pole.abs() > KEEP_RATIO * (end.abs() + coupling.abs()) {
            Branch::Kept { end, coupling, pivot: d }
        } else {
            if d < 0.0 {
                negatives += 1;
            }
            Branch::Eliminated(end - pole)
        }
    };
    let sqrt2 = std::f64::consts::SQRT_2;
    let (plus, minus) = if m % 2 == 1 {
        let c = (m + 1) / 2;
        if c == 1 {
            (branch(1, a, b, sqrt2 * b), branch(0, a, b, b))
        } else {
            (branch(c, a, sqrt2 * b, b), branch(c - 1, a, b, b))
        }
    } else {
        let half = m / 2;
        (branch(half, a + b, b, b), branch(half, a - b, b, b))
    };
    (plus, minus, negatives)
}

fn add_outer(m: &mut DMatrix<f64>, w: &[f64], s: f64) {
    for (i, &wi) in w.iter().enumerate() {
        if wi == 0.0 {
            continue;
        }
        for (j, &wj) in w.iter().enumerate() {
            m[(i, j)] += s * wi * wj;
        }
    }
}

impl PencilCounter {
    pub fn new(asm: &FormAssembly) -> Self {
        let basis = asm.endpoint_basis();
        let m = basis.dofs.len();
        let local = |dof: usize| {
            basis
                .dofs
                .iter()
                .position(|&d| d == dof)
                .expect("endpoint dof")
        };
        let edges: Vec<EdgeBlock> = asm
            .edges
            .iter()
            .map(|e| EdgeBlock {
                interior: e.elements - 1,
                h: e.element_length,
                p0: local(e.first()),
                pn: local(e.last()),
            })
            .collect();
        let mut vertex_form = DMatrix::zeros(m, m);
        for t in &asm.vertex_terms {
            for &i in &t.dofs {
                for &j in &t.dofs {
                    vertex_form[(local(i), local(j))] += t.coefficient;
                }
            }
        }
        let interior: usize = edges.iter().map(|e| e.interior).sum();
        let reduced_dim = interior + basis.z.ncols();
        let reduced_vertex_form = basis.z.transpose() * &vertex_form * &basis.z;
        PencilCounter {
            edges,
            z: basis.z,
            reduced_vertex_form,
            reduced_dim,
        }
    }

    pub fn reduced_dimension(&self) -> usize {
        self.reduced_dim
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        let mut negatives = 0;
        let r = self.z.ncols();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut eliminated = self.reduced_vertex_form.clone();
        let mut kept: Vec<(Vec<f64>, f64, f64)> = Vec::new();
        for e in &self.edges {
            let (plus, minus, n) = edge_schur(e, sigma);
            negatives += n;
            for (branch, sign) in [(plus, 1.0), (minus, -1.0)] {
                let w: Vec<f64> = (0..r)
                    .map(|c| (self.z[(e.p0, c)] + sign * self.z[(e.pn, c)]) * inv_sqrt2)
                    .collect();
                let (s, pivot) = match branch {
                    Branch::Eliminated(s) => (s, None),
                    Branch::Kept { end, coupling, pivot } => (end, Some((coupling, pivot))),
                };
                if w.iter().all(|&x| x == 0.0) {
                    // Uncoupled from the vertices: only the interior pivot counts.
                    if let Some((_, d)) = pivot {
                        if d < 0.0 {
                            negatives += 1;
                        }
                    }
                    continue;
                }
                add_outer(&mut eliminated, &w, s);
                if let Some((coupling, d)) = pivot {
                    kept.push((w, coupling, d));
                }
            }
        }
        let dim = r + kept.len();
        if dim > 0 {
            let mut reduced = DMatrix::zeros(dim, dim);
            reduced.view_mut((0, 0), (r, r)).copy_from(&eliminated);
            for (j, (w, coupling, d)) in kept.iter().enumerate() {
                let c = r + j;
                reduced[(c, c)] = *d;
                for i in 0..r {
                    reduced[(i, c)] = coupling * w[i];
                    reduced[(c, i)] = coupling * w[i];
                }
            }
            let reduced = (&reduced + reduced.transpose()) * 0.5;
            let eig = SymmetricEigen::new(reduced);
            negatives += eig.eigenvalues.iter().filter(|&&x| x < 0.0).count();
        }
        negatives
    }

    /// The `k` lowest eigenvalues; `scale` sets the absolute resolution near zero.
    pub fn lowest(&self, k: usize, scale: f64) -> Vec<f64> {
        if k == 0 {
            return Vec::new();
        }
        let mut lo = -scale;
        let mut guard = 0;
        while self.count_below(lo) > 0 && guard < 4000 {
            lo *= 2.0;
            guard += 1;
        }
        let mut hi = scale;
        guard = 0;
        while self.count_below(hi) < k && guard < 4000 {
            hi *= 2.0;
            guard += 1;
        }
        let mut lower = vec![lo; k];
        let mut upper = vec![hi; k];
        let abs_tol = 1e-14 * scale;
        let mut out = Vec::with_capacity(k);
        for j in 0..k {
            let mut iterations = 0;
            loop {
                let (a, b) = (lower[j], upper[j]);
                let width_ok = b - a <= (4.0 * f64::EPSILON * a.abs().max(b.abs())).max(abs_tol);
                if width_ok || iterations > 300 {
                    break;
                }
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let c = self.count_below(mid);
                for i in j..k {
                    if c > i {
                        upper[i] = upper[i].min(mid);
                    } else {
                        lower[i] = lower[i].max(mid);
                    }
                }
                iterations += 1;
            }
            out.push(0.5 * (lower[j] + upper[j]));
            if j + 1 < k {
                lower[j + 1] = lower[j + 1].max(lower[j]);
            }
        }
        out
    }
}
