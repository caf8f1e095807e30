//! Reference solver: explicit null-space reduction and a dense generalized eigenproblem.

use nalgebra::{DMatrix, SymmetricEigen};

use super::assembly::FormAssembly;
use super::SpectrumError;

/// Basis of the constrained space as an `N × N′` matrix: identity on interior unknowns,
/// the endpoint null-space basis on endpoint unknowns.
pub fn constrained_basis(asm: &FormAssembly) -> DMatrix<f64> {
    let basis = asm.endpoint_basis();
    let interior: Vec<usize> = asm
        .edges
        .iter()
        .flat_map(|e| (e.first() + 1)..e.last())
        .collect();
    let cols = interior.len() + basis.z.ncols();
    let mut z = DMatrix::zeros(asm.dof_count, cols);
    for (c, &d) in interior.iter().enumerate() {
        z[(d, c)] = 1.0;
    }
    for (r, &d) in basis.dofs.iter().enumerate() {
        for c in 0..basis.z.ncols() {
            z[(d, interior.len() + c)] = basis.z[(r, c)];
        }
    }
    z
}

/// All eigenvalues of ZᵀKZ y = λ ZᵀMZ y, ascending.
pub fn dense_eigenvalues(asm: &FormAssembly) -> Result<Vec<f64>, SpectrumError> {
    let z = constrained_basis(asm);
    let a = z.transpose() * asm.stiffness() * &z;
    let b = z.transpose() * asm.mass() * &z;
    let chol = b
        .cholesky()
        .ok_or_else(|| SpectrumError::InvalidMesh("reduced mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let la = l
        .solve_lower_triangular(&a)
        .expect("Cholesky factor is nonsingular");
    let c = l
        .solve_lower_triangular(&la.transpose())
        .expect("Cholesky factor is nonsingular");
    let c = (&c + c.transpose()) * 0.5;
    let mut values: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}
