//! Quantum graphs with δ, δ′, standard, anti-standard, Dirichlet and Neumann
//! vertex conditions: spectra, surgery, eigenvalue bounds and randomized
//! verification of interlacing inequalities.

pub mod bounds;
pub mod checker;
pub mod graph;
pub mod oracle;
pub mod spectrum;
pub mod surgery;
