//! Complex linear algebra and quantum-state primitives.

pub mod linalg;
pub mod spin;
pub mod state;

pub use linalg::{matrix_exp, ComplexMatrix, HermitianEigen};
pub use spin::SpinRep;
pub use state::{
    bloch_to_density, gibbs_density, gibbs_weights, hatted_operator, solve_sylvester, sqrt_psd, BlochState,
    DensityMatrix,
};

/// Generator triple of the `k`-dimensional irrep.
pub fn spin_generators(k: usize) -> crate::error::Result<SpinRep> {
    SpinRep::new(k)
}
