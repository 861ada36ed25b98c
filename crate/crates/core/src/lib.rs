//! Mixed-state geometric phases for finite-dimensional density matrices
//! carried around closed unitary paths.
//!
//! Two constructions are provided side by side:
//!
//! * [`sjoqvist`]: the interferometric phase, an eigenvalue-weighted
//!   average of the pure-state geometric factors of the eigenvectors of
//!   `ρ(0)`;
//! * [`uhlmann`]: the purification phase, obtained by parallel transporting
//!   an amplitude `W(t) = U(t)√ρ(0)V(t)` with the ancilla unitary `V(t)` fixed
//!   by the parallelity condition.
//!
//! [`paths`] builds the unitary paths (geodesic triangles on the Bloch sphere
//! and circular orbits), [`quantum`] holds the linear-algebra primitives, and
//! [`comparator`] runs the scenario-level comparisons and figure sweeps.

pub mod comparator;
pub mod error;
pub mod paths;
pub mod quantum;
pub mod sjoqvist;
pub mod uhlmann;

pub use error::{HolonomyError, Result};
