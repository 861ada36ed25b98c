//! Interferometric mixed-state phase.
//!
//! Every eigenvector `|k⟩` of `ρ(0)` is carried along the path on its own;
//! its geometric factor is `⟨k|U(T)|k⟩` with the dynamical phase
//! `∫⟨k|U†U̇|k⟩dt` removed. The mixed-state amplitude is the
//! eigenvalue-weighted sum of these factors.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HolonomyError, Result};
use crate::paths::UnitaryPath;
use crate::quantum::linalg::{trace, ComplexMatrix};
use crate::quantum::state::{gibbs_weights, EIGEN_CLAMP};
use crate::quantum::DensityMatrix;

/// Eigenvalues closer than this make the interferometric eigenbasis ambiguous.
pub const DEGENERACY_GAP: f64 = 1e-9;
pub const MIN_QUAD_STEPS: usize = 100;

/// A geometric phase with its visibility and the complex amplitude both
/// were read from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult {
    /// `arg(amplitude)` in `(-π, π]`.
    pub gamma: f64,
    /// `|amplitude|`.
    pub visibility: f64,
    pub amplitude: Complex64,
}

impl PhaseResult {
    pub fn from_amplitude(amplitude: Complex64) -> Self {
        let mut gamma = amplitude.arg();
        if gamma <= -PI {
            gamma += 2.0 * PI;
        }
        Self { gamma, visibility: amplitude.norm(), amplitude }
    }
}

/// Per-eigenvector contribution `w_k · c_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenComponent {
    pub weight: f64,
    /// Pure-state geometric factor `ν_k e^{iφ_k}`.
    pub factor: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterferometricPhase {
    pub phase: PhaseResult,
    /// `Tr[ρ(0) U(T)]` without any dynamical-phase correction. Equal to
    /// `phase.amplitude` only when the path satisfies the parallel-transport
    /// condition.
    pub raw_amplitude: Complex64,
    /// In descending-weight order.
    pub components: Vec<EigenComponent>,
}

fn check_dims(rho0: &DensityMatrix, path: &UnitaryPath) -> Result<()> {
    if rho0.dim() != path.dim() {
        return Err(HolonomyError::DimensionMismatch { expected: rho0.dim(), found: path.dim() });
    }
    Ok(())
}

/// Smallest gap between adjacent occupied eigenvalues.
fn occupied_gap(weights: &[f64]) -> f64 {
    weights
        .windows(2)
        .filter(|w| w[0] > EIGEN_CLAMP)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min)
}

/// Composite Simpson rule on `[a, b]` with `panels` (even) subintervals.
fn simpson<F: FnMut(f64) -> Vec<Complex64>>(a: f64, b: f64, panels: usize, width: usize, mut f: F) -> Vec<Complex64> {
    let h = (b - a) / panels as f64;
    let mut acc = vec![Complex64::new(0.0, 0.0); width];
    for i in 0..=panels {
        let coeff = if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        for (slot, v) in acc.iter_mut().zip(f(a + h * i as f64)) {
            *slot += v * coeff;
        }
    }
    acc.iter().map(|s| s * (h / 3.0)).collect()
}

/// Interferometric phase and visibility of `ρ(0)` carried along `path`.
pub fn interferometric_phase(rho0: &DensityMatrix, path: &UnitaryPath, quad_steps: usize) -> Result<InterferometricPhase> {
    check_dims(rho0, path)?;
    if quad_steps < MIN_QUAD_STEPS {
        return Err(HolonomyError::OutOfDomain {
            name: "quad_steps",
            value: quad_steps as f64,
            domain: ">= 100",
        });
    }
    let weights = rho0.eigenvalues();
    let gap = occupied_gap(weights);
    if gap < DEGENERACY_GAP {
        return Err(HolonomyError::DegenerateSpectrum { gap });
    }
    let dim = rho0.dim();
    let basis = rho0.eigenvectors();
    let total = path.duration();

    // ∫ ⟨k|U†U̇|k⟩ dt, segment by segment since U̇ jumps at the joints.
    let mut connection = vec![Complex64::new(0.0, 0.0); dim];
    for seg in path.segments() {
        let span = seg.t_end() - seg.t_start();
        let mut panels = ((quad_steps as f64 * span / total).round() as usize).max(2);
        panels += panels % 2;
        let part = simpson(seg.t_start(), seg.t_end(), panels, dim, |t| {
            let m = basis.adjoint() * seg.evaluate(t).adjoint() * seg.derivative(t) * basis;
            (0..dim).map(|k| m[(k, k)]).collect()
        });
        for (c, p) in connection.iter_mut().zip(part) {
            *c += p;
        }
    }

    let end = basis.adjoint() * path.end_unitary() * basis;
    let components: Vec<EigenComponent> = (0..dim)
        .map(|k| EigenComponent { weight: weights[k], factor: end[(k, k)] * (-connection[k]).exp() })
        .collect();
    let amplitude = components.iter().map(|c| c.factor * c.weight).sum();
    Ok(InterferometricPhase {
        phase: PhaseResult::from_amplitude(amplitude),
        raw_amplitude: trace(&(rho0.matrix() * path.end_unitary())),
        components,
    })
}

/// `max_t |Tr[ρ(t) U̇(t) U†(t)]|` over `samples` evenly spaced points.
/// Zero means the path parallel-transports `ρ` in the interferometric sense.
pub fn check_parallel_transport(rho0: &DensityMatrix, path: &UnitaryPath, samples: usize) -> Result<f64> {
    check_dims(rho0, path)?;
    let samples = samples.max(2);
    let total = path.duration();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let t = total * i as f64 / (samples - 1) as f64;
        let u = path.evaluate(t)?;
        let du = path.derivative(t)?;
        let rho_t: ComplexMatrix = rho0.conjugated(&u);
        worst = worst.max(trace(&(rho_t * du * u.adjoint())).norm());
    }
    Ok(worst)
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(HolonomyError::OutOfDomain { name: "r", value: r, domain: "[0, 1]" });
    }
    Ok(())
}

/// Qubit phase `-arctan(r tan(Ω/2))`, principal branch.
pub fn qubit_triangle_phase(r: f64, omega: f64) -> Result<f64> {
    check_radius(r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok(-(r * (omega / 2.0).tan()).atan())
}

/// Qubit visibility `√(cos²(Ω/2) + r² sin²(Ω/2))` for cyclic evolution.
pub fn qubit_visibility(r: f64, omega: f64) -> Result<f64> {
    check_radius(r)?;
    let (s, c) = (omega / 2.0).sin_cos();
    Ok((c * c + r * r * s * s).sqrt())
}

/// Full qubit amplitude `cos(Ω/2) - i r sin(Ω/2)`: the weighted sum of the
/// `e^{∓iΩ/2}` factors of the two Bloch eigenstates. Its argument agrees
/// with [`qubit_triangle_phase`] modulo π and fixes the branch.
pub fn qubit_amplitude(r: f64, omega: f64) -> Result<Complex64> {
    check_radius(r)?;
    let (s, c) = (omega / 2.0).sin_cos();
    Ok(Complex64::new(c, -r * s))
}

/// `Σ_m w_m e^{2πi m cos ξ}` for the Gibbs weights `w_m = e^{αm}/Z`: the
/// weighted average of the eigenstates' Berry factors for one turn about
/// `(0, sin ξ, cos ξ)`.
pub fn gibbs_interferometric_invariant(k: usize, inv_temp: f64, xi: f64) -> Result<PhaseResult> {
    let weights = gibbs_weights(k, inv_temp)?;
    let j = (k as f64 - 1.0) / 2.0;
    let c = xi.cos();
    let amplitude = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| Complex64::from_polar(w, 2.0 * PI * (j - i as f64) * c))
        .sum();
    Ok(PhaseResult::from_amplitude(amplitude))
}
