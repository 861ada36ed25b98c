use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use super::linalg::{
    ensure_square, hermitian_part, hermiticity_defect, max_abs_diff, phase_fix_columns, trace,
    unitarity_defect, ComplexMatrix, HermitianEigen,
};
use super::spin::SpinRep;
use crate::error::{HolonomyError, Result};

pub const TRACE_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues down to `-EIGEN_CLAMP` are treated as rounding noise and
/// clamped to zero.
pub const EIGEN_CLAMP: f64 = 1e-12;
/// Smallest eigenvalue accepted by the Sylvester solve.
pub const RANK_FLOOR: f64 = 1e-10;
const RECONSTRUCT_TOL: f64 = 1e-10;

/// Positive-semidefinite, unit-trace Hermitian state with its spectrum cached.
///
/// Eigenvalues are stored in descending order and eigenvectors are
/// phase-fixed (see [`HermitianEigen`]).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    eigen: HermitianEigen,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        ensure_square(&matrix)?;
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(HolonomyError::InvalidState("non-finite entry".into()));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(HolonomyError::InvalidState(format!("hermiticity defect {defect:e}")));
        }
        let eigen = HermitianEigen::new(&matrix)?;
        let rho = Self { matrix: hermitian_part(&matrix), eigen };
        rho.validate()?;
        Ok(rho)
    }

    /// Builds `Σ w_i v_i v_i†` from weights and the columns of a unitary
    /// matrix, keeping the supplied spectrum exactly.
    pub fn from_spectrum(weights: &[f64], vectors: &ComplexMatrix) -> Result<Self> {
        let dim = ensure_square(vectors)?;
        if weights.len() != dim {
            return Err(HolonomyError::DimensionMismatch { expected: dim, found: weights.len() });
        }
        if unitarity_defect(vectors) > RECONSTRUCT_TOL {
            return Err(HolonomyError::InvalidState("eigenvector matrix is not unitary".into()));
        }
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]));
        let values: Vec<f64> = order.iter().map(|&i| weights[i]).collect();
        let mut sorted = vectors.select_columns(order.iter());
        phase_fix_columns(&mut sorted);
        let eigen = HermitianEigen { values, vectors: sorted };
        let rho = Self { matrix: hermitian_part(&eigen.reconstruct()), eigen };
        rho.validate()?;
        Ok(rho)
    }

    /// Diagonal state `diag(p_0, …, p_{k-1})`.
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        Self::from_spectrum(weights, &ComplexMatrix::identity(weights.len(), weights.len()))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0 / dim as f64; dim])
    }

    fn validate(&self) -> Result<()> {
        let tr = trace(&self.matrix);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(HolonomyError::InvalidState(format!("trace {tr} != 1")));
        }
        let min = self.min_eigenvalue();
        if !(min >= -EIGEN_CLAMP) {
            return Err(HolonomyError::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        let err = max_abs_diff(&self.eigen.reconstruct(), &self.matrix);
        if err > RECONSTRUCT_TOL {
            return Err(HolonomyError::InvalidState(format!("eigendecomposition residual {err:e}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Descending eigenvalues (the weights `w_k`).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigen.vectors
    }

    pub fn eigenvector(&self, i: usize) -> DVector<Complex64> {
        self.eigen.vectors.column(i).into_owned()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigen.values.last().copied().unwrap_or(0.0)
    }

    /// Hermitian PSD square root, computed in the eigenbasis.
    pub fn sqrt(&self) -> ComplexMatrix {
        hermitian_part(&self.eigen.apply(|p| Complex64::new(p.max(0.0).sqrt(), 0.0)))
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> ComplexMatrix {
        u * &self.matrix * u.adjoint()
    }

    /// Bloch vector `Tr(ρσ)` of a qubit state.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(HolonomyError::DimensionMismatch { expected: 2, found: self.dim() });
        }
        let m = &self.matrix;
        Ok([2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re])
    }
}

/// Hermitian PSD square root `S` with `S·S = ρ`.
pub fn sqrt_psd(rho: &DensityMatrix) -> ComplexMatrix {
    rho.sqrt()
}

/// Solves `Xρ + ρX = G` for `X`.
pub fn solve_sylvester(rho: &DensityMatrix, g: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve_sylvester_with_floor(rho, g, RANK_FLOOR)
}

/// [`solve_sylvester`] with an explicit positive-definiteness floor.
///
/// In the eigenbasis of `ρ` the solution is `X̃_ij = G̃_ij / (p_i + p_j)`.
pub fn solve_sylvester_with_floor(rho: &DensityMatrix, g: &ComplexMatrix, eps_rank: f64) -> Result<ComplexMatrix> {
    let dim = ensure_square(g)?;
    if dim != rho.dim() {
        return Err(HolonomyError::DimensionMismatch { expected: rho.dim(), found: dim });
    }
    let min = rho.min_eigenvalue();
    if min < eps_rank {
        return Err(HolonomyError::SingularState { min_eigenvalue: min, floor: eps_rank });
    }
    let basis = rho.eigenvectors();
    let p = rho.eigenvalues();
    let mut x = basis.adjoint() * g * basis;
    for i in 0..dim {
        for j in 0..dim {
            x[(i, j)] /= p[i] + p[j];
        }
    }
    Ok(basis * x * basis.adjoint())
}

/// The "hatted" generator `Â` defined by `2√ρ A √ρ = ρÂ + Âρ`.
pub fn hatted_operator(rho: &DensityMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let s = rho.sqrt();
    let g = (&s * a * &s).scale(2.0);
    solve_sylvester(rho, &g)
}

/// A qubit state by Bloch radius and spherical angles of its direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl BlochState {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(HolonomyError::OutOfDomain { name: "r", value: r, domain: "[0, 1]" });
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(HolonomyError::OutOfDomain { name: "theta", value: theta, domain: "[0, pi]" });
        }
        if !phi.is_finite() {
            return Err(HolonomyError::OutOfDomain { name: "phi", value: phi, domain: "finite" });
        }
        Ok(Self { r, theta, phi: phi.rem_euclid(2.0 * PI) })
    }

    /// Direction `v` need not be normalized but must be nonzero.
    pub fn from_direction(r: f64, v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(norm > 0.0) {
            return Err(HolonomyError::InvalidState("zero Bloch direction".into()));
        }
        let theta = (v[2] / norm).clamp(-1.0, 1.0).acos();
        let phi = v[1].atan2(v[0]);
        Self::new(r, theta, phi)
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// `ρ = ½(1 + r r̂·σ)`, stored with eigenvalues `(1 ± r)/2` along `±r̂`.
pub fn bloch_to_density(b: &BlochState) -> Result<DensityMatrix> {
    let b = BlochState::new(b.r, b.theta, b.phi)?;
    let (s, c) = (b.theta / 2.0).sin_cos();
    let e = Complex64::from_polar(1.0, b.phi);
    let up = [Complex64::new(c, 0.0), e * s];
    let down = [-e.conj() * s, Complex64::new(c, 0.0)];
    let vectors = ComplexMatrix::from_row_slice(2, 2, &[up[0], down[0], up[1], down[1]]);
    DensityMatrix::from_spectrum(&[(1.0 + b.r) / 2.0, (1.0 - b.r) / 2.0], &vectors)
}

/// Boltzmann weights `e^{αm}/Z` for `m = j, j-1, …, -j`.
pub fn gibbs_weights(k: usize, inv_temp: f64) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(HolonomyError::InvalidDimension(k));
    }
    if !inv_temp.is_finite() {
        return Err(HolonomyError::OutOfDomain { name: "inv_temp", value: inv_temp, domain: "finite" });
    }
    let j = (k as f64 - 1.0) / 2.0;
    let exponents: Vec<f64> = (0..k).map(|i| inv_temp * (j - i as f64)).collect();
    let top = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = exponents.iter().map(|e| (e - top).exp()).collect();
    let z: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / z).collect())
}

/// Gibbsian state `e^{α n⃗·J⃗} / Tr e^{α n⃗·J⃗}` on the spin-`(k-1)/2` irrep.
pub fn gibbs_density(k: usize, inv_temp: f64, axis: [f64; 3]) -> Result<DensityMatrix> {
    let spin = SpinRep::new(k)?;
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(HolonomyError::InvalidState("Gibbs axis must be a nonzero finite vector".into()));
    }
    let n = [axis[0] / norm, axis[1] / norm, axis[2] / norm];
    // n·J has spectrum j, j-1, …, -j; the sorted eigenbasis lines up with
    // gibbs_weights' ordering.
    let eig = spin.axis_eigen(n)?;
    let weights = gibbs_weights(k, inv_temp)?;
    DensityMatrix::from_spectrum(&weights, &eig.vectors)
}
