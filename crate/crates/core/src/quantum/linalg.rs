//! Dense complex linear algebra used throughout the crate.
//!
//! Everything operates on small square [`ComplexMatrix`] values. Hermitian
//! problems go through a sorted, phase-fixed eigendecomposition so results
//! are reproducible bit-for-bit between runs.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{HolonomyError, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Tolerance below which a matrix is treated as (anti-)Hermitian when
/// picking the exponential route.
const NORMAL_TOL: f64 = 1e-13;

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(HolonomyError::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Largest entry modulus, the `‖·‖_max` norm.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    max_abs(&(a - b))
}

pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn anti_hermiticity_defect(m: &ComplexMatrix) -> f64 {
    max_abs(&(m + m.adjoint()))
}

pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `(m + m†)/2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Eigendecomposition `H = Σ λ_i v_i v_i†` of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order. Each eigenvector is rotated so
/// that its largest-magnitude component is real and positive (the first such
/// component when several tie within 1e-12).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        let dim = ensure_square(h)?;
        let sym = hermitian_part(h);
        let eig = sym.symmetric_eigen();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = eig.eigenvectors.select_columns(order.iter());
        phase_fix_columns(&mut vectors);
        Ok(Self { values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `Σ f(λ_i) v_i v_i†`.
    pub fn apply<F: Fn(f64) -> Complex64>(&self, f: F) -> ComplexMatrix {
        let dim = self.dim();
        let mut scaled = self.vectors.clone();
        for (col, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for row in 0..dim {
                scaled[(row, col)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// `exp(i·s·H)`.
    pub fn exp_i(&self, s: f64) -> ComplexMatrix {
        self.apply(|lambda| Complex64::from_polar(1.0, s * lambda))
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|lambda| Complex64::new(lambda, 0.0))
    }
}

/// Rotates every column so its largest-magnitude component (the first one
/// when several tie within 1e-12) is real and positive.
pub fn phase_fix_columns(vectors: &mut ComplexMatrix) {
    for mut v in vectors.column_iter_mut() {
        let peak = v.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        if peak == 0.0 {
            continue;
        }
        let pivot = *v.iter().find(|z| z.norm() >= peak - 1e-12).unwrap();
        let phase = pivot.conj() / pivot.norm();
        v.iter_mut().for_each(|z| *z *= phase);
    }
}

/// Matrix exponential `e^A`.
///
/// Anti-Hermitian and Hermitian inputs (every generator the crate builds) go
/// through the eigendecomposition, which keeps `e^A` unitary to machine
/// precision. Anything else falls back to Padé scaling-and-squaring.
pub fn matrix_exp(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = ensure_square(a)?;
    if !all_finite(a) {
        return Err(HolonomyError::InvalidState("non-finite matrix entry".into()));
    }
    if dim == 0 {
        return Ok(a.clone());
    }
    let scale = max_abs(a).max(1.0);
    if anti_hermiticity_defect(a) <= NORMAL_TOL * scale {
        // A = iH with H = -iA Hermitian.
        let h = a.map(|z| -I * z);
        return Ok(HermitianEigen::new(&h)?.exp_i(1.0));
    }
    if hermiticity_defect(a) <= NORMAL_TOL * scale {
        return Ok(HermitianEigen::new(a)?.apply(|lambda| Complex64::new(lambda.exp(), 0.0)));
    }
    Ok(pade_exp(a))
}

/// Scaling-and-squaring Padé exponential for general input.
pub fn pade_exp(a: &ComplexMatrix) -> ComplexMatrix {
    a.clone().exp()
}

/// Unitary factor `V (V†V)^{-1/2}` of the polar decomposition of a
/// nonsingular matrix.
pub fn polar_unitary(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    let gram = HermitianEigen::new(&(v.adjoint() * v))?;
    let floor = gram.values.last().copied().unwrap_or(0.0);
    if floor <= 0.0 {
        return Err(HolonomyError::InvalidState(
            "singular matrix has no unique unitary polar factor".into(),
        ));
    }
    Ok(v * gram.apply(|lambda| Complex64::new(lambda.powf(-0.5), 0.0)))
}
