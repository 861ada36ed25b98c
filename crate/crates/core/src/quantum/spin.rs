use num_complex::Complex64;

use super::linalg::{ComplexMatrix, HermitianEigen, I};
use crate::error::{HolonomyError, Result};

/// Angular-momentum generators of the `k`-dimensional irreducible
/// representation of SU(2), `j = (k - 1)/2`, in the `|j, m⟩` basis ordered
/// `m = j, j-1, …, -j`.
#[derive(Debug, Clone)]
pub struct SpinRep {
    k: usize,
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
}

impl SpinRep {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(HolonomyError::InvalidDimension(k));
        }
        let j = (k as f64 - 1.0) / 2.0;
        let m = |i: usize| j - i as f64;

        let mut raising = ComplexMatrix::zeros(k, k);
        for i in 1..k {
            let mi = m(i);
            raising[(i - 1, i)] = Complex64::new((j * (j + 1.0) - mi * (mi + 1.0)).sqrt(), 0.0);
        }
        let lowering = raising.adjoint();
        let jx = (&raising + &lowering).scale(0.5);
        let jy = (&raising - &lowering).map(|z| z / (2.0 * I));
        let jz = ComplexMatrix::from_fn(k, k, |r, c| {
            if r == c {
                Complex64::new(m(r), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(Self { k, jx, jy, jz })
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn j(&self) -> f64 {
        (self.k as f64 - 1.0) / 2.0
    }

    /// Magnetic quantum numbers `j, j-1, …, -j` in basis order.
    pub fn m_values(&self) -> Vec<f64> {
        (0..self.k).map(|i| self.j() - i as f64).collect()
    }

    /// `(-1)^{2j}`: `-1` for half-integer spin.
    pub fn full_turn_sign(&self) -> f64 {
        if self.k.is_multiple_of(2) {
            -1.0
        } else {
            1.0
        }
    }

    /// `n⃗·J⃗` for a (not necessarily normalized) 3-vector.
    pub fn along(&self, n: [f64; 3]) -> ComplexMatrix {
        self.jx.scale(n[0]) + self.jy.scale(n[1]) + self.jz.scale(n[2])
    }

    pub fn casimir(&self) -> ComplexMatrix {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }

    /// Eigendecomposition of `n⃗·J⃗`, used to exponentiate rotations exactly.
    pub fn axis_eigen(&self, n: [f64; 3]) -> Result<HermitianEigen> {
        HermitianEigen::new(&self.along(n))
    }
}
