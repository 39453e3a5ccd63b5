use nalgebra::SymmetricEigen;

use crate::quantum::{CMatrix, CVector, C64};

/// Eigen-decomposition of a Hermitian generator, reusable for many times.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Self {
        // symmetrise so round-off in the input cannot leak into the spectrum
        let sym = (h + h.adjoint()).map(|z| z * 0.5);
        let eig = SymmetricEigen::new(sym);
        Self {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }

    /// `exp(-i H t)`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        let v = &self.vectors;
        let mut scaled = v.clone();
        for (j, lambda) in self.values.iter().enumerate() {
            let ph = C64::from_polar(1.0, -lambda * t);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= ph;
            }
        }
        scaled * v.adjoint()
    }

    /// `exp(-i H t) psi` without forming the propagator.
    pub fn apply(&self, psi: &CVector, t: f64) -> CVector {
        let mut coeff = self.vectors.adjoint() * psi;
        for (c, lambda) in coeff.iter_mut().zip(&self.values) {
            *c *= C64::from_polar(1.0, -lambda * t);
        }
        &self.vectors * coeff
    }
}

/// `exp(-i H t)` for Hermitian `H` (rad/s) and time `t` (s).
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    HermitianEigen::new(h).propagator(t)
}

/// `|| U^dagger U - 1 ||_max`.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - CMatrix::identity(n, n))
        .iter()
        .fold(0.0f64, |a, z| a.max(z.norm()))
}
