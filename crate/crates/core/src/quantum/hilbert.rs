use std::io::{self, Write};
use std::ops::{Add, Deref, Mul, Sub};

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };
pub const I: C64 = Complex { re: 0.0, im: 1.0 };

/// Atom level (0 for |1>, 1 for |2>).
pub type Level = usize;

/// Spin index: `DOWN = 0` for |↓>, `UP = 1` for |↑>.
pub const DOWN: usize = 0;
pub const UP: usize = 1;

/// Composite space atom (2) ⊗ spin (2) ⊗ x-oscillator (`n_fock`).
///
/// Basis state `|a, s, k>` has index `((a * 2) + s) * n_fock + k`. In the spin
/// factor `sigma_x = |↑><↑| - |↓><↓|` is diagonal and
/// `sigma_z = |↑><↓| + |↓><↑|` flips.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpec {
    pub n_fock: usize,
}

impl HilbertSpec {
    pub fn new(n_fock: usize) -> Self {
        assert!(n_fock >= 1, "Fock truncation must be at least 1");
        Self { n_fock }
    }

    pub fn dim(&self) -> usize {
        4 * self.n_fock
    }

    pub fn index(&self, a: Level, s: usize, k: usize) -> usize {
        debug_assert!(a < 2 && s < 2 && k < self.n_fock);
        ((a * 2) + s) * self.n_fock + k
    }

    /// Inverse of [`index`](Self::index).
    pub fn decompose(&self, i: usize) -> (Level, usize, usize) {
        let k = i % self.n_fock;
        let as_ = i / self.n_fock;
        (as_ / 2, as_ % 2, k)
    }

    pub fn label(&self, i: usize) -> String {
        let (a, s, k) = self.decompose(i);
        format!("|{},{},{}>", a + 1, if s == UP { "up" } else { "down" }, k)
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.label(i)).collect()
    }

    pub fn basis(&self, a: Level, s: usize, k: usize) -> CVector {
        let mut v = CVector::zeros(self.dim());
        v[self.index(a, s, k)] = ONE;
        v
    }

    /// `A_atom ⊗ B_spin ⊗ C_fock`.
    pub fn embed(&self, atom: &CMatrix, spin: &CMatrix, fock: &CMatrix) -> OperatorMatrix {
        assert_eq!(atom.nrows(), 2);
        assert_eq!(spin.nrows(), 2);
        assert_eq!(fock.nrows(), self.n_fock);
        OperatorMatrix::new(atom.kronecker(spin).kronecker(fock))
    }

    pub fn identity2() -> CMatrix {
        CMatrix::identity(2, 2)
    }

    pub fn fock_identity(&self) -> CMatrix {
        CMatrix::identity(self.n_fock, self.n_fock)
    }

    /// Truncated annihilation operator.
    pub fn annihilation(&self) -> CMatrix {
        let n = self.n_fock;
        CMatrix::from_fn(n, n, |r, c| {
            if c == r + 1 {
                C64::new((c as f64).sqrt(), 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn number(&self) -> CMatrix {
        let n = self.n_fock;
        CMatrix::from_fn(n, n, |r, c| {
            if r == c {
                C64::new(r as f64, 0.0)
            } else {
                ZERO
            }
        })
    }
}

/// `|r><c|` on a 2-dimensional factor.
pub fn ket_bra(r: usize, c: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(r, c)] = ONE;
    m
}

pub fn sigma_x() -> CMatrix {
    ket_bra(UP, UP) - ket_bra(DOWN, DOWN)
}

pub fn sigma_z() -> CMatrix {
    ket_bra(UP, DOWN) + ket_bra(DOWN, UP)
}

/// Dense complex operator; Hamiltonians are stored as `H / hbar` (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub m: CMatrix,
}

impl OperatorMatrix {
    pub fn new(m: CMatrix) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operators are square");
        Self { m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(CMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// `max |H - H^dagger|` relative to `max |H|` (0 for the zero matrix).
    pub fn hermiticity_error(&self) -> f64 {
        let scale = self.m.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        if scale == 0.0 {
            return 0.0;
        }
        let d = &self.m - self.m.adjoint();
        d.iter().fold(0.0f64, |a, z| a.max(z.norm())) / scale
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= 1e-12
    }

    /// `|| U^dagger U - 1 ||_max`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        let d = self.m.adjoint() * &self.m - CMatrix::identity(n, n);
        d.iter().fold(0.0f64, |a, z| a.max(z.norm()))
    }

    pub fn commutator(&self, o: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::new(&self.m * &o.m - &o.m * &self.m)
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0f64, |a, z| a.max(z.norm()))
    }

    pub fn scale(&self, s: f64) -> OperatorMatrix {
        OperatorMatrix::new(self.m.map(|z| z * s))
    }

    /// Sparse-style dump: one `row,col,re,im` line per nonzero entry.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "row,col,re[rad/s],im[rad/s]")?;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                let z = self.m[(r, c)];
                if z != ZERO {
                    writeln!(w, "{r},{c},{:.12e},{:.12e}", z.re, z.im)?;
                }
            }
        }
        Ok(())
    }
}

impl Deref for OperatorMatrix {
    type Target = CMatrix;
    fn deref(&self) -> &CMatrix {
        &self.m
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, o: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::new(&self.m + &o.m)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, o: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::new(&self.m - &o.m)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, o: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::new(&self.m * &o.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_and_ordering() {
        let h = HilbertSpec::new(3);
        assert_eq!(h.dim(), 12);
        for i in 0..h.dim() {
            let (a, s, k) = h.decompose(i);
            assert_eq!(h.index(a, s, k), i);
        }
        assert_eq!(h.index(1, UP, 2), (2 + 1) * 3 + 2);
        assert_eq!(h.label(0), "|1,down,0>");
    }

    #[test]
    fn embed_matches_index_convention() {
        let h = HilbertSpec::new(4);
        let a = h.annihilation();
        let op = h.embed(&ket_bra(1, 0), &ket_bra(UP, DOWN), &a.adjoint());
        // |2,up,2><1,down,1| with amplitude sqrt(2)
        let r = h.index(1, UP, 2);
        let c = h.index(0, DOWN, 1);
        assert!((op.m[(r, c)].re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(op.m.iter().filter(|z| **z != ZERO).count(), 3);
    }

    #[test]
    fn tensor_factor_locality() {
        let h = HilbertSpec::new(5);
        let one2 = HilbertSpec::identity2();
        let a = h.embed(&sigma_x(), &one2, &h.fock_identity());
        let b = h.embed(&one2, &sigma_z(), &h.number());
        let c = h.embed(
            &one2,
            &one2,
            &(h.annihilation() + h.annihilation().adjoint()),
        );
        assert!(a.commutator(&b).max_abs() < 1e-12);
        assert!(a.commutator(&c).max_abs() < 1e-12);
    }

    #[test]
    fn pauli_conventions() {
        let sx = sigma_x();
        assert_eq!(sx[(UP, UP)], ONE);
        assert_eq!(sx[(DOWN, DOWN)], -ONE);
        let sz = sigma_z();
        assert_eq!(sz[(UP, DOWN)], ONE);
        assert_eq!(sz[(DOWN, UP)], ONE);
    }
}
