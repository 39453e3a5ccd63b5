//! Composite atom ⊗ spin ⊗ oscillator model and its Hamiltonians.

pub mod hamiltonians;
pub mod hilbert;
pub mod model;

pub use hamiltonians::{
    build_dressed_h0, build_h0, build_h_d, build_h_eff, build_h_eff_from, build_h_esr, build_h_int,
    build_lab_hamiltonian, build_spin_dipole_v, dressed_energy, esr_spin_matrix, h_int_terms,
    reduced_h_eff, PhasedEntry, PhasedHamiltonian, RotatingFrame,
};
pub use hilbert::{
    ket_bra, sigma_x, sigma_z, CMatrix, CVector, HilbertSpec, OperatorMatrix, C64, DOWN, UP,
};
pub use model::ModelParams;
