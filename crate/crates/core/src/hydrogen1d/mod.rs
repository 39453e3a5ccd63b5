//! Vertical motion above the helium surface: image potential plus pressing field.

pub mod scan;
pub mod solver;
pub mod tridiag;

pub use scan::{find_field_for, scan_point, stark_scan, write_scan_csv, ScanRow, ScanSettings};
pub use solver::{
    bohr_radius, dipole_elements, solve_spectrum, DipoleTable, Potential1D, SolverOptions,
    Spectrum1D,
};
