//! Trap electrostatics of one electrode cell and the bias-wire magnetostatics.

pub mod fit;
pub mod geometry;
pub mod grid;
pub mod laplace;
pub mod magnetostatics;

pub use fit::{
    fit_quadrupole, fit_samples, fit_stability, fit_trap, QuadrupoleFit, DEFAULT_FIT_RADIUS,
};
pub use geometry::{Box3, Electrode, ElectrodeGeometry};
pub use grid::GridSpec;
pub use laplace::{solve_laplace, FieldMap, Method, RelaxationSettings};
pub use magnetostatics::{
    maxwell_checks, neighbor_field, wire_field, wire_maxwell_reports, wire_vector_potential,
    MaxwellReport, VectorPotential, WireField,
};
