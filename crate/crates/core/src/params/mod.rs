//! Physical constants, the input parameter set and every closed-form
//! derived quantity of the sensor.

pub mod constants;
pub mod derived;
pub mod formulas;
pub mod parameter_set;
pub mod report;
pub mod units;

pub use constants::PhysicalConstants;
pub use derived::{AtomicDipoles, DerivedParameters, Provenance, RegimeFlags};
pub use formulas::{
    compute_b0, compute_dispersive_shifts, compute_eta_parameters, compute_lateral_frequencies,
    compute_spin_splitting, compute_stark_shift, field_from_rabi, image_current,
    lorentz_term_magnitude, power_density, rabi_from_field, DispersiveShifts, EtaParameters,
    LorentzMoment,
};
pub use parameter_set::{DriveDetuning, ParameterSet};
pub use report::{ProvenanceReport, ReportRow};
