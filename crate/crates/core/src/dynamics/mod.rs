//! State propagation and numerical checks of the approximation chain.

pub mod dispersive;
pub mod expm;
pub mod propagate;
pub mod rabi;
pub mod trajectory;

pub use dispersive::{
    ground_block_checked, ground_block_propagator, validate_dispersive, DispersiveReport,
    PhaseSample, BREAKDOWN_FLAG, LEAKAGE_FLAG,
};
pub use expm::{expm_hermitian, unitarity_error, HermitianEigen};
pub use propagate::{
    evolve_rotating, propagate, Frame, PropagationConfig, StateVector, Trajectory,
};
pub use rabi::{
    damped_excitation, excited_population, rabi_for_steady_excitation, rabi_height_signal,
    rabi_probability, steady_excitation, DecayConfig,
};
pub use trajectory::{write_phase_csv, write_trajectory_csv};
