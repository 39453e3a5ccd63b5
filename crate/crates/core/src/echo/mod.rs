//! Spin-echo readout of the signal phase, with noise.

pub mod analytic;
pub mod noise;
pub mod numeric;
pub mod output;
pub mod result;
pub mod schedule;
pub mod unitaries;

pub use analytic::{closed_form_amplitudes, echo_unitary, interference_phase, run_echo_analytic};
pub use noise::{
    analytic_dephasing_std, estimate_dephasing, monte_carlo_echo, sample_shot, shot_rng,
    theta_tilde_constant, NoiseKind, NoiseModel, NoiseSource, ShotNoise,
};
pub use numeric::{run_echo_numeric, signal_propagator, SignalModel};
pub use output::{write_shots_csv, MonteCarloSummary, SCHEMA_VERSION};
pub use result::{DephasingStats, EchoResult, ShotRecord};
pub use schedule::{EchoSchedule, PulseTiming, DEFAULT_PHASES};
pub use unitaries::{r_pulse, r_pulse_detuned, u0, u_signal, Spin2, SpinFrequencies};
