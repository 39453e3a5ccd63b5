//! Simulation of a single electron on a helium film used as a spin-echo
//! millimetre-wave field sensor.

pub mod dynamics;
pub mod echo;
pub mod error;
pub mod hydrogen1d;
pub mod params;
pub mod pipeline;
pub mod quantum;
pub mod sensitivity;
pub mod trap;

pub use echo::{EchoResult, EchoSchedule, NoiseModel, SpinFrequencies};
pub use error::{Error, Result};
pub use params::{DerivedParameters, ParameterSet, PhysicalConstants};
pub use quantum::{HilbertSpec, ModelParams};
pub use sensitivity::{SensitivityReport, SensitivityRow};
pub use trap::{ElectrodeGeometry, GridSpec, QuadrupoleFit};
