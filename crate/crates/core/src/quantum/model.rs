use serde::{Deserialize, Serialize};

use super::hilbert::C64;
use crate::error::{Error, Result};
use crate::params::{
    compute_dispersive_shifts, DerivedParameters, DispersiveShifts, EtaParameters, ParameterSet,
};

/// Frequencies and couplings of the atom ⊗ spin ⊗ x-oscillator model (rad/s).
///
/// The travelling-wave phase `k_T x` of the drive is frozen to `drive_phase`,
/// so the complex Rabi frequency is `Omega_d = Omega_12 exp(-i drive_phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega_1: f64,
    pub omega_2: f64,
    pub omega_x: f64,
    pub omega_s: f64,
    pub eta0: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub omega_12: f64,
    pub delta_a: f64,
    pub delta_s: f64,
    pub delta_x: f64,
    pub drive_phase: f64,
    /// Off-diagonal height element over the film thickness, `z12 / h`.
    pub z12_over_h: f64,
}

impl ModelParams {
    /// Level |1> is placed at zero energy; only differences enter the dynamics.
    pub fn from_derived(d: &DerivedParameters, p: &ParameterSet) -> Self {
        Self {
            omega_1: 0.0,
            omega_2: d.dipoles.omega_a,
            omega_x: d.omega_x,
            omega_s: d.omega_s,
            eta0: d.eta.eta0,
            eta1: d.eta.eta1,
            eta2: d.eta.eta2,
            omega_12: p.omega_12,
            delta_a: d.delta_a,
            delta_s: d.delta_s,
            delta_x: d.delta_x,
            drive_phase: 0.0,
            z12_over_h: d.dipoles.z12 / p.h,
        }
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_2 - self.omega_1
    }

    /// Drive carrier `omega_T = omega_a + Delta_a`.
    pub fn omega_t(&self) -> f64 {
        self.omega_a() + self.delta_a
    }

    pub fn omega_d(&self) -> C64 {
        C64::from_polar(self.omega_12, -self.drive_phase)
    }

    pub fn eta(&self) -> EtaParameters {
        EtaParameters {
            eta0: self.eta0,
            eta1: self.eta1,
            eta2: self.eta2,
        }
    }

    pub fn shifts(&self) -> Result<DispersiveShifts> {
        compute_dispersive_shifts(
            self.omega_12,
            self.delta_a,
            self.delta_s,
            self.omega_s,
            self.omega_x,
            &self.eta(),
        )
    }

    /// Sets `omega_12` so that `Omega_12 / (Delta_a - Delta_s)` equals `ratio`.
    pub fn with_drive_ratio(mut self, ratio: f64) -> Self {
        self.omega_12 = ratio * (self.delta_a - self.delta_s).abs();
        self
    }

    /// Re-derives `Delta_s` and `Delta_x` after editing the primary fields.
    pub fn refresh(mut self) -> Self {
        let detuning = self.delta_a - self.delta_s;
        self.delta_s = self.omega_s * (self.eta2 - self.eta1);
        self.delta_a = self.delta_s + detuning;
        self.delta_x = self.omega_x - self.omega_s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega_1,
            self.omega_2,
            self.omega_x,
            self.omega_s,
            self.eta0,
            self.eta1,
            self.eta2,
            self.omega_12,
            self.delta_a,
            self.delta_s,
            self.delta_x,
            self.drive_phase,
            self.z12_over_h,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("model", "non-finite entry"));
        }
        if !(self.omega_x > 0.0) {
            return Err(Error::invalid("omega_x", "must be positive"));
        }
        if self.omega_s < 0.0 || self.omega_12 < 0.0 {
            return Err(Error::invalid(
                "model",
                "omega_s and Omega_12 must be non-negative",
            ));
        }
        let ds = self.omega_s * (self.eta2 - self.eta1);
        if (ds - self.delta_s).abs() > 1e-9 * ds.abs().max(1.0) {
            return Err(Error::invalid(
                "delta_s",
                format!(
                    "{} inconsistent with omega_s (eta2 - eta1) = {ds}",
                    self.delta_s
                ),
            ));
        }
        let dx = self.omega_x - self.omega_s;
        if (dx - self.delta_x).abs() > 1e-9 * dx.abs().max(1.0) {
            return Err(Error::invalid("delta_x", "must equal omega_x - omega_s"));
        }
        Ok(())
    }
}
