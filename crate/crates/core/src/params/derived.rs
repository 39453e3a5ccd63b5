use serde::{Deserialize, Serialize};

use super::constants::PhysicalConstants;
use super::formulas::{self, DispersiveShifts, EtaParameters};
use super::parameter_set::ParameterSet;
use crate::error::Result;

/// Where a number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Input,
    Derived,
    HydrogenSolve,
    TrapFit,
    /// A literature value supplied explicitly in place of a computed one.
    Reference,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Input => "input",
            Provenance::Derived => "derived",
            Provenance::HydrogenSolve => "hydrogen_solve",
            Provenance::TrapFit => "trap_fit",
            Provenance::Reference => "reference",
        }
    }
}

/// Two-level projection of the vertical motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomicDipoles {
    pub z11: f64,
    pub z12: f64,
    pub z22: f64,
    /// `omega_2 - omega_1` (rad/s).
    pub omega_a: f64,
    pub source: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeFlags {
    /// All eta below 0.1.
    pub eta_small: bool,
    /// `Omega_12 <= 0.1 |Delta_a - Delta_s|`.
    pub large_detuning: bool,
    /// `Delta_x > omega_s`.
    pub spin_oscillator_dispersive: bool,
    /// `hbar omega_s > k_B T`.
    pub thermal_ground_state: bool,
    /// Wire current density below the critical density.
    pub below_critical_current: bool,
}

impl RegimeFlags {
    pub fn all_ok(&self) -> bool {
        self.eta_small
            && self.large_detuning
            && self.spin_oscillator_dispersive
            && self.thermal_ground_state
            && self.below_critical_current
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedParameters {
    pub b0: f64,
    pub omega_s: f64,
    pub omega_x: f64,
    pub omega_y: f64,
    pub x0: f64,
    pub eta: EtaParameters,
    pub delta_s: f64,
    pub delta_a: f64,
    pub delta_x: f64,
    pub shifts: DispersiveShifts,
    pub omega_s_esr: f64,
    pub b_tilde_z: f64,
    pub dipoles: AtomicDipoles,
    pub flags: RegimeFlags,
    /// `hbar omega_s / (k_B T)`.
    pub zeeman_to_thermal: f64,
    pub current_density: f64,
}

impl DerivedParameters {
    /// Runs the whole closed-form chain for one parameter set.
    pub fn compute(
        c: &PhysicalConstants,
        p: &ParameterSet,
        dipoles: AtomicDipoles,
    ) -> Result<Self> {
        c.validate()?;
        p.validate()?;
        let b0 = formulas::compute_b0(c, p.i_dc, p.h)?;
        let omega_s = formulas::compute_spin_splitting(c, b0);
        let (omega_x, omega_y) = formulas::compute_lateral_frequencies(c, p)?;
        let x0 = formulas::oscillator_length(c, omega_x);
        let eta = formulas::compute_eta_parameters(x0, dipoles.z11, dipoles.z22, p.h)?;
        let delta_s = formulas::compute_stark_shift(omega_s, eta.eta1, eta.eta2);
        let delta_a = p.drive_detuning.delta_a(delta_s);
        let delta_x = omega_x - omega_s;
        let shifts = formulas::compute_dispersive_shifts(
            p.omega_12, delta_a, delta_s, omega_s, omega_x, &eta,
        )?;
        let b_tilde_z = formulas::esr_field(c, p.i_0, p.l);
        let omega_s_esr = formulas::esr_rabi_frequency(c, b_tilde_z);
        let zeeman_to_thermal = c.hbar * omega_s / (c.k_b * p.temperature);
        let current_density = formulas::current_density(p.i_dc, p.d);

        let flags = RegimeFlags {
            eta_small: eta.eta0 < 0.1 && eta.eta1 < 0.1 && eta.eta2 < 0.1,
            large_detuning: shifts.large_detuning(),
            spin_oscillator_dispersive: delta_x > omega_s,
            thermal_ground_state: zeeman_to_thermal > 1.0,
            below_critical_current: current_density < formulas::CRITICAL_CURRENT_DENSITY,
        };
        if !flags.eta_small {
            log::warn!("eta parameters not small: {eta:?}");
        }
        if !flags.spin_oscillator_dispersive {
            log::warn!(
                "Delta_x = {delta_x:.3e} rad/s does not exceed omega_s = {omega_s:.3e} rad/s"
            );
        }

        Ok(Self {
            b0,
            omega_s,
            omega_x,
            omega_y,
            x0,
            eta,
            delta_s,
            delta_a,
            delta_x,
            shifts,
            omega_s_esr,
            b_tilde_z,
            dipoles,
            flags,
            zeeman_to_thermal,
            current_density,
        })
    }

    /// Duration of a pi/2 pulse, `pi / (2 Omega_s)`.
    pub fn half_pi_pulse(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 / self.omega_s_esr
    }
}
