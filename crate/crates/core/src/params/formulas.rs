//! Closed-form relations between the trap, wire and drive parameters.
//!
//! Every function is pure. Frequencies are angular (rad/s).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::constants::PhysicalConstants;
use super::parameter_set::ParameterSet;
use crate::error::{Error, Result};

/// Critical current density of the wire material (A/m^2), 1e8 A/cm^2.
pub const CRITICAL_CURRENT_DENSITY: f64 = 1e8 * 1e4;

/// Peak field `mu0 I / (2 pi h)` of the bias wire at the trap center (T).
pub fn compute_b0(c: &PhysicalConstants, i_dc: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::invalid(
            "h",
            format!("film thickness must be positive, got {h}"),
        ));
    }
    if !(i_dc >= 0.0) {
        return Err(Error::invalid(
            "i_dc",
            format!("must be non-negative, got {i_dc}"),
        ));
    }
    Ok(c.mu0 * i_dc / (2.0 * PI * h))
}

/// Zeeman splitting `2 u_b B0 / hbar` (rad/s).
pub fn compute_spin_splitting(c: &PhysicalConstants, b0: f64) -> f64 {
    2.0 * c.u_b * b0 / c.hbar
}

/// Lateral frequency `sqrt(2 e Q / m_e)` for one bias-scaled curvature coefficient.
pub fn lateral_frequency(c: &PhysicalConstants, q: f64, axis: char) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::Confinement { axis, q });
    }
    Ok((2.0 * c.e * q / c.m_e).sqrt())
}

/// `(omega_x, omega_y)` from the per-volt coefficients scaled by the bias.
pub fn compute_lateral_frequencies(c: &PhysicalConstants, p: &ParameterSet) -> Result<(f64, f64)> {
    let (qx, qy, _) = p.quadrupole();
    Ok((
        lateral_frequency(c, qx, 'x')?,
        lateral_frequency(c, qy, 'y')?,
    ))
}

/// Zero-point length `sqrt(hbar / (2 m_e omega))` of a lateral oscillator (m).
pub fn oscillator_length(c: &PhysicalConstants, omega: f64) -> f64 {
    (c.hbar / (2.0 * c.m_e * omega)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaParameters {
    pub eta0: f64,
    pub eta1: f64,
    pub eta2: f64,
}

/// Spin-orbit coupling ratios: oscillator length and level heights over `2h`.
pub fn compute_eta_parameters(x0: f64, z11: f64, z22: f64, h: f64) -> Result<EtaParameters> {
    if !(h > 0.0) {
        return Err(Error::invalid("h", "film thickness must be positive"));
    }
    Ok(EtaParameters {
        eta0: x0 / (2.0 * h),
        eta1: z11 / (2.0 * h),
        eta2: z22 / (2.0 * h),
    })
}

/// Spin-dependent linear Stark shift `omega_s (eta2 - eta1)`.
pub fn compute_stark_shift(omega_s: f64, eta1: f64, eta2: f64) -> f64 {
    omega_s * (eta2 - eta1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersiveShifts {
    /// Two-photon (ac-Stark) shift of the spin-down dressed state.
    pub omega_sz: f64,
    pub omega_sx1: f64,
    pub omega_sx2: f64,
    /// `Omega_12 / |Delta_a - Delta_s|`; the expansion needs this well below 0.1.
    pub drive_ratio: f64,
}

impl DispersiveShifts {
    pub fn large_detuning(&self) -> bool {
        self.drive_ratio <= 0.1
    }
}

/// Second-order shifts of the far-detuned drive and of the spin-oscillator coupling.
pub fn compute_dispersive_shifts(
    omega_12: f64,
    delta_a: f64,
    delta_s: f64,
    omega_s: f64,
    omega_x: f64,
    eta: &EtaParameters,
) -> Result<DispersiveShifts> {
    let detuning = delta_a - delta_s;
    if detuning == 0.0 {
        return Err(Error::ResonantDetuning);
    }
    let g2 = (eta.eta0 * omega_s).powi(2);
    let shifts = DispersiveShifts {
        omega_sz: omega_12 * omega_12 / detuning,
        omega_sx1: g2 / (omega_x - omega_s * (1.0 - 2.0 * eta.eta1)),
        omega_sx2: g2 / (omega_x - omega_s * (1.0 - 2.0 * eta.eta2)),
        drive_ratio: omega_12 / detuning.abs(),
    };
    if !shifts.large_detuning() {
        log::warn!(
            "drive ratio Omega_12/|Delta_a - Delta_s| = {:.3} exceeds 0.1; dispersive shifts are unreliable",
            shifts.drive_ratio
        );
    }
    Ok(shifts)
}

/// Drive field amplitude `hbar Omega_12 / (e z12)` (V/m).
pub fn field_from_rabi(c: &PhysicalConstants, omega_12: f64, z12: f64) -> Result<f64> {
    if z12 == 0.0 {
        return Err(Error::ForbiddenTransition);
    }
    Ok(c.hbar * omega_12 / (c.e * z12.abs()))
}

/// Inverse of [`field_from_rabi`].
pub fn rabi_from_field(c: &PhysicalConstants, e_w: f64, z12: f64) -> Result<f64> {
    if z12 == 0.0 {
        return Err(Error::ForbiddenTransition);
    }
    Ok(c.e * z12.abs() * e_w / c.hbar)
}

/// Energy-flow density `c eps0 E^2` of the incoming wave (W/m^2).
pub fn power_density(c: &PhysicalConstants, e_w: f64) -> f64 {
    c.c * c.eps0 * e_w * e_w
}

/// Amplitude of the image current on a detection plate (A):
/// `e n_s omega_m P2 S / D * (z22 - z11)`.
pub fn image_current(
    c: &PhysicalConstants,
    n_s: f64,
    omega_m: f64,
    p2_steady: f64,
    plate_area: f64,
    plate_height: f64,
    dz: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&p2_steady) {
        return Err(Error::invalid(
            "p2_steady",
            format!("must lie in [0, 1], got {p2_steady}"),
        ));
    }
    if !(plate_height > 0.0) {
        return Err(Error::invalid("plate_height", "must be positive"));
    }
    Ok(c.e * n_s * omega_m * p2_steady * plate_area / plate_height * dz)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzMoment {
    /// Effective orbital moment `e z_nm sqrt(hbar omega_y / (8 m_e))` (A m^2).
    pub u_nm: f64,
    /// `u_nm / u_b`.
    pub ratio_to_bohr_magneton: f64,
}

pub fn lorentz_term_magnitude(c: &PhysicalConstants, omega_y: f64, z_nm: f64) -> LorentzMoment {
    let u_nm = c.e * z_nm * (c.hbar * omega_y / (8.0 * c.m_e)).sqrt();
    LorentzMoment {
        u_nm,
        ratio_to_bohr_magneton: u_nm / c.u_b,
    }
}

/// Field amplitude of a line antenna at distance `l/2`: `mu0 I0 / (pi l)` (T).
pub fn esr_field(c: &PhysicalConstants, i_0: f64, l: f64) -> f64 {
    c.mu0 * i_0 / (PI * l)
}

/// Spin Rabi frequency `u_b B / hbar` (rad/s).
pub fn esr_rabi_frequency(c: &PhysicalConstants, b_tilde: f64) -> f64 {
    c.u_b * b_tilde / c.hbar
}

/// Current density through the `d x d` wire cross-section (A/m^2).
pub fn current_density(i_dc: f64, d: f64) -> f64 {
    i_dc / (d * d)
}
