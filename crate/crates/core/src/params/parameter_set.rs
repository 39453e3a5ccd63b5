use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the mm-wave drive frequency is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DriveDetuning {
    /// Drive-atom detuning `Delta_a = omega_T - omega_a` (rad/s).
    Absolute(f64),
    /// Detuning measured from the spin-down dressed transition, `Delta_a - Delta_s` (rad/s).
    FromStarkShift(f64),
}

impl DriveDetuning {
    /// Resolves to `Delta_a` given the spin-dependent Stark shift.
    pub fn delta_a(&self, delta_s: f64) -> f64 {
        match *self {
            DriveDetuning::Absolute(d) => d,
            DriveDetuning::FromStarkShift(d) => d + delta_s,
        }
    }
}

/// Physical inputs of the sensor. SI units and angular frequencies throughout.
///
/// The quadrupole coefficients are stored per volt of bias and scaled by
/// `v_bias` when used. They describe the electron potential energy per unit
/// charge, so positive curvature confines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub i_dc: f64,
    pub h: f64,
    pub l: f64,
    pub d: f64,
    pub v_bias: f64,
    pub temperature: f64,
    /// Vertical pressing field at the trap center (V/m).
    pub e_z: f64,
    pub q_xx_per_volt: f64,
    pub q_yy_per_volt: f64,
    pub q_zz_per_volt: f64,
    pub omega_12: f64,
    pub drive_detuning: DriveDetuning,
    /// ESR pulse current amplitude (A).
    pub i_0: f64,
    pub omega_m: f64,
    pub n_s: f64,
    /// Detection-plate height above the film (m).
    pub plate_height: f64,
    /// Detection-plate area (m^2).
    pub plate_area: f64,
}

/// Trap coefficients obtained from the electrostatic model of one cell
/// (per volt of bias, SI).
pub const E_Z_PER_VOLT: f64 = 0.569e3 * 1e2;
pub const Q_XX_PER_VOLT: f64 = 0.404e6 * 1e4;
pub const Q_YY_PER_VOLT: f64 = 0.416e6 * 1e4;
pub const Q_ZZ_PER_VOLT: f64 = -0.853e6 * 1e4;

impl Default for ParameterSet {
    /// The showcase operating point: 0.5 A bias current, 5 um film, 0.1 V trap bias.
    fn default() -> Self {
        let v_bias = 0.1;
        Self {
            i_dc: 0.5,
            h: 5e-6,
            l: 100e-6,
            d: 1e-6,
            v_bias,
            temperature: 10e-3,
            e_z: E_Z_PER_VOLT * v_bias,
            q_xx_per_volt: Q_XX_PER_VOLT,
            q_yy_per_volt: Q_YY_PER_VOLT,
            q_zz_per_volt: Q_ZZ_PER_VOLT,
            omega_12: 100.0,
            drive_detuning: DriveDetuning::FromStarkShift(1e4),
            i_0: 5e-3,
            omega_m: 2.0 * PI * 100e3,
            n_s: 2e4 * 1e4,
            plate_height: 0.1e-3,
            plate_area: 4e-4,
        }
    }
}

impl ParameterSet {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("h", self.h),
            ("l", self.l),
            ("d", self.d),
            ("plate_height", self.plate_height),
            ("plate_area", self.plate_area),
            ("temperature", self.temperature),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        let non_negative = [
            ("i_dc", self.i_dc),
            ("i_0", self.i_0),
            ("omega_m", self.omega_m),
            ("n_s", self.n_s),
            ("omega_12", self.omega_12),
            ("e_z", self.e_z),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be non-negative, got {v}"),
                ));
            }
        }
        if self.l <= self.h {
            return Err(Error::invalid(
                "l",
                format!(
                    "electrode length {} m must exceed film thickness {} m",
                    self.l, self.h
                ),
            ));
        }
        for (name, v) in [
            ("v_bias", self.v_bias),
            ("q_xx_per_volt", self.q_xx_per_volt),
            ("q_yy_per_volt", self.q_yy_per_volt),
            ("q_zz_per_volt", self.q_zz_per_volt),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        Ok(())
    }

    /// Bias-scaled curvature coefficients `(Q_xx, Q_yy, Q_zz)` in V/m^2.
    pub fn quadrupole(&self) -> (f64, f64, f64) {
        (
            self.q_xx_per_volt * self.v_bias,
            self.q_yy_per_volt * self.v_bias,
            self.q_zz_per_volt * self.v_bias,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ParameterSet::default().validate().unwrap();
    }

    #[test]
    fn rejects_thin_electrode() {
        let p = ParameterSet {
            l: 4e-6,
            ..Default::default()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { name: "l", .. })
        ));
    }

    #[test]
    fn rejects_non_positive_film() {
        let p = ParameterSet {
            h: 0.0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn detuning_forms_agree() {
        let ds = 8.4e6;
        let rel = DriveDetuning::FromStarkShift(1e4);
        let abs = DriveDetuning::Absolute(ds + 1e4);
        assert_eq!(rel.delta_a(ds), abs.delta_a(ds));
    }
}
