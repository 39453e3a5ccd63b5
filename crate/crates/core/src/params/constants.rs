use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants in SI units.
///
/// `Default` gives CODATA 2018 values, the dielectric constant of liquid
/// helium and the classical `mu0 = 4 pi 1e-7 T m/A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Electron mass (kg).
    pub m_e: f64,
    /// Elementary charge (C).
    pub e: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Bohr magneton (A m^2).
    pub u_b: f64,
    /// Vacuum permeability (T m/A).
    pub mu0: f64,
    /// Vacuum permittivity (F/m).
    pub eps0: f64,
    /// Relative dielectric constant of liquid helium.
    pub eps_he: f64,
    /// Boltzmann constant (J/K).
    pub k_b: f64,
    /// Speed of light (m/s).
    pub c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            m_e: 9.109_383_701_5e-31,
            e: 1.602_176_634e-19,
            hbar: 1.054_571_817e-34,
            u_b: 9.274_010_078_3e-24,
            mu0: 4.0 * PI * 1e-7,
            eps0: 8.854_187_812_8e-12,
            eps_he: 1.057,
            k_b: 1.380_649e-23,
            c: 299_792_458.0,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("m_e", self.m_e),
            ("e", self.e),
            ("hbar", self.hbar),
            ("u_b", self.u_b),
            ("mu0", self.mu0),
            ("eps0", self.eps0),
            ("k_b", self.k_b),
            ("c", self.c),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.eps_he > 1.0) {
            return Err(Error::invalid(
                "eps_he",
                "dielectric constant must exceed 1",
            ));
        }
        Ok(())
    }

    /// Image-charge strength `(eps-1) e^2 / (16 pi eps0 (eps+1))` in J m.
    pub fn image_strength(&self) -> f64 {
        (self.eps_he - 1.0) * self.e * self.e / (16.0 * PI * self.eps0 * (self.eps_he + 1.0))
    }

    /// Effective Bohr radius `hbar^2 / (m_e Lambda)` of the image-potential atom (m).
    pub fn bohr_radius(&self) -> f64 {
        self.hbar * self.hbar / (self.m_e * self.image_strength())
    }

    /// Energy unit `Lambda / r_b` (J). The zero-field levels are `-1/(2 n^2)` of it.
    pub fn atomic_energy_unit(&self) -> f64 {
        self.image_strength() / self.bohr_radius()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = PhysicalConstants::default();
        c.validate().unwrap();
        assert!(c.image_strength() > 0.0);
    }

    #[test]
    fn bohr_radius_near_7_6_nm() {
        let r_b = PhysicalConstants::default().bohr_radius();
        assert!((r_b - 7.6e-9).abs() / 7.6e-9 < 0.01, "r_b = {r_b:e}");
    }

    #[test]
    fn bohr_radius_inverse_in_lambda() {
        // r_b ~ 1/Lambda; Lambda ~ (eps-1)/(eps+1). Doubling that ratio halves r_b.
        let c = PhysicalConstants::default();
        let ratio = (c.eps_he - 1.0) / (c.eps_he + 1.0);
        let doubled_ratio = 2.0 * ratio;
        let eps2 = (1.0 + doubled_ratio) / (1.0 - doubled_ratio);
        let c2 = PhysicalConstants { eps_he: eps2, ..c };
        assert!((c2.image_strength() / c.image_strength() - 2.0).abs() < 1e-12);
        assert!((c2.bohr_radius() / c.bohr_radius() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lambda_matches_hand_evaluation() {
        let c = PhysicalConstants::default();
        let coulomb = c.e * c.e / (4.0 * PI * c.eps0);
        let lambda = coulomb * 0.057 / (4.0 * 2.057);
        assert!((c.image_strength() / lambda - 1.0).abs() < 1e-12);
        // Lambda = hbar^2 / (m_e r_b) closes the loop.
        let back = c.hbar * c.hbar / (c.m_e * c.bohr_radius());
        assert!((back / c.image_strength() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_dielectric() {
        let c = PhysicalConstants {
            eps_he: 1.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }
}
