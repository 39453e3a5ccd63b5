use std::fmt;
use std::io::{self, Write};

use serde::Serialize;

use super::constants::PhysicalConstants;
use super::derived::{DerivedParameters, Provenance};
use super::formulas;
use super::parameter_set::ParameterSet;
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub quantity: String,
    pub value: f64,
    pub unit: String,
    pub formula: String,
    pub relation: String,
    pub provenance: Provenance,
}

/// Flat key-value provenance table of a derived parameter chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProvenanceReport {
    pub schema_version: u32,
    pub rows: Vec<ReportRow>,
    pub flags: Vec<(String, bool)>,
    pub notes: Vec<String>,
}

impl ProvenanceReport {
    pub fn row(&self, quantity: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    /// `quantity,value,unit,formula,relation,provenance` rows; text cells are quoted.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let q = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
        writeln!(w, "quantity,value,unit,formula,relation,provenance")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{:.9e},{},{},{},{}",
                q(&r.quantity),
                r.value,
                q(&r.unit),
                q(&r.formula),
                q(&r.relation),
                r.provenance.as_str()
            )?;
        }
        Ok(())
    }

    pub fn all_flags_ok(&self) -> bool {
        self.flags.iter().all(|(_, ok)| *ok)
    }

    /// Assemble the table. `p2_steady` feeds the image-current estimate.
    pub fn build(
        c: &PhysicalConstants,
        p: &ParameterSet,
        d: &DerivedParameters,
        p2_steady: f64,
    ) -> Result<Self> {
        let mut rows = Vec::new();
        let mut push =
            |q: &str, v: f64, unit: &str, formula: &str, relation: &str, prov: Provenance| {
                rows.push(ReportRow {
                    quantity: q.to_string(),
                    value: v,
                    unit: unit.to_string(),
                    formula: formula.to_string(),
                    relation: relation.to_string(),
                    provenance: prov,
                })
            };
        use Provenance::*;
        let dip = d.dipoles.source;
        let (qx, qy, qz) = p.quadrupole();

        push("I_dc", p.i_dc, "A", "-", "bias wire current", Input);
        push("h", p.h, "m", "-", "helium film thickness", Input);
        push("V_bias", p.v_bias, "V", "-", "trap bias voltage", Input);
        push("E_z", p.e_z, "V/m", "-", "vertical pressing field", Input);
        push(
            "Q_xx",
            qx,
            "V/m^2",
            "Q_xx_per_volt*V",
            "lateral curvature",
            Input,
        );
        push(
            "Q_yy",
            qy,
            "V/m^2",
            "Q_yy_per_volt*V",
            "lateral curvature",
            Input,
        );
        push(
            "Q_zz",
            qz,
            "V/m^2",
            "Q_zz_per_volt*V",
            "vertical curvature",
            Input,
        );
        push(
            "Lambda",
            c.image_strength(),
            "J*m",
            "(eps-1)e^2/(16 pi eps0 (eps+1))",
            "image-charge strength",
            Derived,
        );
        push(
            "r_b",
            c.bohr_radius(),
            "m",
            "hbar^2/(m_e Lambda)",
            "effective Bohr radius",
            Derived,
        );
        push(
            "z11",
            d.dipoles.z11,
            "m",
            "<1|z|1>",
            "ground-level mean height",
            dip,
        );
        push(
            "z12",
            d.dipoles.z12,
            "m",
            "<1|z|2>",
            "transition dipole length",
            dip,
        );
        push(
            "z22",
            d.dipoles.z22,
            "m",
            "<2|z|2>",
            "excited-level mean height",
            dip,
        );
        push(
            "omega_a",
            d.dipoles.omega_a,
            "rad/s",
            "(E2-E1)/hbar",
            "atomic transition",
            dip,
        );
        push(
            "B0",
            d.b0,
            "T",
            "mu0 I_dc/(2 pi h)",
            "peak wire field at the electron",
            Derived,
        );
        push(
            "omega_s",
            d.omega_s,
            "rad/s",
            "2 u_b B0/hbar",
            "Zeeman splitting of the spin qubit",
            Derived,
        );
        push(
            "omega_x",
            d.omega_x,
            "rad/s",
            "sqrt(2 e Q_xx/m_e)",
            "lateral trap frequency",
            Derived,
        );
        push(
            "omega_y",
            d.omega_y,
            "rad/s",
            "sqrt(2 e Q_yy/m_e)",
            "lateral trap frequency",
            Derived,
        );
        push(
            "x0",
            d.x0,
            "m",
            "sqrt(hbar/(2 m_e omega_x))",
            "lateral zero-point length",
            Derived,
        );
        push(
            "eta0",
            d.eta.eta0,
            "1",
            "x0/(2h)",
            "spin-oscillator coupling ratio",
            Derived,
        );
        push(
            "eta1",
            d.eta.eta1,
            "1",
            "z11/(2h)",
            "level-1 field-gradient ratio",
            Derived,
        );
        push(
            "eta2",
            d.eta.eta2,
            "1",
            "z22/(2h)",
            "level-2 field-gradient ratio",
            Derived,
        );
        push(
            "Delta_s",
            d.delta_s,
            "rad/s",
            "omega_s (eta2-eta1)",
            "spin-dependent linear Stark shift",
            Derived,
        );
        push(
            "Delta_a",
            d.delta_a,
            "rad/s",
            "omega_T-omega_a",
            "drive-atom detuning",
            Input,
        );
        push(
            "Delta_x",
            d.delta_x,
            "rad/s",
            "omega_x-omega_s",
            "spin-oscillator detuning",
            Derived,
        );
        push(
            "Omega_12",
            p.omega_12,
            "rad/s",
            "e E_w z12/hbar",
            "drive Rabi frequency",
            Input,
        );
        push(
            "Omega_sz",
            d.shifts.omega_sz,
            "rad/s",
            "Omega_12^2/(Delta_a-Delta_s)",
            "two-photon ac-Stark shift (signal)",
            Derived,
        );
        push(
            "Omega_sx1",
            d.shifts.omega_sx1,
            "rad/s",
            "eta0^2 omega_s^2/(omega_x-omega_s(1-2 eta1))",
            "spin-oscillator dispersive shift, level 1",
            Derived,
        );
        push(
            "Omega_sx2",
            d.shifts.omega_sx2,
            "rad/s",
            "eta0^2 omega_s^2/(omega_x-omega_s(1-2 eta2))",
            "spin-oscillator dispersive shift, level 2",
            Derived,
        );
        push(
            "B_tilde_z",
            d.b_tilde_z,
            "T",
            "mu0 I_0/(pi l)",
            "ESR antenna field",
            Derived,
        );
        push(
            "Omega_s",
            d.omega_s_esr,
            "rad/s",
            "u_b B_tilde_z/hbar",
            "ESR Rabi frequency",
            Derived,
        );
        push(
            "delta_t",
            d.half_pi_pulse(),
            "s",
            "pi/(2 Omega_s)",
            "pi/2 pulse duration",
            Derived,
        );

        let e_w = formulas::field_from_rabi(c, p.omega_12, d.dipoles.z12)?;
        push(
            "E_w",
            e_w,
            "V/m",
            "hbar Omega_12/(e z12)",
            "mm-wave field amplitude",
            Derived,
        );
        push(
            "P_w",
            formulas::power_density(c, e_w),
            "W/m^2",
            "c eps0 E_w^2",
            "mm-wave energy-flow density",
            Derived,
        );
        let i0 = formulas::image_current(
            c,
            p.n_s,
            p.omega_m,
            p2_steady,
            p.plate_area,
            p.plate_height,
            d.dipoles.z22 - d.dipoles.z11,
        )?;
        push(
            "P2_steady",
            p2_steady,
            "1",
            "-",
            "steady excited population",
            Input,
        );
        push(
            "i0",
            i0,
            "A",
            "e n_s omega_m P2 S/D (z22-z11)",
            "image current on detection plate",
            Derived,
        );
        let lorentz = formulas::lorentz_term_magnitude(c, d.omega_y, d.dipoles.z12);
        push(
            "u_12",
            lorentz.u_nm,
            "A*m^2",
            "e z12 sqrt(hbar omega_y/(8 m_e))",
            "orbital moment of the Lorentz term",
            Derived,
        );
        push(
            "u_12/u_b",
            lorentz.ratio_to_bohr_magneton,
            "1",
            "u_12/u_b",
            "Lorentz-term negligibility",
            Derived,
        );
        push(
            "J_dc",
            d.current_density,
            "A/m^2",
            "I_dc/d^2",
            "wire current density",
            Derived,
        );
        push(
            "hbar omega_s/(k_B T)",
            d.zeeman_to_thermal,
            "1",
            "hbar omega_s/(k_B T)",
            "spin ground-state initialisation",
            Derived,
        );

        let f = d.flags;
        let flags = vec![
            ("eta0,eta1,eta2 < 0.1".to_string(), f.eta_small),
            (
                "Omega_12 < 0.1 |Delta_a-Delta_s|".to_string(),
                f.large_detuning,
            ),
            (
                "Delta_x > omega_s".to_string(),
                f.spin_oscillator_dispersive,
            ),
            ("hbar omega_s > k_B T".to_string(), f.thermal_ground_state),
            ("J_dc < 1e12 A/m^2".to_string(), f.below_critical_current),
        ];

        let mut notes = Vec::new();
        let quoted_b0 = 0.01;
        if p.i_dc == 0.5 && p.h == 5e-6 {
            notes.push(format!(
                "B0 evaluates to {:.4} T; the often-quoted {quoted_b0} T for this current and film is half the formula value, \
                 and only {:.4} T reproduces omega_s ~ 3.5e9 rad/s",
                d.b0, d.b0
            ));
        }
        notes.push("all frequencies are angular (rad/s); divide by 2 pi for Hz".to_string());

        Ok(Self {
            schema_version: SCHEMA_VERSION,
            rows,
            flags,
            notes,
        })
    }
}

impl fmt::Display for ProvenanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<22} {:>14} {:<8} {:<15} {:<45} relation",
            "quantity", "value", "unit", "provenance", "formula"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<22} {:>14.6e} {:<8} {:<15} {:<45} {}",
                r.quantity,
                r.value,
                r.unit,
                r.provenance.as_str(),
                r.formula,
                r.relation
            )?;
        }
        writeln!(f)?;
        for (name, ok) in &self.flags {
            writeln!(f, "[{}] {}", if *ok { "ok" } else { "VIOLATED" }, name)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{AtomicDipoles, ParameterSet};

    #[test]
    fn report_contains_stark_row_and_units() {
        let c = PhysicalConstants::default();
        let r_b = c.bohr_radius();
        let dip = AtomicDipoles {
            z11: 1.41 * r_b,
            z12: 0.61 * r_b,
            z22: 4.39 * r_b,
            omega_a: 9.8e11,
            source: Provenance::HydrogenSolve,
        };
        let p = ParameterSet::default();
        let d = DerivedParameters::compute(&c, &p, dip).unwrap();
        let rep = ProvenanceReport::build(&c, &p, &d, 0.1).unwrap();
        let ds = rep.row("Delta_s").unwrap();
        assert_eq!(ds.unit, "rad/s");
        assert!(rep.all_flags_ok());
        for row in &rep.rows {
            assert!(!row.unit.is_empty());
        }
        let text = rep.to_string();
        assert!(text.contains("Omega_sz"));
        assert!(text.contains("note: B0 evaluates to 0.0200 T"));
    }

    #[test]
    fn report_quantities_are_audited() {
        let c = PhysicalConstants::default();
        let p = ParameterSet::default();
        let dip = AtomicDipoles {
            z11: 1.5e-8,
            z12: 4e-9,
            z22: 4e-8,
            omega_a: 1e12,
            source: Provenance::Reference,
        };
        let d = DerivedParameters::compute(&c, &p, dip).unwrap();
        let rep = ProvenanceReport::build(&c, &p, &d, 0.1).unwrap();
        for q in [
            "B0",
            "omega_s",
            "omega_x",
            "eta0",
            "Delta_s",
            "Omega_sz",
            "Omega_sx1",
            "E_w",
            "P_w",
            "i0",
        ] {
            assert!(rep.row(q).is_some(), "{q}");
            assert!(crate::params::units::lookup(q).is_some(), "{q}");
        }
    }
}
