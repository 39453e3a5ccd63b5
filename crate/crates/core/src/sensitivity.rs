//! Minimal detectable mm-wave field from the echo phase threshold.

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::dynamics::{rabi_for_steady_excitation, steady_excitation};
use crate::error::{Error, Result};
use crate::params::{formulas, PhysicalConstants};

/// Literature detector figures printed next to the computed thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Benchmark {
    pub label: String,
    /// V/m, if the figure is a field.
    pub e_field: Option<f64>,
    /// W, if the figure is a power.
    pub power: Option<f64>,
    /// m^2 the power refers to.
    pub area: Option<f64>,
}

impl Benchmark {
    /// Power figures converted to an energy-flow density (W/m^2).
    pub fn power_density(&self) -> Option<f64> {
        Some(self.power? / self.area?)
    }
}

/// Rydberg-atom detector figures: 132 uV/cm minimal field and 190 fW over 40 um x 40 um.
pub fn default_benchmarks() -> Vec<Benchmark> {
    vec![
        Benchmark {
            label: "Rydberg minimal field".into(),
            e_field: Some(132e-6 * 1e2),
            power: None,
            area: None,
        },
        Benchmark {
            label: "Rydberg minimal power".into(),
            e_field: None,
            power: Some(190e-15),
            area: Some(40e-6 * 40e-6),
        },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityInputs {
    /// Phase that counts as detectable (rad).
    pub theta_min: f64,
    /// `Delta_a - Delta_s` (rad/s).
    pub detuning: f64,
    /// Transition dipole length `z12` (m).
    pub z12: f64,
}

impl SensitivityInputs {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta_min > 0.0) {
            return Err(Error::invalid(
                "theta_min",
                "threshold phase must be positive",
            ));
        }
        if self.detuning == 0.0 {
            return Err(Error::ResonantDetuning);
        }
        if self.z12 == 0.0 {
            return Err(Error::ForbiddenTransition);
        }
        Ok(())
    }
}

/// Default detectability threshold.
pub const DEFAULT_THETA_MIN: f64 = PI / 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRow {
    /// s
    pub delta_t: f64,
    /// rad/s
    pub omega_sz: f64,
    /// rad/s
    pub omega_12: f64,
    /// V/m
    pub e_w: f64,
    /// W/m^2
    pub p_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub schema_version: u32,
    pub inputs: SensitivityInputs,
    pub rows: Vec<SensitivityRow>,
    pub benchmarks: Vec<Benchmark>,
}

/// Threshold at one signal duration: `Omega_sz Delta_t = theta_min` with
/// `Omega_sz = Omega_12^2 / (Delta_a - Delta_s)`.
pub fn threshold_row(
    c: &PhysicalConstants,
    inp: &SensitivityInputs,
    delta_t: f64,
) -> Result<SensitivityRow> {
    inp.validate()?;
    if !(delta_t > 0.0) {
        return Err(Error::invalid("delta_t", "must be positive"));
    }
    let omega_sz = inp.theta_min / delta_t;
    let omega_12 = (omega_sz * inp.detuning.abs()).sqrt();
    let e_w = formulas::field_from_rabi(c, omega_12, inp.z12)?;
    Ok(SensitivityRow {
        delta_t,
        omega_sz,
        omega_12,
        e_w,
        p_w: formulas::power_density(c, e_w),
    })
}

pub fn sensitivity_curve(
    c: &PhysicalConstants,
    inp: &SensitivityInputs,
    delta_ts: &[f64],
    benchmarks: Vec<Benchmark>,
) -> Result<SensitivityReport> {
    let rows = delta_ts
        .iter()
        .map(|&t| threshold_row(c, inp, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(SensitivityReport {
        schema_version: 1,
        inputs: *inp,
        rows,
        benchmarks,
    })
}

/// `n` durations spaced logarithmically between `lo` and `hi`.
pub fn log_durations(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || n < 2 {
        return Err(Error::invalid(
            "delta_t range",
            "need 0 < lo < hi and at least two points",
        ));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect())
}

pub fn write_sensitivity_csv<W: Write>(mut w: W, r: &SensitivityReport) -> io::Result<()> {
    writeln!(
        w,
        "delta_t[s],Omega_sz[rad/s],Omega_12[rad/s],E_w[V/m],P_w[W/m^2]"
    )?;
    for row in &r.rows {
        writeln!(
            w,
            "{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
            row.delta_t, row.omega_sz, row.omega_12, row.e_w, row.p_w
        )?;
    }
    Ok(())
}

/// Readout geometry for the image-current estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageCurrentCase {
    pub label: String,
    /// m^-2
    pub n_s: f64,
    /// Plate area (m^2).
    pub plate_area: f64,
    /// Plate height above the film (m).
    pub plate_height: f64,
    /// Drive modulation (rad/s).
    pub omega_m: f64,
    /// Target steady excited population.
    pub p2_target: f64,
    /// Excited-state decay rate used to realise `p2_target` (1/s).
    pub gamma: f64,
}

impl ImageCurrentCase {
    /// Dense film (10^8 cm^-2) read out by a 1.2 cm radius plate 1 mm above it.
    pub fn dense_film() -> Self {
        Self {
            label: "dense film".into(),
            n_s: 1e8 * 1e4,
            plate_area: PI * 0.012 * 0.012,
            plate_height: 1e-3,
            omega_m: 2.0 * PI * 100e3,
            p2_target: 0.1,
            gamma: 1e7,
        }
    }

    /// Single-electron lattice (2x10^4 cm^-2) with a 2 cm x 2 cm plate 0.1 mm away.
    pub fn trapped_lattice() -> Self {
        Self {
            label: "trapped lattice".into(),
            n_s: 2e4 * 1e4,
            plate_area: 4e-4,
            plate_height: 0.1e-3,
            ..Self::dense_film()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageCurrentRow {
    pub label: String,
    /// Resonant drive that reaches the target population (rad/s).
    pub omega_12: f64,
    pub p2_steady: f64,
    /// `z22 - z11` (m).
    pub dz: f64,
    /// A
    pub i0: f64,
}

/// Image current with the steady population obtained from the damped
/// resonant drive rather than inserted by hand.
pub fn image_current_row(
    c: &PhysicalConstants,
    case: &ImageCurrentCase,
    dz: f64,
) -> Result<ImageCurrentRow> {
    let omega_12 = rabi_for_steady_excitation(case.gamma, case.p2_target, 0.0)?;
    let p2_steady = steady_excitation(case.gamma, omega_12, 0.0)?;
    let i0 = formulas::image_current(
        c,
        case.n_s,
        case.omega_m,
        p2_steady,
        case.plate_area,
        case.plate_height,
        dz,
    )?;
    Ok(ImageCurrentRow {
        label: case.label.clone(),
        omega_12,
        p2_steady,
        dz,
        i0,
    })
}
