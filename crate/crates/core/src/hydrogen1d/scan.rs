use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::solver::{dipole_elements, solve_spectrum, Potential1D, SolverOptions};
use crate::error::{Error, Result};
use crate::params::{AtomicDipoles, PhysicalConstants, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    /// V/m
    pub e_z: f64,
    /// rad/s
    pub omega_a: f64,
    pub z11: f64,
    pub z12: f64,
    pub z22: f64,
}

impl ScanRow {
    pub fn dipoles(&self) -> AtomicDipoles {
        AtomicDipoles {
            z11: self.z11,
            z12: self.z12,
            z22: self.z22,
            omega_a: self.omega_a,
            source: Provenance::HydrogenSolve,
        }
    }
}

/// Template for each row's solve; the field is overwritten per row.
#[derive(Debug, Clone)]
pub struct ScanSettings {
    pub template: Potential1D,
    pub n_levels: usize,
    pub options: SolverOptions,
}

impl ScanSettings {
    pub fn new(c: &PhysicalConstants) -> Self {
        Self {
            template: Potential1D::new(c, 0.0),
            n_levels: 4,
            options: SolverOptions::default(),
        }
    }
}

pub fn scan_point(c: &PhysicalConstants, s: &ScanSettings, e_z: f64) -> Result<ScanRow> {
    let pot = Potential1D {
        e_z,
        ..s.template.clone()
    };
    let spec = solve_spectrum(c, &pot, s.n_levels, &s.options)?;
    let d = dipole_elements(c, &spec);
    Ok(ScanRow {
        e_z,
        omega_a: spec.transition(c, 1, 2),
        z11: d.get(1, 1),
        z12: d.get(1, 2).abs(),
        z22: d.get(2, 2),
    })
}

/// Rows are solved in parallel and returned in input order.
pub fn stark_scan(c: &PhysicalConstants, s: &ScanSettings, fields: &[f64]) -> Result<Vec<ScanRow>> {
    if let Some(&bad) = fields.iter().find(|&&f| !(f >= 0.0)) {
        return Err(Error::InvalidPotential(format!(
            "scan field {bad} is negative"
        )));
    }
    fields.par_iter().map(|&f| scan_point(c, s, f)).collect()
}

pub fn is_strictly_increasing(rows: &[ScanRow]) -> bool {
    rows.windows(2).all(|w| w[1].omega_a > w[0].omega_a)
}

/// Field at which `omega_a` equals `target` (rad/s), by bisection on `[lo, hi]`.
pub fn find_field_for(
    c: &PhysicalConstants,
    s: &ScanSettings,
    target: f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<f64> {
    let f = |e: f64| scan_point(c, s, e).map(|r| r.omega_a - target);
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a)?, f(b)?);
    if fa * fb > 0.0 {
        return Err(Error::invalid(
            "target",
            format!("transition {target:e} rad/s not bracketed by fields [{lo}, {hi}] V/m"),
        ));
    }
    let mut fa = fa;
    while (b - a) > rel_tol * b.abs().max(1e-300) {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

pub fn write_scan_csv<W: Write>(rows: &[ScanRow], mut w: W) -> io::Result<()> {
    writeln!(w, "E_z[V/m],omega_a[rad/s],z11[m],z12[m],z22[m]")?;
    for r in rows {
        writeln!(
            w,
            "{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
            r.e_z, r.omega_a, r.z11, r.z12, r.z22
        )?;
    }
    Ok(())
}
