//! Glue between the hydrogen solve, the closed-form chain and the quantum model.

use crate::error::Result;
use crate::hydrogen1d::{scan_point, ScanSettings};
use crate::params::{AtomicDipoles, DerivedParameters, ParameterSet, PhysicalConstants};
use crate::quantum::ModelParams;
use crate::trap::{
    fit_trap, solve_laplace, ElectrodeGeometry, GridSpec, QuadrupoleFit, RelaxationSettings,
};

/// Two-level projection at the pressing field `e_z` from the hydrogen solve.
pub fn hydrogen_dipoles(c: &PhysicalConstants, e_z: f64) -> Result<AtomicDipoles> {
    hydrogen_dipoles_with(c, &ScanSettings::new(c), e_z)
}

pub fn hydrogen_dipoles_with(
    c: &PhysicalConstants,
    s: &ScanSettings,
    e_z: f64,
) -> Result<AtomicDipoles> {
    Ok(scan_point(c, s, e_z)?.dipoles())
}

/// Full chain with dipoles solved at the configured pressing field.
pub fn derive_from_hydrogen(c: &PhysicalConstants, p: &ParameterSet) -> Result<DerivedParameters> {
    let dip = hydrogen_dipoles(c, p.e_z)?;
    DerivedParameters::compute(c, p, dip)
}

pub fn model_from_hydrogen(
    c: &PhysicalConstants,
    p: &ParameterSet,
) -> Result<(DerivedParameters, ModelParams)> {
    let d = derive_from_hydrogen(c, p)?;
    let m = ModelParams::from_derived(&d, p);
    Ok((d, m))
}

/// Trap coefficients per volt of bias for the cell described by `p`.
pub fn trap_fit_per_volt(
    p: &ParameterSet,
    grid: &GridSpec,
    relax: &RelaxationSettings,
    radius: f64,
) -> Result<QuadrupoleFit> {
    let geom = ElectrodeGeometry::standard(p.h, p.l, p.d, 1.0);
    let map = solve_laplace(&geom, grid, radius, relax)?;
    fit_trap(&map, radius)
}

/// Copy of `p` whose pressing field and curvatures come from a per-volt fit.
pub fn with_trap_fit(p: &ParameterSet, fit: &QuadrupoleFit) -> ParameterSet {
    ParameterSet {
        e_z: fit.e_z * p.v_bias,
        q_xx_per_volt: fit.q_xx,
        q_yy_per_volt: fit.q_yy,
        q_zz_per_volt: fit.q_zz,
        ..p.clone()
    }
}
