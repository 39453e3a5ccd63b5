//! Solve the default trap cell and print the fitted coefficients per volt.
//!
//! Geometry and grid overrides come from the environment (lengths in um):
//! `FRAME`, `ARM`, `PAD`, `GROWTH`, `MAXSP`, `RADIUS`.

use std::time::Instant;

use heliosense_core::trap::{
    fit_trap, solve_laplace, ElectrodeGeometry, GridSpec, RelaxationSettings,
};

fn env(name: &str) -> Option<f64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn main() {
    let mut geom = ElectrodeGeometry::standard(5e-6, 100e-6, 1e-6, 1.0);
    let mut grid = GridSpec::default();
    if let Some(f) = env("FRAME") {
        geom.frame_half_size = f * 1e-6;
    }
    if let Some(a) = env("ARM") {
        geom.arm_half_length = a * 1e-6;
    }
    if let Some(p) = env("PAD") {
        geom.padding = p * 1e-6;
    }
    if let Some(g) = env("GROWTH") {
        grid.growth = g;
    }
    if let Some(m) = env("MAXSP") {
        grid.max_spacing = m * 1e-6;
    }
    let radius = env("RADIUS").unwrap_or(3.0) * 1e-6;
    let t = Instant::now();
    let map = solve_laplace(&geom, &grid, radius, &RelaxationSettings::default()).unwrap();
    let (nx, ny, nz) = map.dims();
    println!(
        "grid {nx}x{ny}x{nz}, {} iterations, {:.1?}",
        map.sweeps,
        t.elapsed()
    );
    for r in [radius, radius / 2.0] {
        let f = fit_trap(&map, r).unwrap();
        println!(
            "r={:.1}um E_z={:.4e} V/m Q_xx={:.4e} Q_yy={:.4e} Q_zz={:.4e} V/m^2 trace={:.3} sym={:.2e} resid={:.2e} V",
            r * 1e6,
            f.e_z,
            f.q_xx,
            f.q_yy,
            f.q_zz,
            f.trace_ratio(),
            f.symmetry_violation(),
            f.residual
        );
    }
}
