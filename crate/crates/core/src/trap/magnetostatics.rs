//! Field of the infinite bias wire along y at depth `h` below the surface.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::PhysicalConstants;

/// Exact field and its first-order expansion about the trap centre, `(B_x, B_y, B_z)` in T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireField {
    pub exact: [f64; 3],
    pub approx: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorPotential {
    /// `A_y` (T m), exact logarithmic form, zero at the trap centre.
    pub exact: f64,
    /// Quadratic expansion.
    pub approx: f64,
}

fn check(h: f64, x: f64, z: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::invalid("h", "must be positive"));
    }
    let rho2 = x * x + (z + h) * (z + h);
    if rho2 <= (1e-12 * h).powi(2) {
        return Err(Error::WireSingularity);
    }
    Ok(rho2)
}

pub fn wire_field(c: &PhysicalConstants, i_dc: f64, h: f64, x: f64, z: f64) -> Result<WireField> {
    let rho2 = check(h, x, z)?;
    let k = c.mu0 * i_dc / (2.0 * PI);
    let b0 = k / h;
    Ok(WireField {
        exact: [-k * (z + h) / rho2, 0.0, k * x / rho2],
        approx: [-b0 * (1.0 - z / h), 0.0, b0 * x / h],
    })
}

pub fn wire_vector_potential(
    c: &PhysicalConstants,
    i_dc: f64,
    h: f64,
    x: f64,
    z: f64,
) -> Result<VectorPotential> {
    let rho2 = check(h, x, z)?;
    let b0 = c.mu0 * i_dc / (2.0 * PI * h);
    Ok(VectorPotential {
        exact: 0.5 * h * b0 * (rho2 / (h * h)).ln(),
        approx: b0 * (z - z * z / (2.0 * h) + x * x / (2.0 * h)),
    })
}

/// Sum of the fields of the two neighbouring wires at `x = +-l`, evaluated at
/// the trap centre. Their vertical parts cancel; what survives is `O(h^2/l^2)`.
pub fn neighbor_field(c: &PhysicalConstants, i_dc: f64, h: f64, l: f64) -> Result<[f64; 3]> {
    let a = wire_field(c, i_dc, h, l, 0.0)?.exact;
    let b = wire_field(c, i_dc, h, -l, 0.0)?.exact;
    Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2]])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxwellReport {
    /// Largest `|div B|` over the samples, in units of `scale`.
    pub max_div: f64,
    /// Largest `|curl B|` over the samples, in units of `scale`.
    pub max_curl: f64,
    pub scale: f64,
}

impl MaxwellReport {
    pub fn satisfied(&self, tol: f64) -> bool {
        self.max_div <= tol && self.max_curl <= tol
    }
}

/// Central-difference divergence and curl of `field` at `points`, reported
/// relative to `scale` (e.g. `B0/h`).
pub fn maxwell_checks(
    field: impl Fn([f64; 3]) -> Result<[f64; 3]>,
    points: &[[f64; 3]],
    step: f64,
    scale: f64,
) -> Result<MaxwellReport> {
    let mut max_div: f64 = 0.0;
    let mut max_curl: f64 = 0.0;
    for &p in points {
        // jac[i][j] = dB_i / dx_j
        let mut jac = [[0.0; 3]; 3];
        for j in 0..3 {
            let mut pp = p;
            let mut pm = p;
            pp[j] += step;
            pm[j] -= step;
            let (bp, bm) = (field(pp)?, field(pm)?);
            for i in 0..3 {
                jac[i][j] = (bp[i] - bm[i]) / (2.0 * step);
            }
        }
        let div = jac[0][0] + jac[1][1] + jac[2][2];
        let curl = [
            jac[2][1] - jac[1][2],
            jac[0][2] - jac[2][0],
            jac[1][0] - jac[0][1],
        ];
        let cn = curl.iter().map(|v| v * v).sum::<f64>().sqrt();
        max_div = max_div.max(div.abs() / scale);
        max_curl = max_curl.max(cn / scale);
    }
    Ok(MaxwellReport {
        max_div,
        max_curl,
        scale,
    })
}

/// Exact and truncated wire fields checked on a square of samples of
/// half-width `extent` around the trap centre.
pub fn wire_maxwell_reports(
    c: &PhysicalConstants,
    i_dc: f64,
    h: f64,
    extent: f64,
) -> Result<(MaxwellReport, MaxwellReport)> {
    let n = 5;
    let mut pts = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let x = extent * (2.0 * a as f64 / (n - 1) as f64 - 1.0);
            let z = extent * (2.0 * b as f64 / (n - 1) as f64 - 1.0);
            pts.push([x, 0.3 * extent, z]);
        }
    }
    let b0 = c.mu0 * i_dc / (2.0 * PI * h);
    let scale = b0 / h;
    let step = 1e-4 * h;
    let exact = maxwell_checks(
        |p| Ok(wire_field(c, i_dc, h, p[0], p[2])?.exact),
        &pts,
        step,
        scale,
    )?;
    let approx = maxwell_checks(
        |p| Ok(wire_field(c, i_dc, h, p[0], p[2])?.approx),
        &pts,
        step,
        scale,
    )?;
    Ok((exact, approx))
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: f64 = 0.5;
    const H: f64 = 5e-6;

    fn b0(c: &PhysicalConstants) -> f64 {
        c.mu0 * I / (2.0 * PI * H)
    }

    #[test]
    fn centre_field_is_minus_b0_x() {
        let c = PhysicalConstants::default();
        let f = wire_field(&c, I, H, 0.0, 0.0).unwrap();
        assert!((f.exact[0] / b0(&c) + 1.0).abs() < 1e-15);
        assert_eq!(f.exact[1..], [0.0, 0.0]);
        assert!((f.approx[0] - f.exact[0]).abs() < 1e-15 * b0(&c));
        assert!((b0(&c) - 0.02).abs() < 1e-12);
    }

    #[test]
    fn expansion_error_within_series_bound() {
        let c = PhysicalConstants::default();
        for a in -5..=5 {
            for b in -5..=5 {
                let (x, z) = (a as f64 * H / 55.0, b as f64 * H / 55.0);
                if a == 0 && b == 0 {
                    continue;
                }
                let f = wire_field(&c, I, H, x, z).unwrap();
                let diff = ((f.exact[0] - f.approx[0]).powi(2)
                    + (f.exact[2] - f.approx[2]).powi(2))
                .sqrt();
                let norm = (f.exact[0].powi(2) + f.exact[2].powi(2)).sqrt();
                // Complex-variable form: the relative error is exactly (x^2 + z^2)/h^2.
                let rel = diff / norm;
                assert!((rel / ((x * x + z * z) / (H * H)) - 1.0).abs() < 1e-6);
                assert!(rel <= ((x.abs() + z.abs()) / H).powi(2) * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn neighbours_nearly_cancel() {
        let c = PhysicalConstants::default();
        let s = neighbor_field(&c, I, H, 20.0 * H).unwrap();
        let norm = (s[0] * s[0] + s[2] * s[2]).sqrt();
        assert!(norm < 0.02 * b0(&c));
        assert!(s[2].abs() < 1e-15 * b0(&c));
    }

    #[test]
    fn wire_axis_is_singular() {
        let c = PhysicalConstants::default();
        assert_eq!(wire_field(&c, I, H, 0.0, -H), Err(Error::WireSingularity));
        assert_eq!(
            wire_vector_potential(&c, I, H, 0.0, -H),
            Err(Error::WireSingularity)
        );
    }

    #[test]
    fn curl_of_a_reproduces_b() {
        let c = PhysicalConstants::default();
        let s = 1e-4 * H;
        let mut worst: f64 = 0.0;
        for a in -3..=3 {
            for b in -3..=3 {
                let (x, z) = (a as f64 * 0.3 * H, b as f64 * 0.3 * H);
                let ay = |x: f64, z: f64| wire_vector_potential(&c, I, H, x, z).unwrap().exact;
                // B_x = -dA_y/dz, B_z = dA_y/dx
                let bx = -(ay(x, z + s) - ay(x, z - s)) / (2.0 * s);
                let bz = (ay(x + s, z) - ay(x - s, z)) / (2.0 * s);
                let f = wire_field(&c, I, H, x, z).unwrap().exact;
                let norm = (f[0] * f[0] + f[2] * f[2]).sqrt();
                worst = worst.max(((bx - f[0]).powi(2) + (bz - f[2]).powi(2)).sqrt() / norm);
            }
        }
        assert!(worst < 1e-4, "{worst}");
    }

    #[test]
    fn expansion_of_a_vanishes_at_centre() {
        let c = PhysicalConstants::default();
        let a = wire_vector_potential(&c, I, H, 0.0, 0.0).unwrap();
        assert_eq!(a.approx, 0.0);
        assert_eq!(a.exact, 0.0);
    }

    #[test]
    fn maxwell_exact_and_truncated() {
        let c = PhysicalConstants::default();
        let (exact, approx) = wire_maxwell_reports(&c, I, H, 0.5 * H).unwrap();
        assert!(exact.satisfied(1e-6), "{exact:?}");
        assert!(approx.satisfied(1e-9), "{approx:?}");
    }

    #[test]
    fn uniform_field_is_source_free() {
        let r = maxwell_checks(
            |_| Ok([1e-3, -2e-3, 0.5e-3]),
            &[[0.0; 3], [1.0, 2.0, 3.0]],
            1e-3,
            1.0,
        )
        .unwrap();
        assert_eq!(r.max_div, 0.0);
        assert_eq!(r.max_curl, 0.0);
    }
}
