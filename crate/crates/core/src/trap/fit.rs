use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::laplace::FieldMap;
use crate::error::{Error, Result};

/// Coefficients of `V0 + x E_x + y E_y + z E_z + x^2 Q_xx + y^2 Q_yy + z^2 Q_zz
/// + xy Q_xy + xz Q_xz + yz Q_yz` about the fit centre.
///
/// Values refer to whatever function was sampled; [`fit_trap`] feeds it the
/// electron's potential energy per unit charge, `-phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadrupoleFit {
    pub v0: f64,
    pub e_x: f64,
    pub e_y: f64,
    pub e_z: f64,
    pub q_xx: f64,
    pub q_yy: f64,
    pub q_zz: f64,
    pub q_xy: f64,
    pub q_xz: f64,
    pub q_yz: f64,
    /// RMS deviation of the samples from the fitted polynomial (V).
    pub residual: f64,
    pub radius: f64,
    pub samples: usize,
}

impl QuadrupoleFit {
    /// `|Q_xx + Q_yy + Q_zz| / |Q_zz|`.
    pub fn trace_ratio(&self) -> f64 {
        (self.q_xx + self.q_yy + self.q_zz).abs() / self.q_zz.abs()
    }

    /// Largest symmetry-forbidden term relative to the dominant allowed term
    /// of the same order: gradients against `E_z`, cross curvatures against
    /// the largest diagonal curvature.
    pub fn symmetry_violation(&self) -> f64 {
        let qmax = self.q_xx.abs().max(self.q_yy.abs()).max(self.q_zz.abs());
        let g = self.e_x.abs().max(self.e_y.abs()) / self.e_z.abs();
        let q = self.q_xy.abs().max(self.q_xz.abs()).max(self.q_yz.abs()) / qmax;
        g.max(q)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            v0: self.v0 * s,
            e_x: self.e_x * s,
            e_y: self.e_y * s,
            e_z: self.e_z * s,
            q_xx: self.q_xx * s,
            q_yy: self.q_yy * s,
            q_zz: self.q_zz * s,
            q_xy: self.q_xy * s,
            q_xz: self.q_xz * s,
            q_yz: self.q_yz * s,
            residual: self.residual * s.abs(),
            ..*self
        }
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        self.v0
            + x * self.e_x
            + y * self.e_y
            + z * self.e_z
            + x * x * self.q_xx
            + y * y * self.q_yy
            + z * z * self.q_zz
            + x * y * self.q_xy
            + x * z * self.q_xz
            + y * z * self.q_yz
    }
}

/// Least-squares fit of the ten monomials to `(dx, dy, dz, value)` samples
/// given relative to the centre. Coordinates are scaled by `radius` so the
/// normal problem is well conditioned; solved by SVD.
pub fn fit_samples(samples: &[[f64; 4]], radius: f64) -> Result<QuadrupoleFit> {
    if samples.len() < 20 {
        return Err(Error::DegenerateFit(format!(
            "{} samples for 10 coefficients",
            samples.len()
        )));
    }
    let n = samples.len();
    let mut a = DMatrix::<f64>::zeros(n, 10);
    let mut b = DVector::<f64>::zeros(n);
    for (r, s) in samples.iter().enumerate() {
        let (x, y, z) = (s[0] / radius, s[1] / radius, s[2] / radius);
        let row = [1.0, x, y, z, x * x, y * y, z * z, x * y, x * z, y * z];
        for (c, v) in row.iter().enumerate() {
            a[(r, c)] = *v;
        }
        b[r] = s[3];
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-10 * smax) {
        return Err(Error::DegenerateFit(format!(
            "design matrix rank deficient (singular values {smin:.3e} / {smax:.3e})"
        )));
    }
    let coef = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::DegenerateFit(e.to_string()))?;
    let resid = (&a * &coef - &b).norm() / (n as f64).sqrt();
    let r = radius;
    Ok(QuadrupoleFit {
        v0: coef[0],
        e_x: coef[1] / r,
        e_y: coef[2] / r,
        e_z: coef[3] / r,
        q_xx: coef[4] / (r * r),
        q_yy: coef[5] / (r * r),
        q_zz: coef[6] / (r * r),
        q_xy: coef[7] / (r * r),
        q_xz: coef[8] / (r * r),
        q_yz: coef[9] / (r * r),
        residual: resid,
        radius,
        samples: n,
    })
}

/// Fit-ball radius around the trap center used by default (m).
pub const DEFAULT_FIT_RADIUS: f64 = 3e-6;

/// Fit the physical potential `phi` sampled inside a ball.
pub fn fit_quadrupole(map: &FieldMap, center: [f64; 3], radius: f64) -> Result<QuadrupoleFit> {
    let inside = |ax: &[f64], c: f64| ax[0] <= c - radius && ax[ax.len() - 1] >= c + radius;
    if !(inside(&map.xs, center[0]) && inside(&map.ys, center[1]) && inside(&map.zs, center[2])) {
        return Err(Error::DegenerateFit(
            "fit ball extends past the grid".into(),
        ));
    }
    if map.ball_touches_electrode(center, radius) {
        return Err(Error::DegenerateFit(
            "fit ball contains electrode nodes".into(),
        ));
    }
    fit_samples(&map.samples_in_ball(center, radius), radius)
}

/// Trap coefficients: fit of `-phi`, the electron's potential energy per unit
/// charge, so positive curvature confines and positive `E_z` presses the
/// electron towards the film.
pub fn fit_trap(map: &FieldMap, radius: f64) -> Result<QuadrupoleFit> {
    Ok(fit_quadrupole(map, [0.0; 3], radius)?.scaled(-1.0))
}

/// Largest relative change of `E_z`, `Q_xx`, `Q_yy`, `Q_zz` when the fit
/// radius is halved.
pub fn fit_stability(map: &FieldMap, radius: f64) -> Result<f64> {
    let a = fit_trap(map, radius)?;
    let b = fit_trap(map, 0.5 * radius)?;
    let rel = |x: f64, y: f64| ((x - y) / x).abs();
    Ok(rel(a.e_z, b.e_z)
        .max(rel(a.q_xx, b.q_xx))
        .max(rel(a.q_yy, b.q_yy))
        .max(rel(a.q_zz, b.q_zz)))
}
