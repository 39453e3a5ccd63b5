use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `[lo, hi]` in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box3 {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl Box3 {
    pub fn contains(&self, p: [f64; 3], tol: f64) -> bool {
        (0..3).all(|i| p[i] >= self.lo[i] - tol && p[i] <= self.hi[i] + tol)
    }

    fn overlaps(&self, o: &Box3) -> bool {
        (0..3).all(|i| self.lo[i] < o.hi[i] && o.lo[i] < self.hi[i])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Electrode {
    pub name: String,
    pub segments: Vec<Box3>,
    pub voltage: f64,
}

/// One trap cell: a "+" electrode at `+V` under the trap center and a square
/// guard frame at `-V` in the same plane, `z = -h`, with the helium surface at
/// `z = 0`. The potential is pinned to zero on the faces of `[-pad, pad]^3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectrodeGeometry {
    /// Film thickness: depth of the electrode plane below the surface (m).
    pub h: f64,
    /// Cell length scale (m).
    pub l: f64,
    /// Wire cross-section edge (m).
    pub d: f64,
    /// Half-length of each cross arm (m).
    pub arm_half_length: f64,
    /// Half-size of the guard frame, measured to the wire centre line (m).
    pub frame_half_size: f64,
    /// Half-size of the grounded outer box (m).
    pub padding: f64,
    /// Voltage on the cross (V).
    pub v_plus: f64,
    /// Voltage on the guard frame (V).
    pub v_guard: f64,
    /// Voltage on the outer box (V).
    #[serde(default)]
    pub v_outer: f64,
}

impl ElectrodeGeometry {
    /// Default cell for film thickness `h`, cell length `l`, wire edge `d` and bias `v`.
    pub fn standard(h: f64, l: f64, d: f64, v: f64) -> Self {
        Self {
            h,
            l,
            d,
            arm_half_length: 0.5 * l,
            frame_half_size: 0.6 * l,
            padding: 3.0 * l,
            v_plus: v,
            v_guard: -v,
            v_outer: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("h", self.h),
            ("l", self.l),
            ("d", self.d),
            ("arm_half_length", self.arm_half_length),
            ("frame_half_size", self.frame_half_size),
            ("padding", self.padding),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.v_plus.is_finite() && self.v_guard.is_finite() && self.v_outer.is_finite()) {
            return Err(Error::invalid("voltage", "must be finite"));
        }
        if self.frame_half_size - self.d <= self.arm_half_length {
            return Err(Error::invalid(
                "frame_half_size",
                "guard frame must enclose the cross without touching it",
            ));
        }
        if self.padding < 3.0 * self.l || self.padding <= self.frame_half_size + self.h {
            return Err(Error::invalid(
                "padding",
                "outer box must extend at least 3 l from the cell center",
            ));
        }
        let plus = &self.electrodes()[0];
        let guard = &self.electrodes()[1];
        if plus
            .segments
            .iter()
            .any(|a| guard.segments.iter().any(|b| a.overlaps(b)))
        {
            return Err(Error::invalid("geometry", "electrodes overlap"));
        }
        Ok(())
    }

    /// The cross (two arms along x and y) and the four guard bars.
    pub fn electrodes(&self) -> Vec<Electrode> {
        let r = 0.5 * self.d;
        let zc = -self.h;
        let (a, f) = (self.arm_half_length, self.frame_half_size);
        let bx = |x0: f64, x1: f64, y0: f64, y1: f64| Box3 {
            lo: [x0, y0, zc - r],
            hi: [x1, y1, zc + r],
        };
        let plus = Electrode {
            name: "cross".into(),
            segments: vec![bx(-a, a, -r, r), bx(-r, r, -a, a)],
            voltage: self.v_plus,
        };
        let guard = Electrode {
            name: "guard".into(),
            segments: vec![
                bx(-f - r, f + r, f - r, f + r),
                bx(-f - r, f + r, -f - r, -f + r),
                bx(f - r, f + r, -f - r, f + r),
                bx(-f - r, -f + r, -f - r, f + r),
            ],
            voltage: self.v_guard,
        };
        vec![plus, guard]
    }

    /// Same geometry with voltages replaced.
    pub fn with_voltages(&self, v_plus: f64, v_guard: f64) -> Self {
        Self {
            v_plus,
            v_guard,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_cell_is_valid_and_symmetric() {
        let g = ElectrodeGeometry::standard(5e-6, 100e-6, 1e-6, 1.0);
        g.validate().unwrap();
        for e in g.electrodes() {
            for s in &e.segments {
                // Mirror images of every segment are covered by the same electrode.
                let mx = Box3 {
                    lo: [-s.hi[0], s.lo[1], s.lo[2]],
                    hi: [-s.lo[0], s.hi[1], s.hi[2]],
                };
                let my = Box3 {
                    lo: [s.lo[0], -s.hi[1], s.lo[2]],
                    hi: [s.hi[0], -s.lo[1], s.hi[2]],
                };
                assert!(e.segments.contains(&mx));
                assert!(e.segments.contains(&my));
            }
        }
    }

    #[test]
    fn frame_touching_cross_is_rejected() {
        let mut g = ElectrodeGeometry::standard(5e-6, 100e-6, 1e-6, 1.0);
        g.frame_half_size = g.arm_half_length;
        assert!(g.validate().is_err());
    }
}
