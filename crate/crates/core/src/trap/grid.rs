use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tensor-product grid resolution settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Uniform spacing inside refined windows (m).
    pub fine: f64,
    /// Spacing growth factor between refined windows.
    pub growth: f64,
    /// Largest allowed spacing (m).
    pub max_spacing: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            fine: 0.5e-6,
            growth: 1.5,
            max_spacing: 40e-6,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.fine > 0.0) || !(self.max_spacing >= self.fine) {
            return Err(Error::invalid("grid", "need 0 < fine <= max_spacing"));
        }
        if !(self.growth >= 1.0 && self.growth < 2.0) {
            return Err(Error::invalid("grid", "growth factor must lie in [1, 2)"));
        }
        Ok(())
    }
}

/// Node coordinates on `[lo, hi]`: uniform `fine` spacing inside each window,
/// geometrically graded in between. Window edges snap outward to multiples of
/// `fine` measured from the window start so that electrode faces placed on
/// such multiples fall on nodes.
pub fn graded_axis(lo: f64, hi: f64, windows: &[(f64, f64)], spec: &GridSpec) -> Vec<f64> {
    let mut wins: Vec<(f64, f64)> = windows
        .iter()
        .map(|&(a, b)| (a.max(lo), b.min(hi)))
        .filter(|(a, b)| b > a)
        .collect();
    wins.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for w in wins {
        match merged.last_mut() {
            Some(last) if w.0 <= last.1 => last.1 = last.1.max(w.1),
            _ => merged.push(w),
        }
    }

    let mut nodes = vec![lo];
    let mut cursor = lo;
    for (a, b) in merged {
        fill_gap(&mut nodes, cursor, a, spec);
        let n = ((b - a) / spec.fine).round().max(1.0) as usize;
        let h = (b - a) / n as f64;
        for i in 1..=n {
            nodes.push(a + i as f64 * h);
        }
        cursor = b;
    }
    fill_gap(&mut nodes, cursor, hi, spec);
    nodes
}

/// Append nodes on `(a, b]`, spacing growing from `fine` at both ends.
fn fill_gap(nodes: &mut Vec<f64>, a: f64, b: f64, spec: &GridSpec) {
    let len = b - a;
    if len <= 0.0 {
        return;
    }
    // Symmetric graded profile; scaled to fit exactly.
    let mut half = Vec::new();
    let mut s = spec.fine;
    let mut total = 0.0;
    while 2.0 * total < len {
        half.push(s);
        total += s;
        s = (s * spec.growth).min(spec.max_spacing);
    }
    let mut steps: Vec<f64> = half.clone();
    steps.extend(half.iter().rev());
    let mut sum: f64 = steps.iter().sum();
    // Dropping the largest middle step keeps the profile symmetric enough and
    // avoids compressing spacings far below `fine`.
    while steps.len() > 1 && sum - steps[steps.len() / 2] >= len {
        let mid = steps.len() / 2;
        sum -= steps.remove(mid);
    }
    let scale = len / sum;
    let mut x = a;
    let count = steps.len();
    for (i, st) in steps.into_iter().enumerate() {
        x += st * scale;
        nodes.push(if i + 1 == count { b } else { x });
    }
}

/// Axis symmetric about zero: windows are mirrored, the positive half is built
/// and reflected so that `x -> -x` maps nodes onto nodes exactly.
pub fn symmetric_axis(half_extent: f64, windows: &[(f64, f64)], spec: &GridSpec) -> Vec<f64> {
    let mut pos_windows: Vec<(f64, f64)> = Vec::new();
    for &(a, b) in windows {
        let (a, b) = if b <= 0.0 {
            (-b, -a)
        } else if a < 0.0 {
            (0.0, b.max(-a))
        } else {
            (a, b)
        };
        pos_windows.push((a, b));
    }
    let half = graded_axis(0.0, half_extent, &pos_windows, spec);
    let mut out: Vec<f64> = half.iter().rev().map(|x| -x).collect();
    out.pop();
    out.extend(half);
    out
}
