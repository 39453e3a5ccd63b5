use serde::{Deserialize, Serialize};

use crate::params::DerivedParameters;
use crate::quantum::{CMatrix, C64};

pub type Spin2 = nalgebra::Matrix2<C64>;

/// Renormalised spin eigenfrequencies (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinFrequencies {
    pub omega_down: f64,
    pub omega_up: f64,
}

impl SpinFrequencies {
    /// `omega_down = (1 - 2 eta1) omega_s / 2`, `omega_up = omega_down - Omega_sx1`.
    pub fn new(omega_s: f64, eta1: f64, omega_sx1: f64) -> Self {
        let omega_down = (1.0 - 2.0 * eta1) * omega_s / 2.0;
        Self {
            omega_down,
            omega_up: omega_down - omega_sx1,
        }
    }

    pub fn from_derived(d: &DerivedParameters) -> Self {
        Self::new(d.omega_s, d.eta.eta1, d.shifts.omega_sx1)
    }

    pub fn sum(&self) -> f64 {
        self.omega_down + self.omega_up
    }

    /// Both frequencies moved by `shift` (a common offset refocused by the echo).
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            omega_down: self.omega_down + shift,
            omega_up: self.omega_up + shift,
        }
    }
}

fn phase(x: f64) -> C64 {
    C64::from_polar(1.0, x)
}

/// Free evolution `diag(e^{i omega_down t}, e^{-i omega_up t})`.
pub fn u0(f: &SpinFrequencies, t: f64) -> Spin2 {
    Spin2::new(
        phase(f.omega_down * t),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        phase(-f.omega_up * t),
    )
}

/// Free evolution with accumulated noise phases: `int delta_omega_down` and `int delta_omega_up`.
pub fn u0_noisy(f: &SpinFrequencies, t: f64, int_down: f64, int_up: f64) -> Spin2 {
    Spin2::new(
        phase(f.omega_down * t + int_down),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        phase(-(f.omega_up * t + int_up)),
    )
}

/// Resonant ESR rotation
/// `[[cos(a/2), -i e^{i theta} sin(a/2)], [-i e^{-i theta} sin(a/2), cos(a/2)]]`, `a = Omega_s t`.
pub fn r_pulse(omega_s: f64, t: f64, theta: f64) -> Spin2 {
    let half = 0.5 * omega_s * t;
    let (s, c) = half.sin_cos();
    let mi = C64::new(0.0, -1.0);
    Spin2::new(
        C64::new(c, 0.0),
        mi * phase(theta) * s,
        mi * phase(-theta) * s,
        C64::new(c, 0.0),
    )
}

/// ESR pulse with the spin transition detuned by `delta` (rad/s) from the drive:
/// `exp(-i [(Omega_s/2)(e^{i theta}|down><up| + h.c.) + (delta/2) diag(-1, 1)] t)`.
/// Reduces to [`r_pulse`] at `delta = 0`.
pub fn r_pulse_detuned(omega_s: f64, t: f64, theta: f64, delta: f64) -> Spin2 {
    let w = (omega_s * omega_s + delta * delta).sqrt();
    if w == 0.0 {
        return Spin2::identity();
    }
    let half = 0.5 * w * t;
    let (s, c) = half.sin_cos();
    let mi = C64::new(0.0, -1.0);
    // exp(-i (w/2) n.sigma t) with n = (Omega_s e^{i theta}, delta) / w
    let nz = delta / w;
    let nxy = omega_s / w;
    Spin2::new(
        C64::new(c, nz * s),
        mi * phase(theta) * (nxy * s),
        mi * phase(-theta) * (nxy * s),
        C64::new(c, -nz * s),
    )
}

/// Signal insertion `diag(e^{-i Omega_sz dt}, 1)`.
pub fn u_signal(omega_sz: f64, delta_t: f64) -> Spin2 {
    Spin2::new(
        phase(-omega_sz * delta_t),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
    )
}

pub fn unitarity_error2(u: &Spin2) -> f64 {
    (u.adjoint() * u - Spin2::identity())
        .iter()
        .fold(0.0f64, |a, z| a.max(z.norm()))
}

pub fn to_dense(u: &Spin2) -> CMatrix {
    CMatrix::from_fn(2, 2, |r, c| u[(r, c)])
}
