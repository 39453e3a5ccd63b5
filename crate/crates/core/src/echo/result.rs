use serde::{Deserialize, Serialize};

use crate::quantum::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub shot: u64,
    /// Interference phase of this realisation, `theta - theta_tilde` (rad).
    pub theta: f64,
    pub p_down: f64,
    pub theta_tilde: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingStats {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub max_abs: f64,
    /// Standard deviation from the noise spectrum, when the process allows a closed form.
    pub analytic_std: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EchoResult {
    /// Interference phase `baseline_phase + signal_phase` (rad).
    pub theta: f64,
    /// `(omega_down + omega_up)(T2 - T1)`, removed by calibration.
    pub baseline_phase: f64,
    /// Signal phase `Omega_sz Delta_t` as extracted by the path that produced the result.
    pub signal_phase: f64,
    /// Ground-state probability of the final state.
    pub p_down: f64,
    /// `[re, im]` of the final down and up amplitudes.
    pub amplitudes: [[f64; 2]; 2],
    pub shots: Vec<ShotRecord>,
    pub p_down_mean: f64,
    pub p_down_var: f64,
    pub p_down_std_error: f64,
    pub theta_tilde: Option<DephasingStats>,
    pub max_unitarity_error: f64,
    pub norm_error: f64,
    /// Population lost from the spin block of a multi-level signal model.
    pub leakage: f64,
}

impl EchoResult {
    pub(crate) fn single(
        theta: f64,
        baseline: f64,
        signal: f64,
        amps: [C64; 2],
        max_u: f64,
    ) -> Self {
        let p_down = amps[0].norm_sqr();
        let norm = (amps[0].norm_sqr() + amps[1].norm_sqr()).sqrt();
        Self {
            theta,
            baseline_phase: baseline,
            signal_phase: signal,
            p_down,
            amplitudes: [[amps[0].re, amps[0].im], [amps[1].re, amps[1].im]],
            shots: Vec::new(),
            p_down_mean: p_down,
            p_down_var: 0.0,
            p_down_std_error: 0.0,
            theta_tilde: None,
            max_unitarity_error: max_u,
            norm_error: (norm - 1.0).abs(),
            leakage: 0.0,
        }
    }

    /// `(1 - cos theta) / 2`.
    pub fn fringe(&self) -> f64 {
        0.5 * (1.0 - self.theta.cos())
    }
}
