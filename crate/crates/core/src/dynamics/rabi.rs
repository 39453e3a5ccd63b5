use serde::{Deserialize, Serialize};

use super::propagate::{StateVector, Trajectory};
use crate::error::{Error, Result};
use crate::hydrogen1d::DipoleTable;
use crate::quantum::{CMatrix, HilbertSpec, C64};

/// Resonant two-level excitation `P2(t) = [1 - cos(2 Omega_12 t)] / 2`.
pub fn rabi_probability(omega_12: f64, t: f64) -> f64 {
    0.5 * (1.0 - (2.0 * omega_12 * t).cos())
}

/// Population of atom level |2> summed over spin and oscillator.
pub fn excited_population(spec: &HilbertSpec, st: &StateVector) -> f64 {
    (0..spec.dim())
        .filter(|&i| spec.decompose(i).0 == 1)
        .map(|i| st.population(i))
        .sum()
}

/// Mean height `<z>(t) = (1 - P2) z11 + P2 z22` along a trajectory (m).
///
/// The `z12` coherence oscillates at the atomic frequency and is not part of
/// the detected height signal, so only level populations enter.
pub fn rabi_height_signal(
    spec: &HilbertSpec,
    traj: &Trajectory,
    dipoles: &DipoleTable,
) -> Vec<(f64, f64)> {
    let (z11, z22) = (dipoles.get(1, 1), dipoles.get(2, 2));
    traj.states
        .iter()
        .map(|st| {
            let p2 = excited_population(spec, st);
            (st.t, (1.0 - p2) * z11 + p2 * z22)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayConfig {
    /// Decay rate of level |2> (1/s).
    pub gamma: f64,
    pub enabled: bool,
}

impl DecayConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) {
            return Err(Error::invalid(
                "gamma",
                format!("must be >= 0, got {}", self.gamma),
            ));
        }
        Ok(())
    }
}

/// Steady excited population of the damped driven two-level atom with
/// coupling `Omega_12 (|1><2| + h.c.)`, detuning `Delta` and decay `gamma`:
/// `Omega^2 / (Delta^2 + gamma^2/4 + 2 Omega^2)`.
pub fn steady_excitation(gamma: f64, omega_12: f64, detuning: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::NoSteadyState);
    }
    let w2 = omega_12 * omega_12;
    Ok(w2 / (detuning * detuning + 0.25 * gamma * gamma + 2.0 * w2))
}

/// Coupling that yields a given steady population (must be below 1/2).
pub fn rabi_for_steady_excitation(gamma: f64, p2: f64, detuning: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::NoSteadyState);
    }
    if !(0.0..0.5).contains(&p2) {
        return Err(Error::invalid(
            "p2",
            "steady population must lie in [0, 1/2)",
        ));
    }
    Ok((p2 * (detuning * detuning + 0.25 * gamma * gamma) / (1.0 - 2.0 * p2)).sqrt())
}

/// Density matrix of the damped two-level atom at time `t`, starting in |1>.
///
/// Rotating frame `H = -Delta |2><2| + Omega_12 (|1><2| + h.c.)` with jump
/// operator `sqrt(gamma) |1><2|`; the Lindblad generator is exponentiated
/// directly. Returns `P2(t)`.
pub fn damped_excitation(decay: &DecayConfig, omega_12: f64, detuning: f64, t: f64) -> Result<f64> {
    decay.validate()?;
    let gamma = if decay.enabled { decay.gamma } else { 0.0 };
    let mut h = CMatrix::zeros(2, 2);
    h[(1, 1)] = C64::new(-detuning, 0.0);
    h[(0, 1)] = C64::new(omega_12, 0.0);
    h[(1, 0)] = C64::new(omega_12, 0.0);
    let mut l = CMatrix::zeros(2, 2);
    l[(0, 1)] = C64::new(gamma.sqrt(), 0.0);
    let id = CMatrix::identity(2, 2);
    let ldl = l.adjoint() * &l;
    let i = C64::new(0.0, 1.0);
    // row-major vec: vec(A rho B) = (A ⊗ B^T) vec(rho)
    let sup = (h.kronecker(&id) - id.kronecker(&h.transpose())).map(|z| -i * z)
        + l.kronecker(&l.conjugate())
        - (ldl.kronecker(&id) + id.kronecker(&ldl.transpose())).map(|z| z * 0.5);
    let prop = (sup * C64::new(t, 0.0)).exp();
    let mut rho0 = nalgebra::DVector::<C64>::zeros(4);
    rho0[0] = C64::new(1.0, 0.0);
    let rho = prop * rho0;
    Ok(rho[3].re)
}
