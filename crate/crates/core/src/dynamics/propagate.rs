use serde::{Deserialize, Serialize};

use super::expm::{unitarity_error, HermitianEigen};
use crate::error::{Error, Result};
use crate::quantum::{CVector, OperatorMatrix, RotatingFrame, C64};

/// Amplitudes over the composite basis at time `t` (s).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amps: CVector,
    pub t: f64,
}

impl StateVector {
    pub fn new(amps: CVector, t: f64) -> Result<Self> {
        let s = Self { amps, t };
        if s.norm_error() > 1e-8 {
            return Err(Error::invalid(
                "psi0",
                format!("norm {} differs from 1", s.norm()),
            ));
        }
        Ok(s)
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn norm_error(&self) -> f64 {
        (self.norm() - 1.0).abs()
    }

    pub fn population(&self, i: usize) -> f64 {
        self.amps[i].norm_sqr()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }
}

/// Which picture the supplied Hamiltonian lives in; recorded with the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Lab,
    Interaction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationConfig {
    pub t_final: f64,
    pub max_step: f64,
    /// Number of equally spaced output samples after `t = t0` (the initial state is also kept).
    pub n_samples: usize,
    /// Populations must change by less than this between successive step halvings.
    pub tolerance: f64,
    pub unitarity_tol: f64,
    pub max_halvings: u32,
    /// Skip step-halving control and run once at `max_step`.
    pub fixed_step: bool,
    pub frame: Frame,
}

impl PropagationConfig {
    pub fn new(t_final: f64, max_step: f64) -> Self {
        Self {
            t_final,
            max_step,
            n_samples: 100,
            tolerance: 1e-6,
            unitarity_tol: 1e-10,
            max_halvings: 10,
            fixed_step: false,
            frame: Frame::Interaction,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::invalid("t_final", "must be positive"));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::invalid("max_step", "must be positive"));
        }
        if self.n_samples == 0 {
            return Err(Error::invalid("n_samples", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<StateVector>,
    pub frame: Frame,
    pub step: f64,
    pub halvings: u32,
    /// Largest population change against the previous (coarser) run; 0 for fixed-step runs.
    pub refinement_change: f64,
    pub max_unitarity_error: f64,
    pub max_norm_error: f64,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &StateVector {
        self.states
            .last()
            .expect("trajectory holds at least the initial state")
    }
}

fn row_sum_bound(h: &OperatorMatrix) -> f64 {
    (0..h.dim())
        .map(|r| h.row(r).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

struct Run {
    states: Vec<StateVector>,
    max_unitarity_error: f64,
    max_norm_error: f64,
}

fn run_fixed<F>(h: &F, psi0: &StateVector, cfg: &PropagationConfig, substeps: usize) -> Result<Run>
where
    F: Fn(f64) -> OperatorMatrix,
{
    let sample_dt = cfg.t_final / cfg.n_samples as f64;
    let dt = sample_dt / substeps as f64;
    let mut psi = psi0.amps.clone();
    let mut states = Vec::with_capacity(cfg.n_samples + 1);
    states.push(psi0.clone());
    let mut max_u = 0.0f64;
    let mut max_n = psi0.norm_error();
    for s in 0..cfg.n_samples {
        let t_s = psi0.t + s as f64 * sample_dt;
        for j in 0..substeps {
            let t_mid = t_s + (j as f64 + 0.5) * dt;
            let hm = h(t_mid);
            if hm.dim() != psi.len() {
                return Err(Error::DimensionMismatch {
                    expected: psi.len(),
                    got: hm.dim(),
                });
            }
            let u = HermitianEigen::new(&hm.m).propagator(dt);
            let ue = unitarity_error(&u);
            max_u = max_u.max(ue);
            if ue > cfg.unitarity_tol {
                return Err(Error::Propagation(format!(
                    "step propagator at t = {t_mid:.6e} s not unitary: error {ue:.3e}"
                )));
            }
            psi = u * psi;
        }
        let st = StateVector {
            amps: psi.clone(),
            t: psi0.t + (s + 1) as f64 * sample_dt,
        };
        max_n = max_n.max(st.norm_error());
        states.push(st);
    }
    Ok(Run {
        states,
        max_unitarity_error: max_u,
        max_norm_error: max_n,
    })
}

fn population_change(a: &[StateVector], b: &[StateVector]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| {
            x.amps
                .iter()
                .zip(y.amps.iter())
                .map(|(p, q)| (p.norm_sqr() - q.norm_sqr()).abs())
        })
        .fold(0.0, f64::max)
}

/// Time-ordered propagation with midpoint-sampled exponentials
/// `exp(-i H(t + dt/2) dt)`. The step is halved until sampled populations
/// move by less than `cfg.tolerance`.
pub fn propagate<F>(h: F, psi0: &StateVector, cfg: &PropagationConfig) -> Result<Trajectory>
where
    F: Fn(f64) -> OperatorMatrix,
{
    cfg.validate()?;
    if psi0.norm_error() > 1e-8 {
        return Err(Error::invalid("psi0", "initial state must be normalized"));
    }
    let sample_dt = cfg.t_final / cfg.n_samples as f64;
    let bound = row_sum_bound(&h(psi0.t));
    let step_cap = if bound > 0.0 {
        cfg.max_step.min(0.05 / bound)
    } else {
        cfg.max_step
    };
    let mut substeps = (sample_dt / step_cap).ceil().max(1.0) as usize;

    let mut prev = run_fixed(&h, psi0, cfg, substeps)?;
    if cfg.fixed_step {
        return Ok(Trajectory {
            states: prev.states,
            frame: cfg.frame,
            step: sample_dt / substeps as f64,
            halvings: 0,
            refinement_change: 0.0,
            max_unitarity_error: prev.max_unitarity_error,
            max_norm_error: prev.max_norm_error,
        });
    }
    let mut last_change = f64::INFINITY;
    for halving in 1..=cfg.max_halvings {
        substeps *= 2;
        let next = run_fixed(&h, psi0, cfg, substeps)?;
        let change = population_change(&prev.states, &next.states);
        log::debug!("propagate: {substeps} substeps per sample, change {change:.3e}");
        if change < cfg.tolerance {
            return Ok(Trajectory {
                states: next.states,
                frame: cfg.frame,
                step: sample_dt / substeps as f64,
                halvings: halving,
                refinement_change: change,
                max_unitarity_error: next.max_unitarity_error.max(prev.max_unitarity_error),
                max_norm_error: next.max_norm_error.max(prev.max_norm_error),
            });
        }
        last_change = change;
        prev = next;
    }
    Err(Error::Propagation(format!(
        "step control failed after {} halvings: last population change {last_change:.3e} (tolerance {:.1e}), step {:.3e} s",
        cfg.max_halvings,
        cfg.tolerance,
        sample_dt / substeps as f64
    )))
}

/// Exact evolution under `H(t) = exp(iKt) M exp(-iKt)`:
/// `psi(t) = exp(iKt) exp(-i(M + K)t) psi(0)`, with `psi(0)` given at `t = 0`.
pub fn evolve_rotating(frame: &RotatingFrame, psi0: &CVector, times: &[f64]) -> Vec<StateVector> {
    let eig = HermitianEigen::new(&frame.generator());
    times
        .iter()
        .map(|&t| {
            let mut amps = eig.apply(psi0, t);
            for (a, k) in amps.iter_mut().zip(&frame.k) {
                *a *= C64::from_polar(1.0, k * t);
            }
            StateVector { amps, t }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::hilbert::{ONE, ZERO};
    use crate::quantum::CMatrix;

    fn diag(v: &[f64]) -> OperatorMatrix {
        OperatorMatrix::new(CMatrix::from_diagonal(&CVector::from_iterator(
            v.len(),
            v.iter().map(|x| C64::new(*x, 0.0)),
        )))
    }

    #[test]
    fn constant_diagonal_phases() {
        let e = [0.3, -1.1, 2.0];
        let psi0 = StateVector::new(
            CVector::from_element(3, C64::new(1.0 / 3f64.sqrt(), 0.0)),
            0.0,
        )
        .unwrap();
        let mut cfg = PropagationConfig::new(2.0, 0.01);
        cfg.n_samples = 4;
        let tr = propagate(|_| diag(&e), &psi0, &cfg).unwrap();
        for st in &tr.states {
            for (i, en) in e.iter().enumerate() {
                let want = C64::from_polar(1.0 / 3f64.sqrt(), -en * st.t);
                assert!((st.amps[i] - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_unnormalised_start() {
        assert!(StateVector::new(CVector::from_vec(vec![ONE, ONE]), 0.0).is_err());
    }

    #[test]
    fn step_control_reports_failure() {
        // fast time dependence with too few halvings allowed
        let h = |t: f64| {
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 1)] = C64::new((40.0 * t).cos() * 3.0, 0.0);
            m[(1, 0)] = m[(0, 1)];
            OperatorMatrix::new(m)
        };
        let psi0 = StateVector::new(CVector::from_vec(vec![ONE, ZERO]), 0.0).unwrap();
        let mut cfg = PropagationConfig::new(5.0, 0.5);
        cfg.n_samples = 1;
        cfg.max_halvings = 1;
        cfg.tolerance = 1e-12;
        match propagate(h, &psi0, &cfg) {
            Err(Error::Propagation(msg)) => assert!(msg.contains("halvings")),
            other => panic!("{other:?}"),
        }
    }
}
