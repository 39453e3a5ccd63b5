use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How pulse durations enter the free-evolution windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseTiming {
    /// `T1 = T + dt`, `T2 = T + 2 dt`; pulses act instantaneously between the windows.
    #[default]
    Folded,
    /// Windows measured between pulse centres, `T1 = T2 = T + 3 dt / 2`; the
    /// static baseline phase vanishes.
    Explicit,
}

/// Hahn-echo timing: pi/2 - signal - T - pi - T - pi/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EchoSchedule {
    /// pi/2 pulse duration `pi / (2 Omega_s)` (s).
    pub delta_t_pulse: f64,
    /// Free evolution between pulses (s).
    pub t_free: f64,
    /// Signal insertion (s).
    pub delta_t: f64,
    /// ESR phases of the first, middle and last pulse.
    pub phases: [f64; 3],
    pub timing: PulseTiming,
}

pub const DEFAULT_PHASES: [f64; 3] = [FRAC_PI_2, FRAC_PI_2, -FRAC_PI_2];

impl EchoSchedule {
    pub fn new(omega_s_esr: f64, t_free: f64, delta_t: f64) -> Result<Self> {
        if !(omega_s_esr > 0.0) {
            return Err(Error::InvalidSchedule(
                "ESR Rabi frequency must be positive".into(),
            ));
        }
        let s = Self {
            delta_t_pulse: PI / (2.0 * omega_s_esr),
            t_free,
            delta_t,
            phases: DEFAULT_PHASES,
            timing: PulseTiming::Folded,
        };
        s.validate()?;
        Ok(s)
    }

    /// `T > Delta_t >= 10 dt`, warning below `100 dt`. A zero-length signal is allowed.
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_t_pulse > 0.0 && self.delta_t_pulse.is_finite()) {
            return Err(Error::InvalidSchedule(
                "pulse duration must be positive".into(),
            ));
        }
        if !(self.t_free > 0.0 && self.t_free.is_finite()) {
            return Err(Error::InvalidSchedule(
                "free evolution T must be positive".into(),
            ));
        }
        if !(self.delta_t >= 0.0) {
            return Err(Error::InvalidSchedule(
                "signal duration must be non-negative".into(),
            ));
        }
        if self.delta_t > 0.0 {
            if self.delta_t >= self.t_free {
                return Err(Error::InvalidSchedule(format!(
                    "signal duration {} s must be shorter than T = {} s",
                    self.delta_t, self.t_free
                )));
            }
            if self.delta_t < 10.0 * self.delta_t_pulse {
                return Err(Error::InvalidSchedule(format!(
                    "signal duration {} s is below ten pulse durations ({} s)",
                    self.delta_t,
                    10.0 * self.delta_t_pulse
                )));
            }
            if self.delta_t < 100.0 * self.delta_t_pulse {
                log::warn!("signal duration is below 100 pulse durations; pulse and signal overlap matters");
            }
        }
        Ok(())
    }

    pub fn t1(&self) -> f64 {
        match self.timing {
            PulseTiming::Folded => self.t_free + self.delta_t_pulse,
            PulseTiming::Explicit => self.t_free + 1.5 * self.delta_t_pulse,
        }
    }

    pub fn t2(&self) -> f64 {
        match self.timing {
            PulseTiming::Folded => self.t_free + 2.0 * self.delta_t_pulse,
            PulseTiming::Explicit => self.t_free + 1.5 * self.delta_t_pulse,
        }
    }

    /// `T1 - T2` without forming either window.
    pub fn window_difference(&self) -> f64 {
        match self.timing {
            PulseTiming::Folded => -self.delta_t_pulse,
            PulseTiming::Explicit => 0.0,
        }
    }

    pub fn with_delta_t(mut self, delta_t: f64) -> Self {
        self.delta_t = delta_t;
        self
    }

    pub fn with_t_free(mut self, t_free: f64) -> Self {
        self.t_free = t_free;
        self
    }

    pub fn with_timing(mut self, timing: PulseTiming) -> Self {
        self.timing = timing;
        self
    }
}
