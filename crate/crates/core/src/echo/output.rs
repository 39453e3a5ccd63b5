use std::io::{self, Write};

use serde::Serialize;

use super::noise::NoiseModel;
use super::result::{DephasingStats, EchoResult};
use super::schedule::EchoSchedule;

pub const SCHEMA_VERSION: u32 = 1;

/// `shot,theta,p_down` rows of a Monte Carlo run.
pub fn write_shots_csv<W: Write>(mut w: W, r: &EchoResult) -> io::Result<()> {
    writeln!(w, "shot,theta[rad],p_down[1],theta_tilde[rad]")?;
    for s in &r.shots {
        writeln!(
            w,
            "{},{:.15e},{:.15e},{:.15e}",
            s.shot, s.theta, s.p_down, s.theta_tilde
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloSummary<'a> {
    pub schema_version: u32,
    pub n_shots: usize,
    pub p_down_mean: f64,
    pub p_down_var: f64,
    pub p_down_std_error: f64,
    pub theta: f64,
    pub theta_tilde: Option<DephasingStats>,
    pub max_unitarity_error: f64,
    pub norm_error: f64,
    pub schedule: &'a EchoSchedule,
    pub noise: &'a NoiseModel,
    pub omega_sz: f64,
}

impl<'a> MonteCarloSummary<'a> {
    pub fn new(
        r: &EchoResult,
        schedule: &'a EchoSchedule,
        noise: &'a NoiseModel,
        omega_sz: f64,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n_shots: r.shots.len(),
            p_down_mean: r.p_down_mean,
            p_down_var: r.p_down_var,
            p_down_std_error: r.p_down_std_error,
            theta: r.theta,
            theta_tilde: r.theta_tilde,
            max_unitarity_error: r.max_unitarity_error,
            norm_error: r.norm_error,
            schedule,
            noise,
            omega_sz,
        }
    }
}
