use nalgebra::Vector2;

use super::result::EchoResult;
use super::schedule::EchoSchedule;
use super::unitaries::{r_pulse, u0, u_signal, unitarity_error2, Spin2, SpinFrequencies};
use crate::error::Result;
use crate::quantum::C64;

/// `R(pi/2) U0(T2) R(pi) U0(T1) U_sz(Delta_t) R(pi/2)` with pulses of area
/// `pi/2` and `pi` at the ESR Rabi frequency implied by the schedule.
pub fn echo_unitary(s: &EchoSchedule, f: &SpinFrequencies, omega_sz: f64) -> [Spin2; 6] {
    let omega_esr = std::f64::consts::PI / (2.0 * s.delta_t_pulse);
    [
        r_pulse(omega_esr, s.delta_t_pulse, s.phases[0]),
        u_signal(omega_sz, s.delta_t),
        u0(f, s.t1()),
        r_pulse(omega_esr, 2.0 * s.delta_t_pulse, s.phases[1]),
        u0(f, s.t2()),
        r_pulse(omega_esr, s.delta_t_pulse, s.phases[2]),
    ]
}

/// `theta = (omega_down + omega_up)(T2 - T1) + Omega_sz Delta_t`.
pub fn interference_phase(s: &EchoSchedule, f: &SpinFrequencies, omega_sz: f64) -> f64 {
    -f.sum() * s.window_difference() + omega_sz * s.delta_t
}

/// Closed-form final amplitudes `(down, up)` for the default pulse phases.
pub fn closed_form_amplitudes(s: &EchoSchedule, f: &SpinFrequencies, omega_sz: f64) -> [C64; 2] {
    let a = C64::from_polar(1.0, -f.omega_up * s.t1() + f.omega_down * s.t2());
    let b = C64::from_polar(
        1.0,
        f.omega_down * s.t1() - f.omega_up * s.t2() - omega_sz * s.delta_t,
    );
    // alpha' = -a - b, beta' = a - b; the down amplitude is -beta'/2
    [(b - a) * 0.5, (-a - b) * 0.5]
}

/// Composes the echo sequence from |down> and checks it against the interference law.
pub fn run_echo_analytic(
    s: &EchoSchedule,
    f: &SpinFrequencies,
    omega_sz: f64,
) -> Result<EchoResult> {
    s.validate()?;
    let factors = echo_unitary(s, f, omega_sz);
    let mut psi = Vector2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let mut max_u = 0.0f64;
    for u in &factors {
        max_u = max_u.max(unitarity_error2(u));
        psi = u * psi;
    }
    let baseline = -f.sum() * s.window_difference();
    let signal = omega_sz * s.delta_t;
    Ok(EchoResult::single(
        baseline + signal,
        baseline,
        signal,
        [psi[0], psi[1]],
        max_u,
    ))
}
