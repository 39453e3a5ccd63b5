use std::f64::consts::PI;

use approx::assert_relative_eq;
use heliosense_core::dynamics::{expm_hermitian, unitarity_error};
use heliosense_core::echo::*;
use heliosense_core::params::{formulas, ParameterSet, PhysicalConstants};
use heliosense_core::quantum::*;
use heliosense_core::sensitivity::{threshold_row, SensitivityInputs};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = ModelParams> {
    (
        50.0..200.0f64,
        10.0..40.0f64,
        2.0..8.0f64,
        1e-4..1e-2f64,
        0.0..0.05f64,
        0.0..0.05f64,
        0.01..1.0f64,
        -PI..PI,
    )
        .prop_map(
            |(omega_2, omega_x, omega_s, eta0, eta1, eta2, omega_12, phase)| ModelParams {
                omega_1: 0.0,
                omega_2,
                omega_x,
                omega_s,
                eta0,
                eta1,
                eta2,
                omega_12,
                delta_a: 3.0,
                delta_s: 0.5,
                delta_x: omega_x - omega_s,
                drive_phase: phase,
                z12_over_h: 0.0,
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamiltonians_are_hermitian(p in model(), t in 0.0..10.0f64, n in 2usize..5) {
        let spec = HilbertSpec::new(n);
        prop_assert!(build_lab_hamiltonian(&spec, &p, t).is_hermitian());
        prop_assert!(build_h_int(&spec, &p, t).is_hermitian());
        prop_assert!(build_h_d(&spec, &p).is_hermitian());
    }

    #[test]
    fn exponentials_are_unitary(p in model(), t in 0.0..50.0f64) {
        let spec = HilbertSpec::new(3);
        let h = build_lab_hamiltonian(&spec, &p, 0.3);
        prop_assert!(unitarity_error(&expm_hermitian(&h.m, t)) < 1e-10);
    }

    #[test]
    fn echo_probability_follows_the_interference_law(
        down in 0.0..50.0f64,
        up in 0.0..50.0f64,
        esr in 20.0..800.0f64,
        t_free in 0.5..20.0f64,
        frac in 0.0..0.95f64,
        sz in -10.0..10.0f64,
    ) {
        let f = SpinFrequencies { omega_down: down, omega_up: up };
        let s = EchoSchedule::new(esr, t_free, frac * t_free);
        prop_assume!(s.is_ok());
        let s = s.unwrap();
        let r = run_echo_analytic(&s, &f, sz).unwrap();
        prop_assert!((r.p_down - r.fringe()).abs() < 1e-12);
        prop_assert!((r.signal_phase - sz * s.delta_t).abs() < 1e-12 * (1.0 + (sz * s.delta_t).abs()));
        prop_assert!(r.norm_error < 1e-12);
    }

    #[test]
    fn threshold_field_inverts_to_the_threshold_phase(
        theta in 0.01..PI,
        dt in 1e-3..100.0f64,
        detuning in 1e2..1e6f64,
        z12_rb in 0.2..2.0f64,
    ) {
        let c = PhysicalConstants::default();
        let inp = SensitivityInputs { theta_min: theta, detuning, z12: z12_rb * c.bohr_radius() };
        let row = threshold_row(&c, &inp, dt).unwrap();
        let omega_12 = formulas::rabi_from_field(&c, row.e_w, inp.z12).unwrap();
        assert_relative_eq!(omega_12 * omega_12 / detuning * dt, theta, max_relative = 1e-12);
    }

    #[test]
    fn noise_config_round_trips_through_json(sigma in 0.0..1e-5f64, tau in 1e-6..1.0f64, seed in any::<u64>()) {
        let n = NoiseModel {
            current: NoiseSource::quasi_static(sigma),
            ripplon: NoiseSource { sigma, kind: NoiseKind::OrnsteinUhlenbeck { correlation_time: tau } },
            seed,
        };
        let back: NoiseModel = serde_json::from_str(&serde_json::to_string(&n).unwrap()).unwrap();
        prop_assert_eq!(back, n);
    }
}

#[test]
fn parameter_set_round_trips_through_json() {
    let p = ParameterSet::default();
    let back: ParameterSet = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
    assert_eq!(back, p);
}
