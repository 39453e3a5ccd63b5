use std::f64::consts::PI;
use std::path::PathBuf;

use heliosense_core::dynamics::{rabi_for_steady_excitation, steady_excitation};
use heliosense_core::echo::{
    monte_carlo_echo, run_echo_analytic, run_echo_numeric, write_shots_csv, EchoResult,
    EchoSchedule, MonteCarloSummary, SignalModel, SpinFrequencies,
};
use heliosense_core::hydrogen1d::{
    dipole_elements, find_field_for, solve_spectrum, stark_scan, write_scan_csv, Potential1D,
    ScanRow,
};
use heliosense_core::params::{
    DerivedParameters, ParameterSet, PhysicalConstants, ProvenanceReport,
};
use heliosense_core::pipeline::{hydrogen_dipoles_with, with_trap_fit};
use heliosense_core::quantum::ModelParams;
use heliosense_core::sensitivity::{
    image_current_row, log_durations, sensitivity_curve, write_sensitivity_csv, Benchmark,
    ImageCurrentRow, SensitivityInputs, SensitivityReport,
};
use heliosense_core::trap::{fit_stability, fit_trap, solve_laplace, QuadrupoleFit};
use serde::Serialize;

use crate::config::{ConfigError, RunConfig};
use crate::output::{to_json_string, Sink};
use crate::CliError;

/// Options shared by every subcommand after merging flags into the config.
pub struct Context {
    pub cfg: RunConfig,
    pub json: bool,
    pub out_dir: PathBuf,
}

impl Context {
    fn sink(&self) -> Result<Sink, CliError> {
        Sink::new(&self.out_dir, &self.cfg.output.formats).map_err(CliError::io(&self.out_dir))
    }

    /// Human-readable text goes to stdout unless `--json` asked for a document.
    fn say(&self, text: impl AsRef<str>) {
        if !self.json {
            emit(text.as_ref());
        }
    }

    fn finish<T: Serialize>(&self, sink: &Sink, summary: &T) {
        if self.json {
            emit(&to_json_string(summary));
        } else {
            for p in &sink.written {
                emit(&format!("wrote {}", p.display()));
            }
        }
    }
}

/// Stdout line that tolerates a closed pipe.
fn emit(line: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn io_err(sink_dir: &std::path::Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    CliError::io(sink_dir)
}

/// Parameter set of the run, with the trap solve substituted when requested.
fn parameters(ctx: &Context) -> Result<(ParameterSet, Option<QuadrupoleFit>), CliError> {
    let p = ctx.cfg.parameter_set()?;
    if !ctx.cfg.params.use_trap_fit {
        return Ok((p, None));
    }
    let fit = trap_fit(ctx)?;
    Ok((with_trap_fit(&p, &fit), Some(fit)))
}

fn trap_fit(ctx: &Context) -> Result<QuadrupoleFit, CliError> {
    let map = solve_laplace(
        &ctx.cfg.geometry()?,
        &ctx.cfg.grid()?,
        ctx.cfg.fit_radius(),
        &ctx.cfg.relaxation(),
    )?;
    Ok(fit_trap(&map, ctx.cfg.fit_radius())?)
}

fn derive(
    ctx: &Context,
    c: &PhysicalConstants,
    p: &ParameterSet,
) -> Result<DerivedParameters, CliError> {
    let dip = hydrogen_dipoles_with(c, &ctx.cfg.scan_settings(c), p.e_z)?;
    Ok(DerivedParameters::compute(c, p, dip)?)
}

/// Steady excited population realised by a resonant drive with decay `gamma`.
fn realised_p2(p2: f64, gamma: f64) -> Result<f64, CliError> {
    let omega = rabi_for_steady_excitation(gamma, p2, 0.0)?;
    Ok(steady_excitation(gamma, omega, 0.0)?)
}

pub fn derive_params(ctx: &Context) -> Result<(), CliError> {
    let c = ctx.cfg.constants();
    let (p, fit) = parameters(ctx)?;
    let d = derive(ctx, &c, &p)?;
    let p2 = realised_p2(ctx.cfg.params.P2_steady, ctx.cfg.params.gamma_per_s)?;
    let report = ProvenanceReport::build(&c, &p, &d, p2)?;

    let mut sink = ctx.sink()?;
    let dir = ctx.out_dir.clone();
    sink.csv("derived_params.csv", |w| report.write_csv(w))
        .map_err(io_err(&dir))?;
    sink.json("derived_params.json", &report)
        .map_err(io_err(&dir))?;
    if let Some(f) = &fit {
        ctx.say(format!(
            "trap fit per volt: E_z = {:.4e} V/m, Q = ({:.4e}, {:.4e}, {:.4e}) V/m^2",
            f.e_z, f.q_xx, f.q_yy, f.q_zz
        ));
    }
    ctx.say(report.to_string());
    ctx.finish(&sink, &report);
    Ok(())
}

#[derive(Serialize)]
struct HydrogenSummary {
    schema_version: u32,
    e_z: f64,
    energies_j: Vec<f64>,
    transition_12_hz: f64,
    z11_m: f64,
    z12_m: f64,
    z22_m: f64,
    r_b_m: f64,
    convergence: f64,
    target_transition_hz: f64,
    operating_field_v_per_m: Option<f64>,
    scan: Vec<ScanRow>,
}

pub fn solve_hydrogen(ctx: &Context) -> Result<(), CliError> {
    let c = ctx.cfg.constants();
    let p = ctx.cfg.parameter_set()?;
    let settings = ctx.cfg.scan_settings(&c);
    let pot = Potential1D {
        e_z: p.e_z,
        ..settings.template.clone()
    };
    let spec = solve_spectrum(&c, &pot, settings.n_levels, &settings.options)?;
    let dip = dipole_elements(&c, &spec);
    let scan = stark_scan(&c, &settings, &ctx.cfg.scan_fields())?;
    let h = &ctx.cfg.hydrogen;
    let target = 2.0 * PI * h.target_transition_Hz;
    let operating = find_field_for(
        &c,
        &settings,
        target,
        h.scan_min_V_per_m,
        h.scan_max_V_per_m,
        1e-9,
    )
    .ok();

    let mut sink = ctx.sink()?;
    let dir = ctx.out_dir.clone();
    sink.csv("hydrogen_levels.csv", |w| {
        use std::io::Write;
        writeln!(w, "n,E[J],E[meV],(E_n-E_1)/h[Hz]")?;
        for (i, e) in spec.energies.iter().enumerate() {
            let f = (e - spec.energies[0]) / (2.0 * PI * c.hbar);
            writeln!(w, "{},{:.12e},{:.9e},{:.9e}", i + 1, e, e / c.e * 1e3, f)?;
        }
        Ok(())
    })
    .map_err(io_err(&dir))?;
    sink.csv("hydrogen_dipoles.csv", |w| {
        use std::io::Write;
        writeln!(w, "n,m,z_nm[m],z_nm[r_b]")?;
        for n in 1..=spec.n_levels {
            for m in 1..=spec.n_levels {
                writeln!(
                    w,
                    "{n},{m},{:.9e},{:.9e}",
                    dip.get(n, m),
                    dip.in_bohr_radii(n, m)
                )?;
            }
        }
        Ok(())
    })
    .map_err(io_err(&dir))?;
    sink.csv("stark_scan.csv", |w| write_scan_csv(&scan, w))
        .map_err(io_err(&dir))?;
    for n in 1..=spec.n_levels {
        sink.csv(&format!("wavefunction_{n}.csv"), |w| {
            use std::io::Write;
            writeln!(w, "z[m],psi_{n}[m^-1/2]")?;
            for (z, v) in spec.grid.iter().zip(&spec.wavefunctions[n - 1]) {
                writeln!(w, "{z:.9e},{v:.9e}")?;
            }
            Ok(())
        })
        .map_err(io_err(&dir))?;
    }

    let f12 = spec.transition(&c, 1, 2) / (2.0 * PI);
    let summary = HydrogenSummary {
        schema_version: crate::config::SCHEMA_VERSION,
        e_z: p.e_z,
        energies_j: spec.energies.clone(),
        transition_12_hz: f12,
        z11_m: dip.get(1, 1),
        z12_m: dip.get(1, 2).abs(),
        z22_m: dip.get(2, 2),
        r_b_m: c.bohr_radius(),
        convergence: spec.convergence,
        target_transition_hz: h.target_transition_Hz,
        operating_field_v_per_m: operating,
        scan,
    };
    sink.json("hydrogen.json", &summary).map_err(io_err(&dir))?;

    ctx.say(format!("E_z = {:.4e} V/m", p.e_z));
    ctx.say(format!("(E2-E1)/h = {:.3} GHz", f12 * 1e-9));
    ctx.say(format!(
        "z11 = {:.4} r_b, z12 = {:.4} r_b, z22 = {:.4} r_b",
        dip.in_bohr_radii(1, 1),
        dip.in_bohr_radii(1, 2).abs(),
        dip.in_bohr_radii(2, 2)
    ));
    match operating {
        Some(e) => ctx.say(format!(
            "{:.3} GHz reached at E_z = {e:.1} V/m",
            h.target_transition_Hz * 1e-9
        )),
        None => ctx.say(format!(
            "{:.3} GHz is not reached within the scanned fields",
            h.target_transition_Hz * 1e-9
        )),
    }
    ctx.finish(&sink, &summary);
    Ok(())
}

#[derive(Serialize)]
struct TrapSummary {
    schema_version: u32,
    /// Coefficients per volt of bias.
    fit: QuadrupoleFit,
    trace_ratio: f64,
    symmetry_violation: f64,
    radius_halving_change: f64,
    iterations: usize,
    grid: [usize; 3],
    trace_ok: bool,
    symmetry_ok: bool,
}

pub fn solve_trap(ctx: &Context) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let map = solve_laplace(
        &cfg.geometry()?,
        &cfg.grid()?,
        cfg.fit_radius(),
        &cfg.relaxation(),
    )?;
    let fit = fit_trap(&map, cfg.fit_radius())?;
    let stability = fit_stability(&map, cfg.fit_radius())?;
    let (nx, ny, nz) = map.dims();
    let summary = TrapSummary {
        schema_version: crate::config::SCHEMA_VERSION,
        fit,
        trace_ratio: fit.trace_ratio(),
        symmetry_violation: fit.symmetry_violation(),
        radius_halving_change: stability,
        iterations: map.sweeps,
        grid: [nx, ny, nz],
        trace_ok: fit.trace_ratio() <= cfg.trap.trace_tolerance,
        symmetry_ok: fit.symmetry_violation() < 1e-3,
    };

    let mut sink = ctx.sink()?;
    let dir = ctx.out_dir.clone();
    sink.csv("trap_fit.csv", |w| {
        use std::io::Write;
        writeln!(w, "coefficient,value_per_volt,unit")?;
        for (k, v, u) in [
            ("V0", fit.v0, "V/V"),
            ("E_x", fit.e_x, "V/m/V"),
            ("E_y", fit.e_y, "V/m/V"),
            ("E_z", fit.e_z, "V/m/V"),
            ("Q_xx", fit.q_xx, "V/m^2/V"),
            ("Q_yy", fit.q_yy, "V/m^2/V"),
            ("Q_zz", fit.q_zz, "V/m^2/V"),
            ("Q_xy", fit.q_xy, "V/m^2/V"),
            ("Q_xz", fit.q_xz, "V/m^2/V"),
            ("Q_yz", fit.q_yz, "V/m^2/V"),
            ("residual", fit.residual, "V/V"),
        ] {
            writeln!(w, "{k},{v:.9e},{u}")?;
        }
        Ok(())
    })
    .map_err(io_err(&dir))?;
    if cfg.trap.write_field_map {
        sink.csv("trap_potential.csv", |w| map.write_csv(w))
            .map_err(io_err(&dir))?;
    }
    sink.json("trap_fit.json", &summary).map_err(io_err(&dir))?;

    ctx.say(format!(
        "grid {nx} x {ny} x {nz}, {} iterations",
        map.sweeps
    ));
    ctx.say(format!(
        "per volt: E_z = {:.4e} V/m, Q_xx = {:.4e}, Q_yy = {:.4e}, Q_zz = {:.4e} V/m^2",
        fit.e_z, fit.q_xx, fit.q_yy, fit.q_zz
    ));
    ctx.say(format!(
        "trace |Q_xx+Q_yy+Q_zz|/|Q_zz| = {:.4} ({}), symmetry-forbidden terms {:.2e}, radius-halving change {:.2e}",
        summary.trace_ratio,
        if summary.trace_ok { "ok" } else { "FAILED" },
        summary.symmetry_violation,
        stability
    ));
    ctx.finish(&sink, &summary);
    if !(summary.trace_ok && summary.symmetry_ok) {
        return Err(CliError::Consistency(
            "trap fit violates the Laplace trace or symmetry check".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct FullModelCheck {
    drive_ratio: f64,
    n_fock: usize,
    signal_phase: f64,
    expected_phase: f64,
    relative_error: f64,
    leakage: f64,
    max_unitarity_error: f64,
    norm_error: f64,
}

#[derive(Serialize)]
struct EchoSummary<'a> {
    schema_version: u32,
    omega_sz: f64,
    analytic: &'a EchoResult,
    numeric: &'a EchoResult,
    full_model: Option<FullModelCheck>,
    monte_carlo: Option<MonteCarloSummary<'a>>,
    fringe_max_deviation: f64,
}

fn full_model_check(
    ctx: &Context,
    s: &EchoSchedule,
    m: &ModelParams,
    d: &DerivedParameters,
) -> Result<Option<FullModelCheck>, CliError> {
    let e = &ctx.cfg.echo;
    if e.n_fock == 0 {
        return Ok(None);
    }
    let m01 = m.with_drive_ratio(e.full_model_drive_ratio);
    let sz = m01.shifts()?.omega_sz;
    let expected = PI / 4.0;
    let s01 = EchoSchedule {
        delta_t: expected / sz,
        t_free: s.t_free.max(2.0 * expected / sz),
        ..*s
    };
    let r = run_echo_numeric(
        &s01,
        &m01,
        d.omega_s_esr,
        SignalModel::Interaction { n_fock: e.n_fock },
    )?;
    Ok(Some(FullModelCheck {
        drive_ratio: e.full_model_drive_ratio,
        n_fock: e.n_fock,
        signal_phase: r.signal_phase,
        expected_phase: expected,
        relative_error: (r.signal_phase - expected).abs() / expected,
        leakage: r.leakage,
        max_unitarity_error: r.max_unitarity_error,
        norm_error: r.norm_error,
    }))
}

pub fn simulate_echo(
    ctx: &Context,
    seed: Option<u64>,
    shots: Option<usize>,
) -> Result<(), CliError> {
    let c = ctx.cfg.constants();
    let (p, _) = parameters(ctx)?;
    let d = derive(ctx, &c, &p)?;
    let m = ModelParams::from_derived(&d, &p);
    let f = SpinFrequencies::from_derived(&d);
    let omega_sz = d.shifts.omega_sz;
    let e = &ctx.cfg.echo;
    let s = EchoSchedule::new(d.omega_s_esr, e.t_free_s, e.delta_t_s)?.with_timing(e.timing);

    let analytic = run_echo_analytic(&s, &f, omega_sz)?;
    let numeric = run_echo_numeric(&s, &m, d.omega_s_esr, SignalModel::Dispersive)?;
    let full = full_model_check(ctx, &s, &m, &d)?;

    let mut fringe = Vec::with_capacity(e.fringe_points);
    let mut fringe_dev: f64 = 0.0;
    for k in 0..e.fringe_points {
        let dt = e.fringe_delta_t_max_s * k as f64 / (e.fringe_points - 1) as f64;
        let r = run_echo_analytic(&s.with_delta_t(dt), &f, omega_sz)?;
        fringe_dev = fringe_dev.max((r.p_down - r.fringe()).abs());
        fringe.push((dt, r.theta, r.signal_phase, r.p_down, r.fringe()));
    }

    let mut noise = ctx.cfg.noise_model()?;
    if let Some(seed) = seed {
        noise.seed = seed;
    }
    let n_shots = shots.unwrap_or(ctx.cfg.noise.shots);
    let mc = if n_shots > 0 {
        Some(monte_carlo_echo(&s, &f, omega_sz, &noise, n_shots)?)
    } else {
        None
    };

    let mut sink = ctx.sink()?;
    let dir = ctx.out_dir.clone();
    sink.csv("echo_fringe.csv", |w| {
        use std::io::Write;
        writeln!(
            w,
            "delta_t[s],theta[rad],signal_phase[rad],p_down[1],(1-cos theta)/2[1]"
        )?;
        for (dt, th, sig, pd, fr) in &fringe {
            writeln!(w, "{dt:.9e},{th:.15e},{sig:.15e},{pd:.15e},{fr:.15e}")?;
        }
        Ok(())
    })
    .map_err(io_err(&dir))?;
    if let Some(r) = &mc {
        sink.csv("echo_shots.csv", |w| write_shots_csv(w, r))
            .map_err(io_err(&dir))?;
    }
    let summary = EchoSummary {
        schema_version: crate::config::SCHEMA_VERSION,
        omega_sz,
        analytic: &analytic,
        numeric: &numeric,
        full_model: full,
        monte_carlo: mc
            .as_ref()
            .map(|r| MonteCarloSummary::new(r, &s, &noise, omega_sz)),
        fringe_max_deviation: fringe_dev,
    };
    sink.json("echo.json", &summary).map_err(io_err(&dir))?;

    ctx.say(format!(
        "Omega_sz = {omega_sz:.6e} rad/s, dt = {:.4e} s, T = {} s, Delta_t = {} s",
        s.delta_t_pulse, s.t_free, s.delta_t
    ));
    ctx.say(format!(
        "analytic: theta = {:.9e} rad (signal {:.6} rad), p_down = {:.9}",
        analytic.theta, analytic.signal_phase, analytic.p_down
    ));
    ctx.say(format!("numeric:  p_down = {:.9}", numeric.p_down));
    if let Some(fm) = &summary.full_model {
        ctx.say(format!(
            "full model (ratio {}, n_fock {}): signal phase {:.6} rad vs {:.6}, rel err {:.2e}, leakage {:.2e}",
            fm.drive_ratio, fm.n_fock, fm.signal_phase, fm.expected_phase, fm.relative_error, fm.leakage
        ));
    }
    if let Some(r) = &mc {
        ctx.say(format!(
            "monte carlo: {} shots, p_down = {:.6} +- {:.2e}",
            r.shots.len(),
            r.p_down_mean,
            r.p_down_std_error
        ));
    }
    ctx.finish(&sink, &summary);

    // the composed matrices carry absolute phases of order omega T; their
    // rounding sets a floor below which analytic and composed results cannot agree
    let tol =
        e.consistency_tol + phase_rounding_floor(&f, &s, fringe.last().map_or(s.delta_t, |r| r.0));
    let mut problems = Vec::new();
    if (analytic.p_down - numeric.p_down).abs() > tol {
        problems.push(format!(
            "analytic and numeric p_down differ by {:.2e}",
            (analytic.p_down - numeric.p_down).abs()
        ));
    }
    if fringe_dev > tol {
        problems.push(format!(
            "p_down departs from (1 - cos theta)/2 by {fringe_dev:.2e}"
        ));
    }
    if let Some(fm) = &summary.full_model {
        if fm.relative_error > 0.01 {
            problems.push(format!(
                "full-model signal phase off by {:.2e}",
                fm.relative_error
            ));
        }
    }
    let worst_u = [analytic.max_unitarity_error, numeric.max_unitarity_error]
        .into_iter()
        .chain(mc.as_ref().map(|r| r.max_unitarity_error))
        .fold(0.0, f64::max);
    if worst_u > 1e-10 {
        problems.push(format!("propagator unitarity error {worst_u:.2e}"));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(CliError::Consistency(problems.join("; ")))
    }
}

fn phase_rounding_floor(f: &SpinFrequencies, s: &EchoSchedule, max_delta_t: f64) -> f64 {
    let span = s.t1().max(s.t2()) * 2.0 + max_delta_t.max(s.delta_t);
    f64::EPSILON * f.sum() * span
}

#[derive(Serialize)]
struct SensitivitySummary<'a> {
    #[serde(flatten)]
    report: &'a SensitivityReport,
    image_current: Vec<ImageCurrentRow>,
    monotone: bool,
}

pub fn sensitivity(ctx: &Context) -> Result<(), CliError> {
    let c = ctx.cfg.constants();
    let (p, _) = parameters(ctx)?;
    let dip = hydrogen_dipoles_with(&c, &ctx.cfg.scan_settings(&c), p.e_z)?;
    let (theta_min, lo, hi, n, showcase) = ctx.cfg.sensitivity_plan();
    let mut durations = log_durations(lo, hi, n)?;
    if showcase && !durations.contains(&PI) {
        durations.push(PI);
        durations.sort_by(f64::total_cmp);
    }
    let inputs = SensitivityInputs {
        theta_min,
        detuning: ctx.cfg.params.detuning_from_stark_rad_per_s,
        z12: dip.z12,
    };
    let report = sensitivity_curve(&c, &inputs, &durations, ctx.cfg.benchmarks())?;
    let dz = dip.z22 - dip.z11;
    let image_current = ctx
        .cfg
        .image_current_cases()
        .iter()
        .map(|case| image_current_row(&c, case, dz))
        .collect::<Result<Vec<_>, _>>()?;
    let monotone = report.rows.windows(2).all(|w| w[1].e_w < w[0].e_w);

    let mut sink = ctx.sink()?;
    let dir = ctx.out_dir.clone();
    sink.csv("sensitivity.csv", |w| write_sensitivity_csv(w, &report))
        .map_err(io_err(&dir))?;
    sink.csv("benchmarks.csv", |w| {
        write_benchmarks(w, &report.benchmarks)
    })
    .map_err(io_err(&dir))?;
    sink.csv("image_current.csv", |w| {
        use std::io::Write;
        writeln!(w, "label,Omega_12[rad/s],P2_steady[1],z22-z11[m],i0[A]")?;
        for r in &image_current {
            writeln!(
                w,
                "\"{}\",{:.9e},{:.9e},{:.9e},{:.9e}",
                r.label, r.omega_12, r.p2_steady, r.dz, r.i0
            )?;
        }
        Ok(())
    })
    .map_err(io_err(&dir))?;
    let summary = SensitivitySummary {
        report: &report,
        image_current,
        monotone,
    };
    sink.json("sensitivity.json", &summary)
        .map_err(io_err(&dir))?;

    ctx.say(format!(
        "theta_min = {theta_min:.6} rad, Delta_a - Delta_s = {:.4e} rad/s, z12 = {:.4} r_b",
        inputs.detuning,
        dip.z12 / c.bohr_radius()
    ));
    if let Some(r) = report.rows.iter().find(|r| r.delta_t == PI) {
        ctx.say(format!(
            "Delta_t = pi s: Omega_12 = {:.4} rad/s, E_w = {:.4e} V/m ({:.1} nV/cm), P_w = {:.4e} W/m^2 ({:.3e} W/cm^2)",
            r.omega_12,
            r.e_w,
            r.e_w * 1e7,
            r.p_w,
            r.p_w * 1e-4
        ));
    }
    let (first, last) = (&report.rows[0], &report.rows[report.rows.len() - 1]);
    ctx.say(format!(
        "E_w from {:.4e} V/m at {:.1e} s to {:.4e} V/m at {:.1e} s",
        first.e_w, first.delta_t, last.e_w, last.delta_t
    ));
    for b in &report.benchmarks {
        let e = b
            .e_field
            .map(|e| format!("{e:.4e} V/m"))
            .unwrap_or_default();
        let pw = b
            .power_density()
            .map(|p| format!("{p:.4e} W/m^2"))
            .unwrap_or_default();
        ctx.say(format!("benchmark {}: {e}{pw}", b.label));
    }
    for r in &summary.image_current {
        ctx.say(format!("i0 ({}): {:.4e} A", r.label, r.i0));
    }
    ctx.finish(&sink, &summary);
    if !monotone {
        return Err(CliError::Consistency(
            "threshold field is not decreasing with Delta_t".into(),
        ));
    }
    Ok(())
}

fn write_benchmarks(w: &mut Vec<u8>, rows: &[Benchmark]) -> std::io::Result<()> {
    use std::io::Write;
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.9e}")).unwrap_or_default();
    writeln!(w, "label,E[V/m],power[W],area[m^2],power_density[W/m^2]")?;
    for b in rows {
        writeln!(
            w,
            "\"{}\",{},{},{},{}",
            b.label,
            opt(b.e_field),
            opt(b.power),
            opt(b.area),
            opt(b.power_density())
        )?;
    }
    Ok(())
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}
