//! Run configuration: a TOML file whose keys carry their units.
#![allow(non_snake_case)]

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use heliosense_core::echo::{NoiseKind, NoiseModel, NoiseSource, PulseTiming};
use heliosense_core::hydrogen1d::{Potential1D, ScanSettings, SolverOptions};
use heliosense_core::params::{DriveDetuning, ParameterSet, PhysicalConstants};
use heliosense_core::sensitivity::{Benchmark, ImageCurrentCase};
use heliosense_core::trap::{ElectrodeGeometry, GridSpec, Method, RelaxationSettings};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Configuration problems: reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub output: OutputSection,
    pub params: ParamsSection,
    pub hydrogen: HydrogenSection,
    pub trap: TrapSection,
    pub echo: EchoSection,
    pub noise: NoiseSection,
    pub sensitivity: SensitivitySection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub I_dc_A: f64,
    pub h_um: f64,
    pub l_um: f64,
    pub d_um: f64,
    pub V_bias_V: f64,
    pub T_K: f64,
    pub E_z_V_per_m: f64,
    pub Q_xx_V_per_m2_per_V: f64,
    pub Q_yy_V_per_m2_per_V: f64,
    pub Q_zz_V_per_m2_per_V: f64,
    /// Replace `E_z` and the curvatures by a trap solve before deriving.
    pub use_trap_fit: bool,
    pub Omega_12_rad_per_s: f64,
    /// `Delta_a - Delta_s`.
    pub detuning_from_stark_rad_per_s: f64,
    pub I_0_A: f64,
    pub omega_m_rad_per_s: f64,
    pub n_s_per_m2: f64,
    pub plate_height_m: f64,
    pub plate_area_m2: f64,
    pub P2_steady: f64,
    pub gamma_per_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HydrogenSection {
    pub n_levels: usize,
    pub z_max_rb: f64,
    pub n_points: usize,
    pub energy_tol: f64,
    pub scan_min_V_per_m: f64,
    pub scan_max_V_per_m: f64,
    pub scan_points: usize,
    /// Target transition for the operating-field search (Hz).
    pub target_transition_Hz: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapSection {
    pub arm_half_length_um: f64,
    pub frame_half_size_um: f64,
    pub padding_um: f64,
    pub V_guard_V: f64,
    pub fine_um: f64,
    pub growth: f64,
    pub max_spacing_um: f64,
    pub fit_radius_um: f64,
    pub method: Method,
    pub tol_V: f64,
    pub max_sweeps: usize,
    pub sor_omega: f64,
    /// Largest accepted `|Q_xx + Q_yy + Q_zz| / |Q_zz|`.
    pub trace_tolerance: f64,
    pub write_field_map: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EchoSection {
    pub t_free_s: f64,
    pub delta_t_s: f64,
    pub timing: PulseTiming,
    pub fringe_delta_t_max_s: f64,
    pub fringe_points: usize,
    /// Fock cutoff of the full-model check; 0 skips it.
    pub n_fock: usize,
    /// Drive ratio `Omega_12 / |Delta_a - Delta_s|` for the full-model check.
    pub full_model_drive_ratio: f64,
    pub consistency_tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub seed: u64,
    pub shots: usize,
    pub current: NoiseSourceSection,
    pub ripplon: NoiseSourceSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKindName {
    Constant,
    QuasiStatic,
    OrnsteinUhlenbeck,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSourceSection {
    /// Relative fluctuation (dimensionless).
    pub sigma_rel: f64,
    pub kind: NoiseKindName,
    /// Needed for `ornstein_uhlenbeck` only.
    pub correlation_time_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Threshold `theta_min_rad` over the configured duration range.
    Scan,
    /// Threshold pi, with `delta_t = pi s` added to the range.
    Showcase,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivitySection {
    pub preset: Preset,
    pub theta_min_rad: f64,
    pub delta_t_min_s: f64,
    pub delta_t_max_s: f64,
    pub points: usize,
    pub benchmarks: Vec<BenchmarkSection>,
    pub image_current: Vec<ImageCurrentSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSection {
    pub label: String,
    pub E_V_per_m: Option<f64>,
    pub power_W: Option<f64>,
    pub area_m2: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageCurrentSection {
    pub label: String,
    pub n_s_per_m2: f64,
    pub plate_area_m2: f64,
    pub plate_height_m: f64,
    pub omega_m_rad_per_s: f64,
    pub P2_steady: f64,
    pub gamma_per_s: f64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|ConfigError(m)| ConfigError(format!("{}: {m}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(ConfigError(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        cfg.parameter_set()?;
        cfg.geometry()?;
        cfg.grid()?;
        cfg.noise_model()?;
        cfg.check_ranges()?;
        Ok(cfg)
    }

    fn check_ranges(&self) -> Result<(), ConfigError> {
        let h = &self.hydrogen;
        if !(h.scan_min_V_per_m >= 0.0 && h.scan_max_V_per_m > h.scan_min_V_per_m)
            || h.scan_points < 2
        {
            return Err(ConfigError(
                "hydrogen: need 0 <= scan_min_V_per_m < scan_max_V_per_m and scan_points >= 2"
                    .into(),
            ));
        }
        if h.n_levels < 2 || h.n_points < 100 || !(h.z_max_rb > 0.0) || !(h.energy_tol > 0.0) {
            return Err(ConfigError(
                "hydrogen: need n_levels >= 2, n_points >= 100, z_max_rb > 0 and energy_tol > 0"
                    .into(),
            ));
        }
        let e = &self.echo;
        if e.fringe_points < 2 || !(e.fringe_delta_t_max_s > 0.0) {
            return Err(ConfigError(
                "echo: need fringe_points >= 2 and fringe_delta_t_max_s > 0".into(),
            ));
        }
        if !(e.consistency_tol > 0.0)
            || !(e.full_model_drive_ratio > 0.0 && e.full_model_drive_ratio < 1.0)
        {
            return Err(ConfigError(
                "echo: need consistency_tol > 0 and 0 < full_model_drive_ratio < 1".into(),
            ));
        }
        let s = &self.sensitivity;
        if !(s.theta_min_rad > 0.0) {
            return Err(ConfigError(
                "sensitivity.theta_min_rad must be positive".into(),
            ));
        }
        if !(s.delta_t_min_s > 0.0 && s.delta_t_max_s > s.delta_t_min_s) || s.points < 2 {
            return Err(ConfigError(
                "sensitivity: need 0 < delta_t_min_s < delta_t_max_s and points >= 2".into(),
            ));
        }
        for b in &s.benchmarks {
            if b.E_V_per_m.is_none() && (b.power_W.is_none() || b.area_m2.is_none()) {
                return Err(ConfigError(format!(
                    "sensitivity.benchmarks '{}': give E_V_per_m or both power_W and area_m2",
                    b.label
                )));
            }
        }
        if !(self.trap.trace_tolerance > 0.0) {
            return Err(ConfigError("trap.trace_tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn constants(&self) -> PhysicalConstants {
        PhysicalConstants::default()
    }

    pub fn parameter_set(&self) -> Result<ParameterSet, ConfigError> {
        let s = &self.params;
        let p = ParameterSet {
            i_dc: s.I_dc_A,
            h: s.h_um * 1e-6,
            l: s.l_um * 1e-6,
            d: s.d_um * 1e-6,
            v_bias: s.V_bias_V,
            temperature: s.T_K,
            e_z: s.E_z_V_per_m,
            q_xx_per_volt: s.Q_xx_V_per_m2_per_V,
            q_yy_per_volt: s.Q_yy_V_per_m2_per_V,
            q_zz_per_volt: s.Q_zz_V_per_m2_per_V,
            omega_12: s.Omega_12_rad_per_s,
            drive_detuning: DriveDetuning::FromStarkShift(s.detuning_from_stark_rad_per_s),
            i_0: s.I_0_A,
            omega_m: s.omega_m_rad_per_s,
            n_s: s.n_s_per_m2,
            plate_height: s.plate_height_m,
            plate_area: s.plate_area_m2,
        };
        p.validate()
            .map_err(|e| ConfigError(format!("params: {e}")))?;
        if !(0.0..=1.0).contains(&s.P2_steady) || !(s.gamma_per_s > 0.0) {
            return Err(ConfigError(
                "params: need 0 <= P2_steady <= 1 and gamma_per_s > 0".into(),
            ));
        }
        Ok(p)
    }

    pub fn scan_settings(&self, c: &PhysicalConstants) -> ScanSettings {
        let h = &self.hydrogen;
        ScanSettings {
            template: Potential1D {
                z_max: h.z_max_rb * c.bohr_radius(),
                n_points: h.n_points,
                ..Potential1D::new(c, 0.0)
            },
            n_levels: h.n_levels,
            options: SolverOptions {
                energy_tol: h.energy_tol,
                ..SolverOptions::default()
            },
        }
    }

    pub fn scan_fields(&self) -> Vec<f64> {
        let h = &self.hydrogen;
        let n = h.scan_points;
        (0..n)
            .map(|i| {
                h.scan_min_V_per_m
                    + (h.scan_max_V_per_m - h.scan_min_V_per_m) * i as f64 / (n - 1) as f64
            })
            .collect()
    }

    /// Electrode cell per volt of bias.
    pub fn geometry(&self) -> Result<ElectrodeGeometry, ConfigError> {
        let p = &self.params;
        let t = &self.trap;
        let g = ElectrodeGeometry {
            arm_half_length: t.arm_half_length_um * 1e-6,
            frame_half_size: t.frame_half_size_um * 1e-6,
            padding: t.padding_um * 1e-6,
            v_guard: t.V_guard_V,
            ..ElectrodeGeometry::standard(p.h_um * 1e-6, p.l_um * 1e-6, p.d_um * 1e-6, 1.0)
        };
        g.validate()
            .map_err(|e| ConfigError(format!("trap geometry: {e}")))?;
        Ok(g)
    }

    pub fn grid(&self) -> Result<GridSpec, ConfigError> {
        let t = &self.trap;
        let g = GridSpec {
            fine: t.fine_um * 1e-6,
            growth: t.growth,
            max_spacing: t.max_spacing_um * 1e-6,
        };
        g.validate()
            .map_err(|e| ConfigError(format!("trap grid: {e}")))?;
        if !(t.fit_radius_um > 0.0) {
            return Err(ConfigError("trap.fit_radius_um must be positive".into()));
        }
        Ok(g)
    }

    pub fn relaxation(&self) -> RelaxationSettings {
        let t = &self.trap;
        RelaxationSettings {
            tol: t.tol_V,
            max_sweeps: t.max_sweeps,
            omega: t.sor_omega,
            method: t.method,
        }
    }

    pub fn fit_radius(&self) -> f64 {
        self.trap.fit_radius_um * 1e-6
    }

    pub fn noise_model(&self) -> Result<NoiseModel, ConfigError> {
        let n = NoiseModel {
            current: source(&self.noise.current, "noise.current")?,
            ripplon: source(&self.noise.ripplon, "noise.ripplon")?,
            seed: self.noise.seed,
        };
        n.validate()
            .map_err(|e| ConfigError(format!("noise: {e}")))?;
        Ok(n)
    }

    pub fn benchmarks(&self) -> Vec<Benchmark> {
        self.sensitivity
            .benchmarks
            .iter()
            .map(|b| Benchmark {
                label: b.label.clone(),
                e_field: b.E_V_per_m,
                power: b.power_W,
                area: b.area_m2,
            })
            .collect()
    }

    pub fn image_current_cases(&self) -> Vec<ImageCurrentCase> {
        self.sensitivity
            .image_current
            .iter()
            .map(|s| ImageCurrentCase {
                label: s.label.clone(),
                n_s: s.n_s_per_m2,
                plate_area: s.plate_area_m2,
                plate_height: s.plate_height_m,
                omega_m: s.omega_m_rad_per_s,
                p2_target: s.P2_steady,
                gamma: s.gamma_per_s,
            })
            .collect()
    }

    /// `(theta_min, durations)` after applying the preset.
    pub fn sensitivity_plan(&self) -> (f64, f64, f64, usize, bool) {
        let s = &self.sensitivity;
        match s.preset {
            Preset::Scan => (
                s.theta_min_rad,
                s.delta_t_min_s,
                s.delta_t_max_s,
                s.points,
                false,
            ),
            Preset::Showcase => (PI, s.delta_t_min_s, s.delta_t_max_s, s.points, true),
        }
    }
}

fn source(s: &NoiseSourceSection, name: &str) -> Result<NoiseSource, ConfigError> {
    let kind = match (s.kind, s.correlation_time_s) {
        (NoiseKindName::Constant, None) => NoiseKind::Constant,
        (NoiseKindName::QuasiStatic, None) => NoiseKind::QuasiStatic,
        (NoiseKindName::OrnsteinUhlenbeck, Some(tau)) => NoiseKind::OrnsteinUhlenbeck {
            correlation_time: tau,
        },
        (NoiseKindName::OrnsteinUhlenbeck, None) => {
            return Err(ConfigError(format!(
                "{name}: ornstein_uhlenbeck needs correlation_time_s"
            )))
        }
        (_, Some(_)) => {
            return Err(ConfigError(format!(
                "{name}: correlation_time_s only applies to ornstein_uhlenbeck"
            )))
        }
    };
    Ok(NoiseSource {
        sigma: s.sigma_rel,
        kind,
    })
}
