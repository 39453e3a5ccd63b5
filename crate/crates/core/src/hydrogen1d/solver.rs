use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::tridiag::SymTridiagonal;
use crate::error::{Error, Result};
use crate::params::PhysicalConstants;

/// Vertical potential `-Lambda/z + e E_z z` on `0 < z < z_max` with hard walls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Potential1D {
    /// Image-charge strength (J m).
    pub lambda: f64,
    /// Pressing field (V/m).
    pub e_z: f64,
    /// Domain cutoff (m).
    pub z_max: f64,
    /// Interior points of the coarsest grid.
    pub n_points: usize,
}

impl Potential1D {
    /// Defaults: `z_max = 80 r_b`, 4000 interior points.
    pub fn new(c: &PhysicalConstants, e_z: f64) -> Self {
        Self {
            lambda: c.image_strength(),
            e_z,
            z_max: 80.0 * c.bohr_radius(),
            n_points: 4000,
        }
    }

    pub fn spacing(&self) -> f64 {
        self.z_max / (self.n_points + 1) as f64
    }

    /// Interior nodes `z_i = i * spacing`, `i = 1..=n_points`.
    pub fn grid(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..=self.n_points).map(|i| i as f64 * h).collect()
    }

    /// Potential energy at `z` (J); `e` is the elementary charge.
    pub fn energy(&self, e: f64, z: f64) -> f64 {
        -self.lambda / z + e * self.e_z * z
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Relative tolerance on the grid-doubling change of the extrapolated energies.
    pub energy_tol: f64,
    /// Tail criterion: |psi| over the outer 10% of the domain relative to its maximum.
    pub tail_tol: f64,
    /// How many times `z_max` may be doubled to satisfy the tail criterion.
    pub max_extensions: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            energy_tol: 1e-6,
            tail_tol: 1e-8,
            max_extensions: 4,
        }
    }
}

/// Lowest eigenpairs of the vertical motion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum1D {
    /// Ascending energies (J), Richardson-extrapolated from the two finest grids.
    pub energies: Vec<f64>,
    /// Energies on the finest grid alone (J).
    pub raw_energies: Vec<f64>,
    /// Finest-grid nodes (m).
    pub grid: Vec<f64>,
    pub spacing: f64,
    /// `psi_n` on `grid`, normalised to `sum psi^2 * spacing = 1` (m^-1/2).
    pub wavefunctions: Vec<Vec<f64>>,
    pub n_levels: usize,
    /// Largest relative change of the extrapolated energies under the last grid doubling.
    pub convergence: f64,
    pub potential: Potential1D,
}

impl Spectrum1D {
    /// Transition angular frequency `(E_m - E_n)/hbar` between 1-based levels.
    pub fn transition(&self, c: &PhysicalConstants, n: usize, m: usize) -> f64 {
        (self.energies[m - 1] - self.energies[n - 1]) / c.hbar
    }

    /// `<n|f(z)|m>` by quadrature on the grid (1-based levels).
    pub fn matrix_element(&self, n: usize, m: usize, f: impl Fn(f64) -> f64) -> f64 {
        let (a, b) = (&self.wavefunctions[n - 1], &self.wavefunctions[m - 1]);
        self.spacing
            * self
                .grid
                .iter()
                .zip(a.iter().zip(b))
                .map(|(&z, (&x, &y))| x * f(z) * y)
                .sum::<f64>()
    }

    /// Number of sign changes of `psi_n`, ignoring the numerically zero tail.
    pub fn node_count(&self, n: usize) -> usize {
        let psi = &self.wavefunctions[n - 1];
        let max = psi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut last = 0.0f64;
        let mut nodes = 0;
        for &x in psi {
            if x.abs() < 1e-7 * max {
                continue;
            }
            if last != 0.0 && x.signum() != last.signum() {
                nodes += 1;
            }
            last = x;
        }
        nodes
    }

    /// Two-column `(z [m], psi [m^-1/2])` text dump of level `n` (1-based).
    pub fn write_wavefunction<W: Write>(&self, n: usize, mut w: W) -> io::Result<()> {
        writeln!(w, "# z[m] psi_{n}[m^-1/2]")?;
        for (z, p) in self.grid.iter().zip(&self.wavefunctions[n - 1]) {
            writeln!(w, "{z:.9e} {p:.9e}")?;
        }
        Ok(())
    }
}

struct GridSolve {
    energies: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    grid: Vec<f64>,
    spacing: f64,
}

/// Dimensionless problem: lengths in r_b, energies in Lambda/r_b.
/// `H = -1/2 d^2/dz^2 - 1/z + F z`.
fn solve_grid(field: f64, z_max: f64, n: usize, n_levels: usize, want_vectors: bool) -> GridSolve {
    let h = z_max / (n + 1) as f64;
    let grid: Vec<f64> = (1..=n).map(|i| i as f64 * h).collect();
    let kin = 1.0 / (h * h);
    let diag: Vec<f64> = grid.iter().map(|&z| kin - 1.0 / z + field * z).collect();
    let off = vec![-0.5 * kin; n - 1];
    let t = SymTridiagonal::new(diag, off);
    let energies: Vec<f64> = (0..n_levels).map(|k| t.eigenvalue(k)).collect();
    let vectors = if want_vectors {
        energies
            .iter()
            .map(|&e| {
                let mut v = t.eigenvector(e);
                // Positive lobe next to the wall.
                let first = v.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
                if first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                let s = (1.0 / h).sqrt();
                v.iter_mut().for_each(|x| *x *= s);
                v
            })
            .collect()
    } else {
        Vec::new()
    };
    GridSolve {
        energies,
        vectors,
        grid,
        spacing: h,
    }
}

fn tail_ok(vectors: &[Vec<f64>], tol: f64) -> bool {
    vectors.iter().all(|v| {
        let n = v.len();
        let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let tail = v[n - n / 10..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        tail < tol * max
    })
}

fn richardson(coarse: &[f64], fine: &[f64]) -> Vec<f64> {
    coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect()
}

/// Solve for the lowest `n_levels` states.
///
/// The three-point Laplacian is solved on the base grid and two successive
/// halvings of the spacing. Energies are Richardson-extrapolated from each
/// adjacent pair; the two extrapolations must agree to `energy_tol`. If the
/// outer tenth of the domain carries more than `tail_tol` of any
/// wavefunction's peak, `z_max` and the point count are doubled.
pub fn solve_spectrum(
    c: &PhysicalConstants,
    pot: &Potential1D,
    n_levels: usize,
    opts: &SolverOptions,
) -> Result<Spectrum1D> {
    if n_levels < 2 {
        return Err(Error::invalid("n_levels", "need at least two levels"));
    }
    if !(pot.e_z >= 0.0) || !pot.e_z.is_finite() {
        return Err(Error::InvalidPotential(format!(
            "pressing field must be non-negative (spectrum unbounded below otherwise), got {}",
            pot.e_z
        )));
    }
    if !(pot.z_max > 0.0) || pot.n_points < 10 * n_levels {
        return Err(Error::Resolution(format!(
            "grid too small: z_max = {}, n_points = {}",
            pot.z_max, pot.n_points
        )));
    }
    let r_b = c.bohr_radius();
    let unit = c.atomic_energy_unit();
    let field = c.e * pot.e_z * r_b / unit;

    let mut z_max = pot.z_max / r_b;
    let mut n = pot.n_points;
    let h = z_max / (n + 1) as f64;
    // Resolution: 40 points per local wavelength of the highest level at z = r_b.
    let e_top_guess =
        -1.0 / (2.0 * (n_levels * n_levels) as f64) + field * 2.0 * (n_levels * n_levels) as f64;
    let kinetic = (e_top_guess + 1.0 - field).max(1e-3);
    let wavelength = 2.0 * std::f64::consts::PI / (2.0 * kinetic).sqrt();
    if h > wavelength / 40.0 {
        return Err(Error::Resolution(format!(
            "spacing {:.3e} r_b exceeds 1/40 of the local wavelength {:.3e} r_b",
            h, wavelength
        )));
    }

    for _ in 0..=opts.max_extensions {
        let g0 = solve_grid(field, z_max, n, n_levels, false);
        let g1 = solve_grid(field, z_max, 2 * n + 1, n_levels, false);
        let g2 = solve_grid(field, z_max, 4 * n + 3, n_levels, true);
        if !tail_ok(&g2.vectors, opts.tail_tol) {
            z_max *= 2.0;
            n = 2 * n + 1;
            continue;
        }
        let r1 = richardson(&g0.energies, &g1.energies);
        let r2 = richardson(&g1.energies, &g2.energies);
        let convergence = r1
            .iter()
            .zip(&r2)
            .map(|(a, b)| ((a - b) / b).abs())
            .fold(0.0, f64::max);
        if convergence > opts.energy_tol {
            return Err(Error::Resolution(format!(
                "grid doubling changed energies by {convergence:.3e} (tolerance {:.1e})",
                opts.energy_tol
            )));
        }
        let inv_sqrt_rb = 1.0 / r_b.sqrt();
        return Ok(Spectrum1D {
            energies: r2.iter().map(|e| e * unit).collect(),
            raw_energies: g2.energies.iter().map(|e| e * unit).collect(),
            grid: g2.grid.iter().map(|z| z * r_b).collect(),
            spacing: g2.spacing * r_b,
            wavefunctions: g2
                .vectors
                .into_iter()
                .map(|v| v.into_iter().map(|x| x * inv_sqrt_rb).collect())
                .collect(),
            n_levels,
            convergence,
            potential: Potential1D {
                z_max: z_max * r_b,
                n_points: n,
                ..pot.clone()
            },
        });
    }
    Err(Error::Resolution(format!(
        "wavefunction tails still above {:.1e} after extending z_max to {:.1} r_b",
        opts.tail_tol, z_max
    )))
}

/// Dipole matrix `<n|z|m>` over the computed levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DipoleTable {
    /// Row-major `n_levels x n_levels` (m).
    pub z: Vec<Vec<f64>>,
    pub r_b: f64,
}

impl DipoleTable {
    /// `<n|z|m>` for 1-based levels.
    pub fn get(&self, n: usize, m: usize) -> f64 {
        self.z[n - 1][m - 1]
    }

    pub fn in_bohr_radii(&self, n: usize, m: usize) -> f64 {
        self.get(n, m) / self.r_b
    }
}

pub fn dipole_elements(c: &PhysicalConstants, spec: &Spectrum1D) -> DipoleTable {
    let n = spec.n_levels;
    let mut z = vec![vec![0.0; n]; n];
    for i in 1..=n {
        for j in i..=n {
            let v = spec.matrix_element(i, j, |x| x);
            z[i - 1][j - 1] = v;
            z[j - 1][i - 1] = v;
        }
    }
    DipoleTable {
        z,
        r_b: c.bohr_radius(),
    }
}

/// `r_b = hbar^2 / (m_e Lambda)`.
pub fn bohr_radius(c: &PhysicalConstants) -> f64 {
    c.bohr_radius()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    fn zero_field(n_levels: usize) -> Spectrum1D {
        let c = consts();
        solve_spectrum(
            &c,
            &Potential1D::new(&c, 0.0),
            n_levels,
            &SolverOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn analytic_series_at_zero_field() {
        let c = consts();
        let s = zero_field(4);
        let unit = c.atomic_energy_unit();
        for n in 1..=4 {
            let exact =
                -c.image_strength().powi(2) * c.m_e / (2.0 * c.hbar.powi(2) * (n * n) as f64);
            assert!(((s.energies[n - 1] - exact) / exact).abs() < 1e-6, "n={n}");
            assert!((exact / unit + 0.5 / (n * n) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_field_transition_near_119_ghz() {
        let c = consts();
        let s = zero_field(2);
        let f = s.transition(&c, 1, 2) / (2.0 * std::f64::consts::PI);
        assert!((f / 119e9 - 1.0).abs() < 0.02, "{f:e}");
    }

    #[test]
    fn ground_state_mean_height_is_1_5_rb() {
        let c = consts();
        let s = zero_field(3);
        let d = dipole_elements(&c, &s);
        // Exact psi_1 = 2 r_b^-3/2 z exp(-z/r_b) gives <z> = 1.5 r_b.
        assert!((d.in_bohr_radii(1, 1) - 1.5).abs() < 1e-4);
        // Quadrature oracle on the exact function, independent of the solver.
        let r_b = c.bohr_radius();
        let m = 200_000;
        let h = 60.0 * r_b / m as f64;
        let mut num = 0.0;
        for i in 1..m {
            let z = i as f64 * h;
            let psi = 2.0 * r_b.powf(-1.5) * z * (-z / r_b).exp();
            num += psi * psi * z * h;
        }
        assert!((num / r_b - 1.5).abs() < 1e-6);
    }

    #[test]
    fn orthonormal_and_sturm_nodes() {
        let c = consts();
        let s = solve_spectrum(
            &c,
            &Potential1D::new(&c, 5690.0),
            6,
            &SolverOptions::default(),
        )
        .unwrap();
        for n in 1..=6 {
            for m in 1..=6 {
                let ov = s.matrix_element(n, m, |_| 1.0);
                let target = if n == m { 1.0 } else { 0.0 };
                assert!((ov - target).abs() < 1e-8, "<{n}|{m}> = {ov}");
            }
            assert_eq!(s.node_count(n), n - 1);
        }
        let d = dipole_elements(&c, &s);
        for n in 1..=6 {
            assert!(d.get(n, n) > 0.0);
            for m in 1..=6 {
                assert!((d.get(n, m) - d.get(m, n)).abs() <= 1e-10 * d.get(n, m).abs());
            }
        }
    }

    #[test]
    fn pressing_field_raises_ground_level() {
        let c = consts();
        let opts = SolverOptions::default();
        let e0 = solve_spectrum(&c, &Potential1D::new(&c, 0.0), 2, &opts)
            .unwrap()
            .energies[0];
        let e1 = solve_spectrum(&c, &Potential1D::new(&c, 1000.0), 2, &opts)
            .unwrap()
            .energies[0];
        assert!(e1 > e0);
    }

    #[test]
    fn hellmann_feynman() {
        let c = consts();
        let opts = SolverOptions::default();
        let f0 = 5690.0;
        let df = 1.0;
        let sp = solve_spectrum(&c, &Potential1D::new(&c, f0 + df), 3, &opts).unwrap();
        let sm = solve_spectrum(&c, &Potential1D::new(&c, f0 - df), 3, &opts).unwrap();
        let s0 = solve_spectrum(&c, &Potential1D::new(&c, f0), 3, &opts).unwrap();
        let d = dipole_elements(&c, &s0);
        for n in 1..=3 {
            let slope = (sp.energies[n - 1] - sm.energies[n - 1]) / (2.0 * df);
            let hf = c.e * d.get(n, n);
            assert!(
                ((slope - hf) / hf).abs() < 1e-4,
                "n={n} slope={slope:e} hf={hf:e}"
            );
        }
    }

    #[test]
    fn completeness_from_below() {
        let c = consts();
        let s = solve_spectrum(
            &c,
            &Potential1D::new(&c, 5690.0),
            6,
            &SolverOptions::default(),
        )
        .unwrap();
        let d = dipole_elements(&c, &s);
        let z2 = s.matrix_element(1, 1, |z| z * z);
        let mut partial = 0.0;
        let mut prev_gap = f64::INFINITY;
        for m in 1..=6 {
            partial += d.get(1, m).powi(2);
            assert!(partial <= z2 * (1.0 + 1e-12));
            let gap = z2 - partial;
            assert!(gap <= prev_gap);
            prev_gap = gap;
        }
        assert!(partial / z2 > 0.9, "{}", partial / z2);
    }

    #[test]
    fn rejects_negative_field_and_single_level() {
        let c = consts();
        let opts = SolverOptions::default();
        assert!(matches!(
            solve_spectrum(&c, &Potential1D::new(&c, -1.0), 2, &opts),
            Err(Error::InvalidPotential(_))
        ));
        assert!(solve_spectrum(&c, &Potential1D::new(&c, 0.0), 1, &opts).is_err());
    }

    #[test]
    fn coarse_grid_fails_certification() {
        let c = consts();
        let pot = Potential1D {
            n_points: 100,
            ..Potential1D::new(&c, 0.0)
        };
        assert!(matches!(
            solve_spectrum(&c, &pot, 2, &SolverOptions::default()),
            Err(Error::Resolution(_))
        ));
    }
}
