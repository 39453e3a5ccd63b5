//! Hamiltonian builders. Every operator is `H / hbar` in rad/s.

use std::collections::VecDeque;

use super::hilbert::{
    ket_bra, sigma_x, sigma_z, CMatrix, HilbertSpec, OperatorMatrix, C64, DOWN, UP, ZERO,
};
use super::model::ModelParams;
use crate::error::{Error, Result};
use crate::params::DispersiveShifts;

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn scaled(m: &CMatrix, s: f64) -> CMatrix {
    m.map(|z| z * s)
}

fn proj(a: usize) -> CMatrix {
    ket_bra(a, a)
}

/// Bare atom levels plus the x-oscillator ladder `omega_x (n + 1/2)`.
pub fn build_h0(spec: &HilbertSpec, p: &ModelParams) -> OperatorMatrix {
    let one2 = HilbertSpec::identity2();
    let atom = scaled(&proj(0), p.omega_1) + scaled(&proj(1), p.omega_2);
    let ladder = scaled(
        &(spec.number() + scaled(&spec.fock_identity(), 0.5)),
        p.omega_x,
    );
    &spec.embed(&atom, &one2, &spec.fock_identity()) + &spec.embed(&one2, &one2, &ladder)
}

/// `(omega_s/2)(1 - z/h) sigma_x - eta0 omega_s (a + a^dagger) sigma_z` with `z`
/// projected on the two atom levels.
pub fn build_spin_dipole_v(spec: &HilbertSpec, p: &ModelParams) -> OperatorMatrix {
    let one2 = HilbertSpec::identity2();
    // z/h = 2 eta1 |1><1| + 2 eta2 |2><2| + (z12/h)(|1><2| + |2><1|)
    let z_over_h = scaled(&proj(0), 2.0 * p.eta1)
        + scaled(&proj(1), 2.0 * p.eta2)
        + scaled(&(ket_bra(0, 1) + ket_bra(1, 0)), p.z12_over_h);
    let atom = one2.clone() - z_over_h;
    let a = spec.annihilation();
    let x = &a + a.adjoint();
    let zeeman = spec
        .embed(&atom, &sigma_x(), &spec.fock_identity())
        .scale(0.5 * p.omega_s);
    let lateral = spec.embed(&one2, &sigma_z(), &x).scale(-p.eta0 * p.omega_s);
    &zeeman + &lateral
}

/// Diagonal part `H0 + (omega_s/2) sigma_x - omega_s sigma_x (eta1 |1><1| + eta2 |2><2|)`.
pub fn build_dressed_h0(spec: &HilbertSpec, p: &ModelParams) -> OperatorMatrix {
    let one2 = HilbertSpec::identity2();
    let atom = scaled(&one2, 0.5) - scaled(&proj(0), p.eta1) - scaled(&proj(1), p.eta2);
    let spin = spec
        .embed(&atom, &sigma_x(), &spec.fock_identity())
        .scale(p.omega_s);
    &build_h0(spec, p) + &spin
}

/// Energy of `|a, s, k>` under [`build_dressed_h0`].
pub fn dressed_energy(p: &ModelParams, a: usize, s: usize, k: usize) -> f64 {
    let level = if a == 0 { p.omega_1 } else { p.omega_2 };
    let eta = if a == 0 { p.eta1 } else { p.eta2 };
    let sign = if s == UP { 1.0 } else { -1.0 };
    level + p.omega_x * (k as f64 + 0.5) + sign * p.omega_s * (0.5 - eta)
}

/// Lab-frame Hamiltonian with a classical drive of carrier `omega_T`:
/// `H0_dressed + 2 Omega_12 (|1><2| + h.c.) cos(omega_T t - phase) - eta0 omega_s (a + a^dagger) sigma_z`.
///
/// The drive amplitude is `2 Omega_12` so that the rotating-wave part of the
/// coupling is `Omega_d |1><2| e^{i omega_T t} + h.c.`.
pub fn build_lab_hamiltonian(spec: &HilbertSpec, p: &ModelParams, t: f64) -> OperatorMatrix {
    let one2 = HilbertSpec::identity2();
    let drive_amp = 2.0 * p.omega_12 * (p.omega_t() * t - p.drive_phase).cos();
    let drive = spec
        .embed(
            &(ket_bra(0, 1) + ket_bra(1, 0)),
            &one2,
            &spec.fock_identity(),
        )
        .scale(drive_amp);
    let a = spec.annihilation();
    let lateral = spec
        .embed(&one2, &sigma_z(), &(&a + a.adjoint()))
        .scale(-p.eta0 * p.omega_s);
    &(&build_dressed_h0(spec, p) + &drive) + &lateral
}

/// One matrix element `amp * exp(i freq t)` of a Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasedEntry {
    pub row: usize,
    pub col: usize,
    pub amp: C64,
    pub freq: f64,
}

/// Hamiltonian whose entries each rotate at a single frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasedHamiltonian {
    pub dim: usize,
    pub entries: Vec<PhasedEntry>,
}

/// `H(t) = exp(iKt) M exp(-iKt)` with diagonal `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatingFrame {
    pub k: Vec<f64>,
    pub m: CMatrix,
}

impl RotatingFrame {
    /// Time-independent generator `M + K` of the rotated state.
    pub fn generator(&self) -> CMatrix {
        let mut g = self.m.clone();
        for (i, k) in self.k.iter().enumerate() {
            g[(i, i)] += real(*k);
        }
        g
    }
}

impl PhasedHamiltonian {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    /// Adds `amp e^{i freq t}` at `(row, col)` and its conjugate at `(col, row)`.
    pub fn push_hermitian_pair(&mut self, row: usize, col: usize, amp: C64, freq: f64) {
        if amp == ZERO {
            return;
        }
        self.entries.push(PhasedEntry {
            row,
            col,
            amp,
            freq,
        });
        if row != col {
            self.entries.push(PhasedEntry {
                row: col,
                col: row,
                amp: amp.conj(),
                freq: -freq,
            });
        }
    }

    pub fn at(&self, t: f64) -> OperatorMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for e in &self.entries {
            m[(e.row, e.col)] += e.amp * C64::from_polar(1.0, e.freq * t);
        }
        OperatorMatrix::new(m)
    }

    /// Finds diagonal `K` with `K_r - K_c = freq` for every entry by walking the
    /// coupling graph. Each connected component is centred on zero mean.
    pub fn rotating_frame(&self) -> Result<RotatingFrame> {
        let n = self.dim;
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut m = CMatrix::zeros(n, n);
        let mut scale = 0.0f64;
        for e in &self.entries {
            m[(e.row, e.col)] += e.amp;
            scale = scale.max(e.freq.abs());
            if e.row == e.col {
                if e.freq != 0.0 {
                    return Err(Error::invalid("frame", "diagonal entries must be static"));
                }
                continue;
            }
            adj[e.row].push((e.col, e.freq));
        }
        let tol = 1e-9 * scale.max(1.0);
        let mut k = vec![f64::NAN; n];
        for start in 0..n {
            if !k[start].is_nan() {
                continue;
            }
            k[start] = 0.0;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for &(j, nu) in &adj[i] {
                    // K_i - K_j = nu
                    let want = k[i] - nu;
                    if k[j].is_nan() {
                        k[j] = want;
                        members.push(j);
                        queue.push_back(j);
                    } else if (k[j] - want).abs() > tol {
                        return Err(Error::invalid(
                            "frame",
                            format!(
                                "entry ({i},{j}) frequency {nu} inconsistent with a diagonal frame"
                            ),
                        ));
                    }
                }
            }
            let mean = members.iter().map(|&i| k[i]).sum::<f64>() / members.len() as f64;
            for &i in &members {
                k[i] -= mean;
            }
        }
        Ok(RotatingFrame { k, m })
    }
}

/// Interaction-picture Hamiltonian after the rotating-wave approximation, as
/// a set of rotating entries.
pub fn h_int_terms(spec: &HilbertSpec, p: &ModelParams) -> PhasedHamiltonian {
    let mut h = PhasedHamiltonian::new(spec.dim());
    let od = p.omega_d();
    let g = -p.eta0 * p.omega_s;
    for k in 0..spec.n_fock {
        for (s, nu) in [(DOWN, p.delta_a - p.delta_s), (UP, p.delta_a + p.delta_s)] {
            h.push_hermitian_pair(spec.index(0, s, k), spec.index(1, s, k), od, nu);
        }
    }
    for (a, eta) in [(0, p.eta1), (1, p.eta2)] {
        let nu = p.delta_x + 2.0 * eta * p.omega_s;
        // a^dagger |down><up|: |a, down, k+1> <a, up, k|
        for k in 0..spec.n_fock.saturating_sub(1) {
            let amp = real(g * ((k + 1) as f64).sqrt());
            h.push_hermitian_pair(spec.index(a, DOWN, k + 1), spec.index(a, UP, k), amp, nu);
        }
    }
    h
}

pub fn build_h_int(spec: &HilbertSpec, p: &ModelParams, t: f64) -> OperatorMatrix {
    h_int_terms(spec, p).at(t)
}

/// Resonant spin-selective drive `(Omega_d |1><2| + h.c.) ⊗ |down><down|`.
pub fn build_h_d(spec: &HilbertSpec, p: &ModelParams) -> OperatorMatrix {
    let od = p.omega_d();
    let atom = ket_bra(0, 1).map(|z| z * od) + ket_bra(1, 0).map(|z| z * od.conj());
    spec.embed(&atom, &proj(DOWN), &spec.fock_identity())
}

/// Five-term dispersive Hamiltonian built from given shifts.
pub fn build_h_eff_from(spec: &HilbertSpec, s: &DispersiveShifts) -> OperatorMatrix {
    let fid = spec.fock_identity();
    let n = spec.number();
    let sx = sigma_x();
    let atom_z = proj(0) - proj(1);
    let mut h = spec.embed(&atom_z, &proj(DOWN), &fid).scale(s.omega_sz);
    h = &h - &spec.embed(&proj(0), &sx, &n).scale(s.omega_sx1);
    h = &h - &spec.embed(&proj(1), &sx, &n).scale(s.omega_sx2);
    h = &h - &spec.embed(&proj(0), &proj(UP), &fid).scale(s.omega_sx1);
    h = &h - &spec.embed(&proj(1), &proj(UP), &fid).scale(s.omega_sx2);
    h
}

pub fn build_h_eff(spec: &HilbertSpec, p: &ModelParams) -> Result<OperatorMatrix> {
    Ok(build_h_eff_from(spec, &p.shifts()?))
}

/// Ground-manifold form on the spin factor: `diag(Omega_sz, -Omega_sx1)` in (down, up).
pub fn reduced_h_eff(s: &DispersiveShifts) -> OperatorMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(DOWN, DOWN)] = real(s.omega_sz);
    m[(UP, UP)] = real(-s.omega_sx1);
    OperatorMatrix::new(m)
}

/// `(Omega_s / 2)(e^{i theta} |down><up| + h.c.)` on the spin alone.
pub fn esr_spin_matrix(omega_s_esr: f64, theta: f64) -> OperatorMatrix {
    let c = C64::from_polar(0.5 * omega_s_esr, theta);
    let mut m = CMatrix::zeros(2, 2);
    m[(DOWN, UP)] = c;
    m[(UP, DOWN)] = c.conj();
    OperatorMatrix::new(m)
}

/// ESR drive on the composite space (identity on atom and oscillator).
pub fn build_h_esr(spec: &HilbertSpec, omega_s_esr: f64, theta: f64) -> OperatorMatrix {
    spec.embed(
        &HilbertSpec::identity2(),
        &esr_spin_matrix(omega_s_esr, theta).m,
        &spec.fock_identity(),
    )
}

/// Sum of a diagonal spectrum, used as a trace oracle.
pub fn h0_trace(spec: &HilbertSpec, p: &ModelParams) -> f64 {
    let n = spec.n_fock as f64;
    // each atom level appears 2 n times; the ladder sums to n^2/2 per (a, s) block
    2.0 * n * (p.omega_1 + p.omega_2) + 4.0 * p.omega_x * n * n / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::hilbert::ONE;
    use nalgebra::{DMatrix, SymmetricEigen};
    use std::f64::consts::PI;

    pub(crate) fn toy() -> ModelParams {
        ModelParams {
            omega_1: -3.0,
            omega_2: 40.0,
            omega_x: 12.0,
            omega_s: 3.5,
            eta0: 0.02,
            eta1: 0.01,
            eta2: 0.03,
            omega_12: 0.7,
            delta_a: 0.07 + 2.0,
            delta_s: 0.07,
            delta_x: 8.5,
            drive_phase: 0.3,
            z12_over_h: 0.015,
        }
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().fold(0.0f64, |a, z| a.max(z.norm()))
    }

    fn eigenvalues(m: &CMatrix) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(m.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn h0_diagonal_structure() {
        let spec = HilbertSpec::new(6);
        let p = toy();
        let h = build_h0(&spec, &p);
        let g = spec.index(0, DOWN, 0);
        assert!((h[(g, g)].re - (p.omega_1 + 0.5 * p.omega_x)).abs() < 1e-14);
        for k in 0..5 {
            let (i, j) = (spec.index(1, UP, k), spec.index(1, UP, k + 1));
            assert_eq!(h[(j, j)].re - h[(i, i)].re, p.omega_x);
        }
        let tr: f64 = (0..spec.dim()).map(|i| h[(i, i)].re).sum();
        assert!((tr - h0_trace(&spec, &p)).abs() < 1e-10);
        assert_eq!(
            max_abs(&(h.m.clone() - DMatrix::from_diagonal(&h.m.diagonal()))),
            0.0
        );
    }

    #[test]
    fn spin_dipole_limits() {
        let spec = HilbertSpec::new(4);
        let mut p = toy();
        p.eta0 = 0.0;
        p.eta1 = 0.0;
        p.eta2 = 0.0;
        p.z12_over_h = 0.0;
        let v = build_spin_dipole_v(&spec, &p);
        let expect = spec
            .embed(&HilbertSpec::identity2(), &sigma_x(), &spec.fock_identity())
            .scale(p.omega_s / 2.0);
        assert_eq!(max_abs(&(v.m.clone() - expect.m)), 0.0);
        // one (atom, fock) block: eigen-splitting omega_s
        let block = (sigma_x()).map(|z| z * (p.omega_s / 2.0));
        let ev = eigenvalues(&block);
        assert!((ev[1] - ev[0] - p.omega_s).abs() < 1e-14);
        assert!(build_spin_dipole_v(&spec, &toy()).is_hermitian());
    }

    #[test]
    fn dressed_h0_is_diagonal_part_of_h0_plus_v() {
        let spec = HilbertSpec::new(5);
        let p = toy();
        let full = &build_h0(&spec, &p) + &build_spin_dipole_v(&spec, &p);
        let d = build_dressed_h0(&spec, &p);
        for i in 0..spec.dim() {
            assert!((full[(i, i)] - d[(i, i)]).norm() < 1e-13);
            let (a, s, k) = spec.decompose(i);
            assert!((d[(i, i)].re - dressed_energy(&p, a, s, k)).abs() < 1e-13);
        }
    }

    #[test]
    fn h_int_elementary_cases() {
        let spec = HilbertSpec::new(5);
        let mut p = toy();
        p.omega_12 = 0.0;
        p.eta0 = 0.0;
        assert_eq!(build_h_int(&spec, &p, 1.234).max_abs(), 0.0);

        let p = toy();
        let h = build_h_int(&spec, &p, 0.0);
        let (r, c) = (spec.index(0, DOWN, 0), spec.index(1, DOWN, 0));
        assert!((h[(r, c)] - p.omega_d()).norm() < 1e-15);
        assert!((h[(c, r)] - p.omega_d().conj()).norm() < 1e-15);
        for t in [0.1, 1.7, 13.0, 1e3] {
            assert!(build_h_int(&spec, &p, t).is_hermitian());
        }
    }

    #[test]
    fn h_int_phases_are_interaction_picture_frequencies() {
        // entry (i, j) must rotate at the difference of dressed energies plus the carrier
        let spec = HilbertSpec::new(4);
        let p = toy();
        for e in h_int_terms(&spec, &p).entries {
            let (a1, s1, k1) = spec.decompose(e.row);
            let (a2, s2, k2) = spec.decompose(e.col);
            let bohr = dressed_energy(&p, a1, s1, k1) - dressed_energy(&p, a2, s2, k2);
            let carrier = if a1 == 0 && a2 == 1 {
                p.omega_t()
            } else if a1 == 1 && a2 == 0 {
                -p.omega_t()
            } else {
                0.0
            };
            assert!((e.freq - (bohr + carrier)).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn rotating_frame_reproduces_h_int() {
        let spec = HilbertSpec::new(4);
        let p = toy();
        let terms = h_int_terms(&spec, &p);
        let frame = terms.rotating_frame().unwrap();
        for t in [0.0, 0.37, 5.1] {
            let direct = terms.at(t);
            let rot = CMatrix::from_fn(spec.dim(), spec.dim(), |r, c| {
                frame.m[(r, c)] * C64::from_polar(1.0, (frame.k[r] - frame.k[c]) * t)
            });
            assert!(max_abs(&(direct.m - rot)) < 1e-13);
        }
    }

    #[test]
    fn rotating_frame_rejects_inconsistent_loops() {
        let mut h = PhasedHamiltonian::new(3);
        h.push_hermitian_pair(0, 1, ONE, 1.0);
        h.push_hermitian_pair(1, 2, ONE, 1.0);
        h.push_hermitian_pair(0, 2, ONE, 5.0);
        assert!(h.rotating_frame().is_err());
    }

    #[test]
    fn h_d_is_spin_selective() {
        let spec = HilbertSpec::new(3);
        let p = toy();
        let h = build_h_d(&spec, &p);
        for a in 0..2 {
            for k in 0..3 {
                let v = spec.basis(a, UP, k);
                assert_eq!((&h.m * v).norm(), 0.0);
            }
        }
        let (i, j) = (spec.index(0, DOWN, 0), spec.index(1, DOWN, 0));
        let block = CMatrix::from_fn(2, 2, |r, c| h[([i, j][r], [i, j][c])]);
        let ev = eigenvalues(&block);
        assert!((ev[1] - ev[0] - 2.0 * p.omega_12).abs() < 1e-14);
        let mut z = p;
        z.omega_12 = 0.0;
        assert_eq!(build_h_d(&spec, &z).max_abs(), 0.0);
    }

    #[test]
    fn h_eff_read_off() {
        let spec = HilbertSpec::new(5);
        let p = toy();
        let s = p.shifts().unwrap();
        let h = build_h_eff(&spec, &p).unwrap();
        assert!(h.is_hermitian());
        // coefficient of n on (|1>, up) is -Omega_sx1
        let e = |k| h[(spec.index(0, UP, k), spec.index(0, UP, k))].re;
        assert!(((e(3) - e(2)) + s.omega_sx1).abs() < 1e-14);
        assert!((e(0) + s.omega_sx1).abs() < 1e-14);
        let g = h[(spec.index(0, DOWN, 0), spec.index(0, DOWN, 0))].re;
        assert!((g - s.omega_sz).abs() < 1e-14);
        let r = reduced_h_eff(&s);
        assert!(((r[(DOWN, DOWN)].re - r[(UP, UP)].re) - (s.omega_sz + s.omega_sx1)).abs() < 1e-14);
        let mut res = p;
        res.delta_a = res.delta_s;
        assert!(matches!(
            build_h_eff(&spec, &res),
            Err(Error::ResonantDetuning)
        ));
    }

    #[test]
    fn esr_pi_pulse_and_phase_conjugation() {
        let h = esr_spin_matrix(2.0, PI / 2.0);
        let h2 = esr_spin_matrix(2.0, PI / 2.0 + PI);
        assert!((h[(DOWN, UP)] + h2[(DOWN, UP)]).norm() < 1e-15);
        assert!((h[(DOWN, UP)].conj() - h[(UP, DOWN)]).norm() < 1e-15);
        // exp(-i H t) at t = pi / Omega_s via eigen-decomposition
        let eig = SymmetricEigen::new(h.m.clone());
        let t = PI / 2.0;
        let phases = eig.eigenvalues.map(|l| C64::from_polar(1.0, -l * t));
        let u = &eig.eigenvectors * CMatrix::from_diagonal(&phases) * eig.eigenvectors.adjoint();
        assert!((u[(UP, DOWN)].norm() - 1.0).abs() < 1e-12);
        let spec = HilbertSpec::new(2);
        assert!(build_h_esr(&spec, 2.0, -PI / 2.0).is_hermitian());
    }

    #[test]
    fn truncation_robustness_at_toy_scale() {
        let p = toy();
        let lows = |n: usize| {
            let spec = HilbertSpec::new(n);
            let mut v = eigenvalues(&build_lab_hamiltonian(&spec, &p, 0.0).m);
            v.truncate(4);
            v
        };
        let (a, b) = (lows(8), lows(12));
        for (x, y) in a.iter().zip(&b) {
            assert!(((x - y) / x.abs()).abs() < 1e-8, "{x} {y}");
        }
    }
}
