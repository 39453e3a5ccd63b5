use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::ElectrodeGeometry;
use super::grid::{graded_axis, symmetric_axis, GridSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Red-black successive over-relaxation.
    Sor,
    /// Conjugate gradients on the volume-weighted (symmetric) stencil with
    /// diagonal preconditioning. Far fewer iterations on strongly graded grids.
    ConjugateGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxationSettings {
    /// Stop when the largest free-node update of an iteration falls below this (V).
    pub tol: f64,
    pub max_sweeps: usize,
    /// Over-relaxation factor in (0, 2); SOR only.
    pub omega: f64,
    pub method: Method,
}

impl Default for RelaxationSettings {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_sweeps: 20_000,
            omega: 1.9,
            method: Method::ConjugateGradient,
        }
    }
}

/// Sampled potential on a rectilinear grid. Node `(i, j, k)` lives at
/// `(xs[i], ys[j], zs[k])` and is stored at `(k * ny + j) * nx + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub zs: Vec<f64>,
    pub phi: Vec<f64>,
    pub fixed: Vec<bool>,
    pub sweeps: usize,
    pub last_update: f64,
    /// Largest discrete Laplacian over free nodes (V/m^2).
    pub residual: f64,
}

impl FieldMap {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.xs.len(), self.ys.len(), self.zs.len())
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.ys.len() + j) * self.xs.len() + i
    }

    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.phi[self.index(i, j, k)]
    }

    /// Smallest spacing along each axis.
    pub fn min_spacing(&self) -> [f64; 3] {
        let m = |v: &[f64]| {
            v.windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min)
        };
        [m(&self.xs), m(&self.ys), m(&self.zs)]
    }

    /// Nodes `(x, y, z, phi)` inside the ball of `radius` about `center`, free nodes only.
    pub fn samples_in_ball(&self, center: [f64; 3], radius: f64) -> Vec<[f64; 4]> {
        let mut out = Vec::new();
        let (nx, ny, _) = self.dims();
        for (k, &z) in self.zs.iter().enumerate() {
            let dz = z - center[2];
            if dz.abs() > radius {
                continue;
            }
            for (j, &y) in self.ys.iter().enumerate() {
                let dy = y - center[1];
                if dy.abs() > radius {
                    continue;
                }
                for (i, &x) in self.xs.iter().enumerate() {
                    let dx = x - center[0];
                    if dx * dx + dy * dy + dz * dz <= radius * radius {
                        let n = (k * ny + j) * nx + i;
                        if !self.fixed[n] {
                            out.push([dx, dy, dz, self.phi[n]]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Any fixed node in the ball.
    pub fn ball_touches_electrode(&self, center: [f64; 3], radius: f64) -> bool {
        let (nx, ny, _) = self.dims();
        self.zs.iter().enumerate().any(|(k, &z)| {
            self.ys.iter().enumerate().any(|(j, &y)| {
                self.xs.iter().enumerate().any(|(i, &x)| {
                    let r2 =
                        (x - center[0]).powi(2) + (y - center[1]).powi(2) + (z - center[2]).powi(2);
                    r2 <= radius * radius && self.fixed[(k * ny + j) * nx + i]
                })
            })
        })
    }

    /// Largest `|phi(x,y,z) - phi(-x,y,z)|` and `|phi(x,y,z) - phi(x,-y,z)|`.
    /// Meaningful when the axes are symmetric about zero.
    pub fn mirror_asymmetry(&self) -> (f64, f64) {
        let (nx, ny, nz) = self.dims();
        let mut ax: f64 = 0.0;
        let mut ay: f64 = 0.0;
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    let v = self.at(i, j, k);
                    ax = ax.max((v - self.at(nx - 1 - i, j, k)).abs());
                    ay = ay.max((v - self.at(i, ny - 1 - j, k)).abs());
                }
            }
        }
        (ax, ay)
    }

    /// CSV export: a commented header with grid sizes and units, then `x,y,z,phi` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let (nx, ny, nz) = self.dims();
        writeln!(
            w,
            "# rectilinear grid {nx} x {ny} x {nz}; lengths in m, potential in V"
        )?;
        writeln!(
            w,
            "# sweeps {} last_update_V {:.3e} residual_V_per_m2 {:.3e}",
            self.sweeps, self.last_update, self.residual
        )?;
        writeln!(w, "x[m],y[m],z[m],phi[V]")?;
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    writeln!(
                        w,
                        "{:.6e},{:.6e},{:.6e},{:.9e}",
                        self.xs[i],
                        self.ys[j],
                        self.zs[k],
                        self.at(i, j, k)
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Grid adapted to the geometry: fine windows around the trap centre, the
/// cross arms and the guard bars, graded spacing elsewhere.
pub fn build_axes(
    geom: &ElectrodeGeometry,
    spec: &GridSpec,
    fit_radius: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let snap = |v: f64| (v / spec.fine).ceil() * spec.fine;
    let c = snap(fit_radius + 2.0 * spec.fine).max(snap(geom.d));
    let pad = 2.0 * geom.d.max(spec.fine);
    let arm = geom.arm_half_length;
    let f = geom.frame_half_size;
    let lateral = [
        (-c, c),
        (snap(arm - pad) - 0.0, snap(arm + pad)),
        (f - snap(geom.d + pad), f + snap(geom.d + pad)),
    ];
    let xs = symmetric_axis(geom.padding, &lateral, spec);
    let ys = xs.clone();
    let zlo = -(snap(geom.h) + snap(geom.d + pad));
    let zs = graded_axis(-geom.padding, geom.padding, &[(zlo, c)], spec);
    (xs, ys, zs)
}

/// Relax the Laplace equation with electrodes as Dirichlet nodes and zero
/// potential on the outer box.
///
/// Red-black SOR on the non-uniform seven-point stencil. Each half sweep only
/// reads nodes of the opposite colour, so planes are processed in parallel
/// from an immutable source buffer into a destination buffer and the two
/// buffers swap roles between colours; the result is independent of the
/// thread count.
pub fn solve_laplace(
    geom: &ElectrodeGeometry,
    spec: &GridSpec,
    fit_radius: f64,
    relax: &RelaxationSettings,
) -> Result<FieldMap> {
    geom.validate()?;
    spec.validate()?;
    if !(relax.tol > 0.0) || !(relax.omega > 0.0 && relax.omega < 2.0) {
        return Err(Error::invalid(
            "relaxation",
            "need tol > 0 and 0 < omega < 2",
        ));
    }
    if geom.d < 2.0 * spec.fine - 1e-15 {
        return Err(Error::Resolution(format!(
            "wire edge {} m is resolved by fewer than two cells of {} m",
            geom.d, spec.fine
        )));
    }
    let (xs, ys, zs) = build_axes(geom, spec, fit_radius);
    let (nx, ny, nz) = (xs.len(), ys.len(), zs.len());
    let n = nx * ny * nz;
    let mut phi = vec![0.0; n];
    let mut fixed = vec![false; n];
    let tol = 1e-3 * spec.fine;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let idx = (k * ny + j) * nx + i;
                if i == 0 || j == 0 || k == 0 || i == nx - 1 || j == ny - 1 || k == nz - 1 {
                    fixed[idx] = true;
                    phi[idx] = geom.v_outer;
                }
            }
        }
    }
    for e in geom.electrodes() {
        for s in &e.segments {
            let range = |ax: &[f64], lo: f64, hi: f64| -> (usize, usize) {
                let a = ax.partition_point(|&v| v < lo - tol);
                let b = ax.partition_point(|&v| v <= hi + tol);
                (a, b)
            };
            let (i0, i1) = range(&xs, s.lo[0], s.hi[0]);
            let (j0, j1) = range(&ys, s.lo[1], s.hi[1]);
            let (k0, k1) = range(&zs, s.lo[2], s.hi[2]);
            for k in k0..k1 {
                for j in j0..j1 {
                    for i in i0..i1 {
                        let idx = (k * ny + j) * nx + i;
                        fixed[idx] = true;
                        phi[idx] = e.voltage;
                    }
                }
            }
        }
    }

    let coeffs = |ax: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let m = ax.len();
        let mut am = vec![0.0; m];
        let mut ap = vec![0.0; m];
        for i in 1..m - 1 {
            let (hm, hp) = (ax[i] - ax[i - 1], ax[i + 1] - ax[i]);
            am[i] = 2.0 / (hm * (hm + hp));
            ap[i] = 2.0 / (hp * (hm + hp));
        }
        (am, ap)
    };
    let span = |ax: &[f64]| -> Vec<f64> {
        (0..ax.len())
            .map(|i| {
                if i == 0 || i + 1 == ax.len() {
                    0.0
                } else {
                    0.5 * (ax[i + 1] - ax[i - 1])
                }
            })
            .collect()
    };
    let stencil = Stencil {
        nx,
        ny,
        x: coeffs(&xs),
        y: coeffs(&ys),
        z: coeffs(&zs),
        span: (span(&xs), span(&ys), span(&zs)),
    };

    let (merged, sweeps, last) = match relax.method {
        Method::Sor => run_sor(&stencil, &fixed, phi, relax, nz),
        Method::ConjugateGradient => run_cg(&stencil, &fixed, phi, relax, nz),
    };
    let residual = max_residual(&stencil, &fixed, &merged, nz);
    if last >= relax.tol {
        return Err(Error::SolverNonConvergence {
            iterations: sweeps,
            last_update: last,
            residual,
        });
    }
    log::debug!("laplace: {nx}x{ny}x{nz} nodes, {sweeps} sweeps, residual {residual:.3e}");
    Ok(FieldMap {
        xs,
        ys,
        zs,
        phi: merged,
        fixed,
        sweeps,
        last_update: last,
        residual,
    })
}

fn run_sor(
    st: &Stencil,
    fixed: &[bool],
    phi: Vec<f64>,
    relax: &RelaxationSettings,
    nz: usize,
) -> (Vec<f64>, usize, f64) {
    let (nx, ny) = (st.nx, st.ny);
    let plane = nx * ny;
    let mut a = phi;
    let mut b = a.clone();
    let mut sweeps = 0;
    let mut last = f64::INFINITY;
    while sweeps < relax.max_sweeps {
        let u_red = half_sweep(st, fixed, &a, &mut b, 0, relax.omega, plane);
        let u_black = half_sweep(st, fixed, &b, &mut a, 1, relax.omega, plane);
        sweeps += 1;
        last = u_red.max(u_black);
        if last < relax.tol {
            break;
        }
    }
    // Red nodes are current in `b`, black nodes in `a`.
    let merged = (0..nx * ny * nz)
        .map(|idx| {
            let (i, j, k) = (idx % nx, (idx / nx) % ny, idx / plane);
            if (i + j + k) % 2 == 0 {
                b[idx]
            } else {
                a[idx]
            }
        })
        .collect();
    (merged, sweeps, last)
}

/// Per-plane partial sums combined in plane order, so the result does not
/// depend on how rayon splits the work.
fn ordered_sum(parts: Vec<f64>) -> f64 {
    parts.into_iter().sum()
}

fn run_cg(
    st: &Stencil,
    fixed: &[bool],
    phi: Vec<f64>,
    relax: &RelaxationSettings,
    nz: usize,
) -> (Vec<f64>, usize, f64) {
    let plane = st.nx * st.ny;
    let n = phi.len();
    // Weighted operator A = W (-L) restricted to free nodes; W is the dual-cell volume.
    let w: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|idx| {
            let (i, j, k) = st.ijk(idx);
            if fixed[idx] {
                0.0
            } else {
                st.volume(i, j, k)
            }
        })
        .collect();
    let diag: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|idx| {
            if fixed[idx] {
                1.0
            } else {
                let (i, j, k) = st.ijk(idx);
                w[idx] * st.apply(&phi, i, j, k).1
            }
        })
        .collect();
    let apply_a = |u: &[f64], out: &mut [f64]| {
        out.par_chunks_mut(plane).enumerate().for_each(|(k, o)| {
            for (l, v) in o.iter_mut().enumerate() {
                let idx = k * plane + l;
                *v = if fixed[idx] {
                    0.0
                } else {
                    let (i, j, _) = st.ijk(idx);
                    let (off, d) = st.apply(u, i, j, k);
                    w[idx] * (d * u[idx] - off)
                };
            }
        });
    };
    let dot = |a: &[f64], b: &[f64]| -> f64 {
        ordered_sum(
            a.par_chunks(plane)
                .zip(b.par_chunks(plane))
                .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
                .collect(),
        )
    };

    // phi holds the Dirichlet data and zeros on free nodes; solve A u = -A phi.
    let mut x = phi;
    let mut r = vec![0.0; n];
    apply_a_full(st, fixed, &w, &x, &mut r, plane);
    r.par_iter_mut().for_each(|v| *v = -*v);
    let mut z: Vec<f64> = r.par_iter().zip(&diag).map(|(a, d)| a / d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut iters = 0;
    let mut last = f64::INFINITY;
    while iters < relax.max_sweeps {
        if rz == 0.0 {
            last = 0.0;
            break;
        }
        apply_a(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        let step = p
            .par_chunks(plane)
            .map(|c| c.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            .reduce(|| 0.0, f64::max)
            * alpha.abs();
        x.par_iter_mut()
            .zip(&p)
            .for_each(|(xi, pi)| *xi += alpha * pi);
        r.par_iter_mut()
            .zip(&ap)
            .for_each(|(ri, api)| *ri -= alpha * api);
        iters += 1;
        last = step;
        if last < relax.tol {
            break;
        }
        z.par_iter_mut()
            .zip(r.par_iter().zip(&diag))
            .for_each(|(zi, (ri, di))| *zi = ri / di);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        p.par_iter_mut()
            .zip(&z)
            .for_each(|(pi, zi)| *pi = zi + beta * *pi);
    }
    let _ = nz;
    (x, iters, last)
}

/// Weighted residual operator including fixed-node values as sources.
fn apply_a_full(st: &Stencil, fixed: &[bool], w: &[f64], u: &[f64], out: &mut [f64], plane: usize) {
    out.par_chunks_mut(plane).enumerate().for_each(|(k, o)| {
        for (l, v) in o.iter_mut().enumerate() {
            let idx = k * plane + l;
            *v = if fixed[idx] {
                0.0
            } else {
                let (i, j, _) = st.ijk(idx);
                let (off, d) = st.apply(u, i, j, k);
                w[idx] * (d * u[idx] - off)
            };
        }
    });
}

struct Stencil {
    nx: usize,
    ny: usize,
    x: (Vec<f64>, Vec<f64>),
    y: (Vec<f64>, Vec<f64>),
    z: (Vec<f64>, Vec<f64>),
    /// Half the distance between each node's two neighbours, per axis.
    span: (Vec<f64>, Vec<f64>, Vec<f64>),
}

impl Stencil {
    #[inline]
    fn ijk(&self, idx: usize) -> (usize, usize, usize) {
        (
            idx % self.nx,
            (idx / self.nx) % self.ny,
            idx / (self.nx * self.ny),
        )
    }

    /// Dual-cell volume; `2 / (h_m (h_m + h_p))` times it is symmetric in the pair.
    fn volume(&self, i: usize, j: usize, k: usize) -> f64 {
        self.span.0[i] * self.span.1[j] * self.span.2[k]
    }

    #[inline]
    fn apply(&self, src: &[f64], i: usize, j: usize, k: usize) -> (f64, f64) {
        let (nx, plane) = (self.nx, self.nx * self.ny);
        let idx = k * plane + j * nx + i;
        let (xm, xp) = (self.x.0[i], self.x.1[i]);
        let (ym, yp) = (self.y.0[j], self.y.1[j]);
        let (zm, zp) = (self.z.0[k], self.z.1[k]);
        let off = xm * src[idx - 1]
            + xp * src[idx + 1]
            + ym * src[idx - nx]
            + yp * src[idx + nx]
            + zm * src[idx - plane]
            + zp * src[idx + plane];
        (off, xm + xp + ym + yp + zm + zp)
    }
}

fn half_sweep(
    st: &Stencil,
    fixed: &[bool],
    src: &[f64],
    dst: &mut [f64],
    color: usize,
    omega: f64,
    plane: usize,
) -> f64 {
    let (nx, ny) = (st.nx, st.ny);
    let nz = dst.len() / plane;
    dst.par_chunks_mut(plane)
        .enumerate()
        .map(|(k, out)| {
            if k == 0 || k == nz - 1 {
                return 0.0;
            }
            let mut max: f64 = 0.0;
            for j in 1..ny - 1 {
                let start = 1 + (j + k + 1 + color) % 2;
                let mut i = start;
                while i < nx - 1 {
                    let idx = k * plane + j * nx + i;
                    if !fixed[idx] {
                        let (off, diag) = st.apply(src, i, j, k);
                        let old = out[j * nx + i];
                        let delta = omega * (off / diag - old);
                        out[j * nx + i] = old + delta;
                        max = max.max(delta.abs());
                    }
                    i += 2;
                }
            }
            max
        })
        .reduce(|| 0.0, f64::max)
}

fn max_residual(st: &Stencil, fixed: &[bool], phi: &[f64], nz: usize) -> f64 {
    let (nx, ny) = (st.nx, st.ny);
    (1..nz - 1)
        .into_par_iter()
        .map(|k| {
            let mut m: f64 = 0.0;
            for j in 1..ny - 1 {
                for i in 1..nx - 1 {
                    let idx = (k * ny + j) * nx + i;
                    if !fixed[idx] {
                        let (off, diag) = st.apply(phi, i, j, k);
                        m = m.max((off - diag * phi[idx]).abs());
                    }
                }
            }
            m
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> (ElectrodeGeometry, GridSpec, RelaxationSettings) {
        let g = ElectrodeGeometry::standard(2e-6, 20e-6, 1e-6, 1.0);
        let spec = GridSpec {
            fine: 0.5e-6,
            growth: 1.5,
            max_spacing: 5e-6,
        };
        (
            g,
            spec,
            RelaxationSettings {
                tol: 1e-10,
                ..Default::default()
            },
        )
    }

    #[test]
    fn colour_start_offsets_cover_both_parities() {
        // (i + j + k) even is red (colour 0).
        for (j, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let red = 1 + (j + k + 1) % 2;
            assert_eq!((red + j + k) % 2, 0);
            let black = 1 + (j + k + 1 + 1) % 2;
            assert_eq!((black + j + k) % 2, 1);
        }
    }

    #[test]
    fn equipotential_cage() {
        let (g, spec, relax) = small();
        let g = ElectrodeGeometry {
            v_outer: 0.7,
            ..g.with_voltages(0.7, 0.7)
        };
        let m = solve_laplace(&g, &spec, 2e-6, &relax).unwrap();
        assert!(m.phi.iter().all(|v| (v - 0.7).abs() < 1e-6));
    }

    #[test]
    fn superposition_of_electrodes() {
        let (g, spec, relax) = small();
        let g = g.with_voltages(1.0, 1.0);
        let both = solve_laplace(&g, &spec, 2e-6, &relax).unwrap();
        let p = solve_laplace(&g.with_voltages(1.0, 0.0), &spec, 2e-6, &relax).unwrap();
        let q = solve_laplace(&g.with_voltages(0.0, 1.0), &spec, 2e-6, &relax).unwrap();
        for n in 0..both.phi.len() {
            assert!((both.phi[n] - p.phi[n] - q.phi[n]).abs() < 1e-7);
        }
    }

    #[test]
    fn voltage_swap_negates() {
        let (g, spec, relax) = small();
        let a = solve_laplace(&g, &spec, 2e-6, &relax).unwrap();
        let b = solve_laplace(&g.with_voltages(-1.0, 1.0), &spec, 2e-6, &relax).unwrap();
        for n in 0..a.phi.len() {
            assert!((a.phi[n] + b.phi[n]).abs() < 1e-7);
        }
        let (ax, ay) = a.mirror_asymmetry();
        assert!(ax < 1e-7 && ay < 1e-7);
    }

    #[test]
    fn sor_and_cg_agree() {
        let (g, spec, relax) = small();
        let cg = solve_laplace(&g, &spec, 2e-6, &relax).unwrap();
        let sor = solve_laplace(
            &g,
            &spec,
            2e-6,
            &RelaxationSettings {
                method: Method::Sor,
                ..relax
            },
        )
        .unwrap();
        for n in 0..cg.phi.len() {
            assert!((cg.phi[n] - sor.phi[n]).abs() < 1e-7);
        }
        // Residual times h^2 is the size of the remaining node correction.
        let h2 = spec.fine * spec.fine;
        assert!(
            cg.residual * h2 < 1e-8 && sor.residual * h2 < 1e-8,
            "{} {}",
            cg.residual,
            sor.residual
        );
    }

    #[test]
    fn under_resolved_wire_is_rejected() {
        let (g, mut spec, relax) = small();
        spec.fine = 0.8e-6;
        assert!(matches!(
            solve_laplace(&g, &spec, 2e-6, &relax),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn iteration_cap_reports_residual() {
        let (g, spec, _) = small();
        let relax = RelaxationSettings {
            tol: 1e-14,
            max_sweeps: 3,
            ..Default::default()
        };
        match solve_laplace(&g, &spec, 2e-6, &relax) {
            Err(Error::SolverNonConvergence {
                iterations,
                residual,
                ..
            }) => {
                assert_eq!(iterations, 3);
                assert!(residual > 0.0);
            }
            other => panic!("{other:?}"),
        }
    }
}
