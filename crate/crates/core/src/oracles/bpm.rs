//! Split-step Fourier solution of the paraxial Helmholtz equation
//!
//! ```text
//! du/dz = (i / 2k) d2u/dx2 + (i k / 2) (n~^2 - 1) u,    k = 1 / sqrt(alpha)
//! ```
//!
//! marched with Strang splitting: half index screen, exact spectral free
//! propagation, half index screen. The scheme is unitary in lossless media.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::beamcore::{LaunchConfig, MediumSpec};
use crate::par::{self, Execution};
use crate::{Error, Result, Vec2};

/// Fraction of the spectrum (by |q|) treated as the band edge.
const BAND_EDGE: f64 = 0.1;
/// Largest tolerated energy fraction in the band edge.
const ALIASING_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct BpmGrid {
    /// Transverse samples; a power of two keeps the FFT fast.
    pub n_x: usize,
    /// The grid spans `[-half_width, half_width)`.
    pub half_width: f64,
    pub dz: f64,
    pub z_max: f64,
    /// Planes to store besides `z = 0` and `z_max`.
    pub planes: Vec<f64>,
}

impl Default for BpmGrid {
    fn default() -> Self {
        BpmGrid {
            n_x: 1024,
            half_width: 25.6,
            dz: 0.05,
            z_max: 0.0,
            planes: Vec::new(),
        }
    }
}

/// Complex field on a uniform transverse grid at a set of stored planes.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    /// One row per stored plane.
    pub u: Vec<Vec<Complex64>>,
    pub dx: f64,
    pub dz: f64,
    pub alpha: f64,
}

impl FieldGrid {
    /// Index of the stored plane closest to `z`.
    pub fn plane_index(&self, z: f64) -> usize {
        self.z
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z).abs().total_cmp(&(b.1 - z).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    pub fn intensity(&self, plane: usize) -> Vec<f64> {
        self.u[plane].iter().map(|c| c.norm_sqr()).collect()
    }

    /// `sum |u|^2 dx`, in grid order.
    pub fn power(&self, plane: usize) -> f64 {
        self.u[plane].iter().map(|c| c.norm_sqr()).sum::<f64>() * self.dx
    }

    /// `2 sqrt(<x^2> - <x>^2)` of the intensity; equals `w` for `exp(-x^2/w^2)`.
    pub fn width(&self, plane: usize) -> f64 {
        second_moment_width(&self.x, &self.intensity(plane))
    }
}

pub(crate) fn second_moment_width(x: &[f64], intensity: &[f64]) -> f64 {
    let total: f64 = intensity.iter().sum();
    let mean = x.iter().zip(intensity).map(|(x, i)| x * i).sum::<f64>() / total;
    let var = x
        .iter()
        .zip(intensity)
        .map(|(x, i)| (x - mean) * (x - mean) * i)
        .sum::<f64>()
        / total;
    2.0 * var.sqrt()
}

fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let l = n as f64 * dx;
    (0..n)
        .map(|j| {
            let m = if j < n.div_ceil(2) { j as f64 } else { j as f64 - n as f64 };
            2.0 * PI * m / l
        })
        .collect()
}

fn band_edge_fraction(spectrum: &[Complex64], q: &[f64]) -> f64 {
    let q_max = q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = (1.0 - BAND_EDGE) * q_max;
    let total: f64 = spectrum.iter().map(|c| c.norm_sqr()).sum();
    let high: f64 = spectrum
        .iter()
        .zip(q)
        .filter(|(_, q)| q.abs() > edge)
        .map(|(c, _)| c.norm_sqr())
        .sum();
    if total > 0.0 {
        high / total
    } else {
        0.0
    }
}

/// March the launch profile through `medium` along +z.
pub fn bpm_solve(launch: &LaunchConfig, medium: &MediumSpec, grid: &BpmGrid) -> Result<FieldGrid> {
    bpm_solve_with(launch, medium, grid, Execution::default())
}

pub fn bpm_solve_with(
    launch: &LaunchConfig,
    medium: &MediumSpec,
    grid: &BpmGrid,
    exec: Execution,
) -> Result<FieldGrid> {
    launch.validate()?;
    if grid.n_x < 8 || !(grid.half_width > 0.0) || !(grid.dz > 0.0) || !(grid.z_max >= 0.0) {
        return Err(Error::InvalidConfig(format!("unusable BPM grid {grid:?}")));
    }
    let n = grid.n_x;
    let dx = 2.0 * grid.half_width / n as f64;
    let x: Vec<f64> = (0..n).map(|j| -grid.half_width + j as f64 * dx).collect();
    let alpha = launch.alpha();
    let k = 1.0 / alpha.sqrt();

    let samples: Vec<f64> = x.iter().map(|&xi| launch.profile.sample(xi)).collect();
    if let Some((j, &r)) = samples.iter().enumerate().find(|(_, &r)| r < 0.0 || r.is_nan()) {
        return Err(Error::NegativeAmplitude { position: x[j], value: r });
    }
    let peak = samples.iter().copied().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::InvalidConfig("launch profile vanishes on the BPM grid".into()));
    }
    let mut u: Vec<Complex64> = samples
        .iter()
        .map(|&r| Complex64::new(r / peak, 0.0))
        .collect();

    let q = wavenumbers(n, dx);
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let scale = 1.0 / n as f64;

    let mut spectrum = u.clone();
    forward.process(&mut spectrum);
    let fraction = band_edge_fraction(&spectrum, &q);
    if fraction > ALIASING_LIMIT {
        return Err(Error::Aliasing { fraction });
    }

    let steps = (grid.z_max / grid.dz - 1e-9).ceil().max(0.0) as usize;
    let dz = if steps > 0 { grid.z_max / steps as f64 } else { grid.dz };
    let free: Vec<Complex64> = q
        .iter()
        .map(|&qj| Complex64::from_polar(1.0, -qj * qj * dz / (2.0 * k)))
        .collect();
    let vacuum = medium.is_vacuum();
    let screen = |z_mid: f64| -> Vec<Complex64> {
        par::map_indexed(exec, n, |j| {
            let n2 = medium.eff_index_sq(Vec2::new(x[j], z_mid));
            Complex64::from_polar(1.0, 0.5 * k * (n2 - 1.0) * 0.5 * dz)
        })
    };

    let mut wanted: Vec<usize> = grid
        .planes
        .iter()
        .filter(|&&z| z >= 0.0 && z <= grid.z_max)
        .map(|&z| (z / dz).round() as usize)
        .collect();
    wanted.push(steps);
    wanted.sort_unstable();
    wanted.dedup();

    let mut planes_z = vec![0.0];
    let mut planes_u = vec![u.clone()];
    for s in 1..=steps {
        let z0 = (s - 1) as f64 * dz;
        if !vacuum {
            let half = screen(z0 + 0.25 * dz);
            u.iter_mut().zip(&half).for_each(|(a, b)| *a *= b);
        }
        forward.process(&mut u);
        u.iter_mut().zip(&free).for_each(|(a, b)| *a *= b * scale);
        inverse.process(&mut u);
        if !vacuum {
            let half = screen(z0 + 0.75 * dz);
            u.iter_mut().zip(&half).for_each(|(a, b)| *a *= b);
        }
        if wanted.binary_search(&s).is_ok() {
            let mut spec = u.clone();
            forward.process(&mut spec);
            let fraction = band_edge_fraction(&spec, &q);
            if fraction > ALIASING_LIMIT {
                return Err(Error::Aliasing { fraction });
            }
            planes_z.push(s as f64 * dz);
            planes_u.push(u.clone());
        }
    }
    Ok(FieldGrid {
        x,
        z: planes_z,
        u: planes_u,
        dx,
        dz,
        alpha,
    })
}
