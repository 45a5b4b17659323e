use rustfft::num_complex::Complex64;

use crate::beamcore::rayleigh_range;

/// Half-width `sqrt(1 + (z/zR)^2)` of a waist-launched paraxial Gaussian beam,
/// with `zR = pi / epsilon` in launch half-widths.
pub fn paraxial_envelope(z: f64, epsilon: f64) -> f64 {
    let zn = z / rayleigh_range(epsilon);
    (1.0 + zn * zn).sqrt()
}

/// Closed-form 2D paraxial Gaussian beam `exp(-x^2)` at `z = 0`:
/// `u = q^(-1/2) exp(-x^2 / q)`, `q = 1 + i z / zR`.
pub fn gaussian_beam(x: f64, z: f64, epsilon: f64) -> Complex64 {
    let q = Complex64::new(1.0, z / rayleigh_range(epsilon));
    q.sqrt().inv() * (-(x * x) / q).exp()
}
