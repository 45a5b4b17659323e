//! Three-point Lagrange differences on a non-uniform 1D grid.
//!
//! The grid is described by its spacings `h[j] = p[j+1] - p[j]`. Every
//! formula is written on differences from the middle node, so constants give
//! exact zeros, and reflecting the data (reversing `f` and `h`) reproduces
//! first derivatives with exactly the opposite sign and second derivatives
//! bit-for-bit.

/// First derivative at every node. Needs at least three nodes.
pub fn first_derivative(f: &[f64], h: &[f64]) -> Vec<f64> {
    let m = f.len();
    debug_assert!(m >= 3 && h.len() == m - 1);
    let mut out = vec![0.0; m];
    for j in 1..m - 1 {
        out[j] = first_interior(f[j - 1], f[j], f[j + 1], h[j - 1], h[j]);
    }
    out[0] = first_left(f[0], f[1], f[2], h[0], h[1]);
    out[m - 1] = first_right(f[m - 3], f[m - 2], f[m - 1], h[m - 3], h[m - 2]);
    out
}

/// Second derivative at every node. Needs at least three nodes.
pub fn second_derivative(f: &[f64], h: &[f64]) -> Vec<f64> {
    let m = f.len();
    debug_assert!(m >= 3 && h.len() == m - 1);
    let mut out = vec![0.0; m];
    for j in 1..m - 1 {
        out[j] = second_at(f[j - 1], f[j], f[j + 1], h[j - 1], h[j]);
    }
    // A quadratic has one second derivative; the ends reuse the nearest interior fit.
    out[0] = second_at(f[0], f[1], f[2], h[0], h[1]);
    out[m - 1] = second_at(f[m - 3], f[m - 2], f[m - 1], h[m - 3], h[m - 2]);
    out
}

#[inline]
fn first_interior(fl: f64, fc: f64, fr: f64, hl: f64, hr: f64) -> f64 {
    let s = hl + hr;
    let wl = -hr / (hl * s);
    let wr = hl / (hr * s);
    wl * (fl - fc) + wr * (fr - fc)
}

#[inline]
fn second_at(fl: f64, fc: f64, fr: f64, hl: f64, hr: f64) -> f64 {
    let s = hl + hr;
    2.0 * ((fl - fc) / (hl * s) + (fr - fc) / (hr * s))
}

#[inline]
fn first_left(f0: f64, f1: f64, f2: f64, h0: f64, h1: f64) -> f64 {
    let s = h0 + h1;
    let w0 = -(2.0 * h0 + h1) / (h0 * s);
    let w2 = -h0 / (h1 * s);
    w0 * (f0 - f1) + w2 * (f2 - f1)
}

#[inline]
fn first_right(fa: f64, fb: f64, fe: f64, ha: f64, hb: f64) -> f64 {
    let s = hb + ha;
    let we = (2.0 * hb + ha) / (hb * s);
    let wa = hb / (ha * s);
    we * (fe - fb) + wa * (fa - fb)
}
