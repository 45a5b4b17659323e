//! Self-consistent closure of the ray system: amplitude transport along ray
//! tubes and the Wave Potential `W~ = -(alpha/2) * lap(R) / R` with its
//! derivative along the front.
//!
//! All derivatives are taken along the polyline through the alive rays of
//! one front, with three-point stencils on the actual (non-uniform) spacing.

use crate::beamcore::{FluxWeight, MediumSpec, WaveFront};
use crate::par::{self, Execution};
use crate::stencil;
use crate::{Error, Result, Vec2};

/// Rays whose amplitude drops below this fraction of the front maximum are
/// retired from the stencils.
pub const DEAD_AMPLITUDE: f64 = 1e-12;

/// Smallest front that supports the stencils.
pub const MIN_ALIVE: usize = 5;

/// Closure quantities, one entry per ray (zero for dead rays).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClosureDiagnostics {
    /// Dimensionless Wave Potential.
    pub w_tilde: Vec<f64>,
    /// `dW~/dsigma` along the front.
    pub grad_w: Vec<f64>,
    /// Longitudinal rate `dW~/ds` along each ray, from consecutive fronts.
    /// Reported only; never fed back into the force.
    pub long_w: Vec<f64>,
}

/// Speed factor `s` of the tube-flux relation for one ray.
pub fn flux_speed(weight: FluxWeight, kappa: Vec2, xi: Vec2, medium: &MediumSpec) -> f64 {
    match weight {
        FluxWeight::Kinetic => kappa.norm(),
        FluxWeight::Medium => medium.eff_index_sq(xi).max(0.0).sqrt(),
        FluxWeight::Unit => 1.0,
    }
}

#[inline]
fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Recompute `segments` and `sigma` from the ray positions.
///
/// A segment is signed negative when it has flipped relative to `reference`
/// (the previous positions of the same rays) or, without a reference, when it
/// runs against the launch orientation (`segment x kappa > 0`). Returns the
/// first ray at which a flip occurred.
pub fn update_geometry(front: &mut WaveFront, reference: Option<&[Vec2]>) -> Option<usize> {
    let alive = front.alive_indices();
    let mut segments = Vec::with_capacity(alive.len().saturating_sub(1));
    let mut flipped = None;
    for pair in alive.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let seg = front.rays[b].xi - front.rays[a].xi;
        let len = seg.norm();
        let orientation = match reference {
            Some(prev) => seg.dot(&(prev[b] - prev[a])),
            None => {
                let k = front.rays[a].kappa + front.rays[b].kappa;
                cross(seg, k)
            }
        };
        if orientation > 0.0 && len > 0.0 {
            segments.push(len);
        } else {
            flipped.get_or_insert(b);
            segments.push(-len);
        }
    }
    let mut sigma = vec![f64::NAN; front.len()];
    if let Some(&first) = alive.first() {
        sigma[first] = 0.0;
        let mut s = 0.0;
        for (pair, seg) in alive.windows(2).zip(&segments) {
            s += seg;
            sigma[pair[1]] = s;
        }
    }
    front.segments = segments;
    front.sigma = sigma;
    flipped
}

/// Cell width of each alive ray: half the distance to its two neighbours,
/// the full one-sided distance at the ends. Indexed like `alive`.
fn cell_widths(segments: &[f64]) -> Vec<f64> {
    let m = segments.len() + 1;
    let mut w = vec![0.0; m];
    if m < 2 {
        return w;
    }
    w[0] = segments[0];
    w[m - 1] = segments[m - 2];
    for j in 1..m - 1 {
        w[j] = 0.5 * (segments[j - 1] + segments[j]);
    }
    w
}

fn check_monotone(front: &WaveFront, alive: &[usize]) -> Result<()> {
    for (pair, seg) in alive.windows(2).zip(&front.segments) {
        if !(*seg > 0.0) {
            return Err(Error::CausticEncountered {
                ray: pair[1],
                tau: front.rays[pair[1]].tau,
            });
        }
    }
    Ok(())
}

/// Tube fluxes `R^2 * s * width` for a front whose amplitudes are current.
pub fn tube_fluxes(front: &WaveFront, medium: &MediumSpec) -> Result<Vec<f64>> {
    let alive = front.alive_indices();
    check_monotone(front, &alive)?;
    let widths = cell_widths(&front.segments);
    let mut flux = vec![0.0; front.len()];
    for (j, &i) in alive.iter().enumerate() {
        let r = &front.rays[i];
        let s = flux_speed(front.flux_weight, r.kappa, r.xi, medium);
        flux[i] = front.amp[i] * front.amp[i] * s * widths[j];
    }
    Ok(flux)
}

/// Re-derive amplitudes from the conserved tube fluxes:
/// `R_i = sqrt(flux_i / (s_i * width_i))`.
pub fn transport_amplitude(front: &WaveFront, medium: &MediumSpec) -> Result<WaveFront> {
    let mut out = front.clone();
    let alive = front.alive_indices();
    check_monotone(front, &alive)?;
    let widths = cell_widths(&front.segments);
    for (j, &i) in alive.iter().enumerate() {
        let r = &front.rays[i];
        let s = flux_speed(front.flux_weight, r.kappa, r.xi, medium);
        out.amp[i] = (front.tube_flux[i] / (s * widths[j])).sqrt();
    }
    Ok(out)
}

/// Like [`transport_amplitude`], but tolerant of folded fronts: widths are
/// taken unsigned and rays with a degenerate cell keep their previous
/// amplitude. Used when the rays are not coupled and caustics are allowed.
pub fn transport_amplitude_lenient(front: &mut WaveFront, medium: &MediumSpec) {
    let alive = front.alive_indices();
    let widths = cell_widths(&front.segments);
    for (j, &i) in alive.iter().enumerate() {
        let r = &front.rays[i];
        let s = flux_speed(front.flux_weight, r.kappa, r.xi, medium);
        let d = s * widths[j].abs();
        if d > 0.0 {
            front.amp[i] = (front.tube_flux[i] / d).sqrt();
        }
    }
}

/// Retire rays whose amplitude fell below [`DEAD_AMPLITUDE`] of the maximum.
/// Returns how many rays were retired.
pub fn retire_dim_rays(front: &mut WaveFront) -> usize {
    let peak = front
        .rays
        .iter()
        .zip(&front.amp)
        .filter(|(r, _)| r.alive)
        .map(|(_, &a)| a)
        .fold(0.0, f64::max);
    let cutoff = DEAD_AMPLITUDE * peak;
    let mut retired = 0;
    for (r, &a) in front.rays.iter_mut().zip(&front.amp) {
        if r.alive && !(a >= cutoff && a > 0.0) {
            r.alive = false;
            retired += 1;
        }
    }
    retired
}

fn alive_for_stencil(front: &WaveFront) -> Result<Vec<usize>> {
    let alive: Vec<usize> = front
        .alive_indices()
        .into_iter()
        .filter(|&i| front.amp[i] > 0.0)
        .collect();
    if alive.len() < MIN_ALIVE {
        return Err(Error::TooFewRays { alive: alive.len() });
    }
    Ok(alive)
}

/// Segment lengths between the given rays, reusing the front's cached
/// segments when the set matches the alive set.
fn spacings(front: &WaveFront, rays: &[usize]) -> Vec<f64> {
    if front.segments.len() + 1 == rays.len() {
        front.segments.clone()
    } else {
        rays.windows(2)
            .map(|p| (front.rays[p[1]].xi - front.rays[p[0]].xi).norm())
            .collect()
    }
}

/// `W~_i = -(alpha/2) [ (ln R)'' + ((ln R)')^2 ]` along the front.
pub fn wave_potential(front: &WaveFront) -> Result<ClosureDiagnostics> {
    let alive = alive_for_stencil(front)?;
    let h = spacings(front, &alive);
    let ln_r: Vec<f64> = alive.iter().map(|&i| front.amp[i].ln()).collect();
    let d1 = stencil::first_derivative(&ln_r, &h);
    let d2 = stencil::second_derivative(&ln_r, &h);
    let mut w_tilde = vec![0.0; front.len()];
    for (j, &i) in alive.iter().enumerate() {
        w_tilde[i] = -0.5 * front.alpha * (d2[j] + d1[j] * d1[j]);
    }
    Ok(ClosureDiagnostics {
        w_tilde,
        grad_w: vec![0.0; front.len()],
        long_w: vec![0.0; front.len()],
    })
}

/// Fill `grad_w` with `dW~/dsigma` by differencing `w_tilde` along the front.
pub fn wave_potential_gradient(
    front: &WaveFront,
    diag: ClosureDiagnostics,
) -> Result<ClosureDiagnostics> {
    let alive = alive_for_stencil(front)?;
    let h = spacings(front, &alive);
    let w: Vec<f64> = alive.iter().map(|&i| diag.w_tilde[i]).collect();
    let d1 = stencil::first_derivative(&w, &h);
    let mut grad_w = vec![0.0; front.len()];
    for (j, &i) in alive.iter().enumerate() {
        grad_w[i] = d1[j];
    }
    Ok(ClosureDiagnostics { grad_w, ..diag })
}

/// Both closure quantities for a front with current amplitudes.
pub fn evaluate(front: &WaveFront) -> Result<ClosureDiagnostics> {
    wave_potential_gradient(front, wave_potential(front)?)
}

/// Unit tangent of the front at each ray, oriented in ray order. Dead rays
/// get a zero vector.
pub fn tangents(front: &WaveFront, exec: Execution) -> Vec<Vec2> {
    let alive = front.alive_indices();
    let m = alive.len();
    let mut out = vec![Vec2::zeros(); front.len()];
    if m < 2 {
        return out;
    }
    let t = par::map_indexed(exec, m, |j| {
        let lo = alive[j.saturating_sub(1)];
        let hi = alive[(j + 1).min(m - 1)];
        let d = front.rays[hi].xi - front.rays[lo].xi;
        let n = d.norm();
        if n > 0.0 {
            d / n
        } else {
            Vec2::zeros()
        }
    });
    for (j, &i) in alive.iter().enumerate() {
        out[i] = t[j];
    }
    out
}

/// Wave Potential and its force derived from one discrete energy.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FisherClosure {
    /// `g_i`, the force being `-g_i t_i`; tends to `dW~/dsigma`.
    pub pull: Vec<f64>,
    /// `dE/dm_i`, the Wave Potential consistent with `pull`; tends to `W~`.
    pub potential: Vec<f64>,
}

/// Wave Potential force as the gradient of the discrete Fisher energy
/// `E = (alpha/2) sum_k R_k R_{k+1} (ln R_{k+1} - ln R_k)^2 / l_k` of the
/// front, with every `R` tied to the ray positions through the conserved tube
/// fluxes.
///
/// Returns, per ray, `g_i = -(dE/dxi_i . t_i) / m_i` with `m_i = R_i^2 w_i`,
/// which tends to `dW~/dsigma` as the rays get denser. Unlike differencing
/// `W~` directly, the ray system driven by this force stays Hamiltonian, so
/// short-wavelength ripples along the front cannot grow.
///
/// The front is a truncated sample of a wider beam, so it is padded with two
/// ghost rays per side (positions and `ln R` extrapolated linearly) that supply the outermost rays with the neighbours they
/// would have had.
pub fn fisher_closure(front: &WaveFront, medium: &MediumSpec, tangents: &[Vec2]) -> Result<FisherClosure> {
    const G: usize = 2;
    let alive = alive_for_stencil(front)?;
    let m = alive.len();
    let real: Vec<Vec2> = alive.iter().map(|&i| front.rays[i].xi).collect();
    let real_len: Vec<f64> = real.windows(2).map(|p| (p[1] - p[0]).norm()).collect();
    if let Some(k) = real_len.iter().position(|&l| !(l > 0.0)) {
        let ray = alive[k + 1];
        return Err(Error::CausticEncountered { ray, tau: front.rays[ray].tau });
    }
    let real_w = cell_widths(&real_len);
    let speed: Vec<f64> = alive
        .iter()
        .map(|&i| {
            let r = &front.rays[i];
            flux_speed(front.flux_weight, r.kappa, r.xi, medium)
        })
        .collect();
    let real_ln: Vec<f64> = (0..m)
        .map(|j| 0.5 * (front.tube_flux[alive[j]] / (speed[j] * real_w[j])).ln())
        .collect();

    let mut pos = vec![Vec2::zeros(); m + 2 * G];
    let mut ln_a = vec![0.0; m + 2 * G];
    pos[G..G + m].copy_from_slice(&real);
    ln_a[G..G + m].copy_from_slice(&real_ln);
    for g in (0..G).rev() {
        pos[g] = pos[g + 1] * 2.0 - pos[g + 2];
        ln_a[g] = 2.0 * ln_a[g + 1] - ln_a[g + 2];
    }
    for g in G + m..m + 2 * G {
        pos[g] = pos[g - 1] * 2.0 - pos[g - 2];
        ln_a[g] = 2.0 * ln_a[g - 1] - ln_a[g - 2];
    }
    let n = pos.len();
    let d: Vec<Vec2> = pos.windows(2).map(|p| p[1] - p[0]).collect();
    let len: Vec<f64> = d.iter().map(|v| v.norm()).collect();
    let alpha = front.alpha;

    // Per segment: e_k = (alpha/2) P L^2 / l with P = R_k R_{k+1},
    // L = ln R_{k+1} - ln R_k, and c_k = dE/dL / 1 = alpha P L / l.
    let cell: Vec<(f64, f64)> = (0..n - 1)
        .map(|k| {
            let dl = ln_a[k + 1] - ln_a[k];
            let p = (ln_a[k] + ln_a[k + 1]).exp();
            (0.5 * alpha * p * dl * dl / len[k], alpha * p * dl / len[k])
        })
        .collect();
    // dE/dw_j through ln R_j = ln(flux / (s w)) / 2, for every padded ray
    // that has segments on both sides.
    let mut de_dw = vec![0.0; n];
    for j in 1..n - 1 {
        let de_dln = (cell[j - 1].0 + cell[j - 1].1) + (cell[j].0 - cell[j].1);
        de_dw[j] = -de_dln / (len[j - 1] + len[j]);
    }
    // dE/dl_k, direct and through the two cell widths that contain segment k
    let de_dl: Vec<f64> = (0..n - 1)
        .map(|k| -cell[k].0 / len[k] + 0.5 * (de_dw[k] + de_dw[k + 1]))
        .collect();
    let vary_speed = front.flux_weight == FluxWeight::Medium && !medium.is_vacuum();

    let mut pull = vec![0.0; front.len()];
    let mut potential = vec![0.0; front.len()];
    for j in 0..m {
        let q = j + G;
        let de_dln = (cell[q - 1].0 + cell[q - 1].1) + (cell[q].0 - cell[q].1);
        let mut force = d[q] * (de_dl[q] / len[q]) - d[q - 1] * (de_dl[q - 1] / len[q - 1]);
        if vary_speed {
            // d(ln R)/dxi = -grad(s) / (2 s), grad s = grad(n~^2) / (2 s)
            let grad_s = medium.grad_eff_index_sq(real[j]) / (2.0 * speed[j]);
            force += grad_s * (0.5 * de_dln / speed[j]);
        }
        let i = alive[j];
        let mass = (2.0 * real_ln[j]).exp() * real_w[j];
        pull[i] = -force.dot(&tangents[i]) / mass;
        potential[i] = 0.5 * de_dln / mass;
    }
    Ok(FisherClosure { pull, potential })
}

/// The Wave Potential the ray dynamics conserves `D~` with: the `potential`
/// of [`fisher_closure`], evaluated from the front's current amplitudes.
pub fn dynamic_potential(front: &WaveFront, medium: &MediumSpec) -> Result<Vec<f64>> {
    let mut f = front.clone();
    f.tube_flux = tube_fluxes(&f, medium)?;
    let t = tangents(&f, Execution::Sequential);
    Ok(fisher_closure(&f, medium, &t)?.potential)
}
