//! Symplectic time stepping of the coupled ray system.
//!
//! One step is kick-drift-kick leapfrog in the dimensionless time `tau`:
//!
//! ```text
//! kappa_a  = kappa_n + (h/2) F(x_n)
//! x_{n+1}  = x_n + h kappa_a
//! kappa_b  = kappa_a + (h/2) F(x_{n+1})
//! ```
//!
//! with `F = grad(n~^2)/2 - (dW~/dsigma) t`, `t` the unit tangent of the
//! front and `dW~/dsigma` taken as the gradient of the front's discrete
//! Fisher energy ([`closure::fisher_closure`]). The Wave Potential is
//! re-closed from the transported amplitudes between the kicks. The tangential force leaves `|kappa|` nearly untouched,
//! so the energy exchange with `W~` along each ray is restored by a symmetric
//! projection onto `(kappa^2 - n~^2)/2 + W~ = const` per ray: the start
//! momentum is scaled by `1 + mu`, the end momentum by `1 / (1 - mu)`, with
//! `mu` solved so that the constraint holds at the new front. Both factors
//! share `mu`, which keeps the map symmetric and hence time-reversible.
//! In equal-phase stepping the per-ray `h` is solved in the same loop.

use crate::beamcore::{MediumSpec, PlaneCut, Termination, TrajectoryRecord, WaveFront};
use crate::closure::{self, ClosureDiagnostics, FisherClosure};
use crate::par::{self, Execution};
use crate::{Error, Result, Vec2};

/// Cap on projection iterations per step.
const MAX_PROJECTION_ITERS: usize = 30;
/// Projection converges when no `mu` (or relative `h`) moves by more than
/// this. `|kappa|` is only known to an ulp, so the iteration may instead
/// jitter at about `1e-16`; it then stops once the change stops shrinking.
const PROJECTION_TOL: f64 = 4.0 * f64::EPSILON;
/// Largest rescaling `|mu|` the projection applies in one step.
const MAX_PROJECTION: f64 = 1e-2;
/// Guard against runaway `max_z` runs.
const MAX_STEPS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stepping {
    /// All rays share `d_tau`; fronts are equal-time ensembles.
    #[default]
    EqualTime,
    /// Each ray takes `2 d_tau / (kappa_n^2 + kappa_{n+1}^2)`, so every ray
    /// advances the same phase and fronts stay on wavefronts.
    EqualPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Longitudinal {
    /// Enforce the per-ray structural constraint by symmetric projection.
    #[default]
    Projected,
    /// Tangential force only; `W~` changes along rays are reported, not applied.
    Off,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub d_tau: f64,
    pub max_tau: Option<f64>,
    /// Stop once every alive ray has `z >= max_z`.
    pub max_z: Option<f64>,
    /// Off reduces the system to geometrical optics / classical mechanics.
    pub wave_potential_on: bool,
    pub output_every: usize,
    /// Integrate backwards: all wave vectors are negated at the start.
    pub reverse: bool,
    pub stepping: Stepping,
    pub longitudinal: Longitudinal,
    /// Transverse planes `z = const` at which ray crossings are recorded.
    pub planes: Vec<f64>,
    pub execution: Execution,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            d_tau: 1e-2,
            max_tau: None,
            max_z: None,
            wave_potential_on: true,
            output_every: 10,
            reverse: false,
            stepping: Stepping::EqualTime,
            longitudinal: Longitudinal::Projected,
            planes: Vec::new(),
            execution: Execution::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.d_tau > 0.0 && self.d_tau.is_finite()) {
            return Err(Error::InvalidConfig(format!("d_tau = {} must be > 0", self.d_tau)));
        }
        if self.output_every < 1 {
            return Err(Error::InvalidConfig("output_every must be >= 1".into()));
        }
        if let Some(t) = self.max_tau {
            if !(t >= 0.0) {
                return Err(Error::InvalidConfig(format!("max_tau = {t} must be >= 0")));
            }
        }
        Ok(())
    }
}

/// Closure state at one set of positions.
#[derive(Debug, Clone)]
struct Closed {
    diag: ClosureDiagnostics,
    /// Wave Potential consistent with `force`, used for the structural constraint.
    potential: Vec<f64>,
    force: Vec<Vec2>,
}

/// Bring a front's amplitude and closure up to date with its positions.
fn close(
    front: &mut WaveFront,
    reference: Option<&[Vec2]>,
    transport: bool,
    medium: &MediumSpec,
    cfg: &RunConfig,
) -> Result<Closed> {
    let n = front.len();
    let flipped = closure::update_geometry(front, reference);
    let diag = if cfg.wave_potential_on {
        if let Some(ray) = flipped {
            return Err(Error::CausticEncountered {
                ray,
                tau: front.rays[ray].tau,
            });
        }
        if transport {
            *front = closure::transport_amplitude(front, medium)?;
            if closure::retire_dim_rays(front) > 0 {
                for (r, a) in front.rays.iter().zip(front.amp.iter_mut()) {
                    if !r.alive {
                        *a = 0.0;
                    }
                }
                closure::update_geometry(front, None);
            }
        }
        closure::evaluate(front)?
    } else {
        if transport {
            closure::transport_amplitude_lenient(front, medium);
        }
        ClosureDiagnostics {
            w_tilde: vec![0.0; n],
            grad_w: vec![0.0; n],
            long_w: vec![0.0; n],
        }
    };
    let (tangents, fisher) = if cfg.wave_potential_on {
        let t = closure::tangents(front, cfg.execution);
        let f = closure::fisher_closure(front, medium, &t)?;
        (t, f)
    } else {
        (Vec::new(), FisherClosure { pull: vec![0.0; n], potential: vec![0.0; n] })
    };
    let vacuum = medium.is_vacuum();
    let force = par::map_indexed(cfg.execution, n, |i| {
        let ray = &front.rays[i];
        let mut f = if vacuum {
            Vec2::zeros()
        } else {
            medium.grad_eff_index_sq(ray.xi) * 0.5
        };
        if cfg.wave_potential_on && ray.alive {
            f -= tangents[i] * fisher.pull[i];
        }
        f
    });
    Ok(Closed { diag, potential: fisher.potential, force })
}

/// `D~ = (kappa^2 - n~^2)/2 + W~` for each ray, with `W~` the potential the
/// force derives from, evaluated from the front's current amplitudes.
pub fn hamiltonian_residual(front: &WaveFront, medium: &MediumSpec) -> Result<Vec<f64>> {
    let w_tilde = closure::dynamic_potential(front, medium)?;
    Ok(residual_with(front, medium, &w_tilde))
}

fn residual_with(front: &WaveFront, medium: &MediumSpec, w_tilde: &[f64]) -> Vec<f64> {
    front
        .rays
        .iter()
        .zip(w_tilde)
        .map(|(r, &w)| 0.5 * (r.kappa.norm_squared() - medium.eff_index_sq(r.xi)) + w)
        .collect()
}

/// Integration state carried between steps.
struct Stepper<'a> {
    medium: &'a MediumSpec,
    cfg: &'a RunConfig,
    front: WaveFront,
    closed: Closed,
    /// Conserved value of `D~` on each ray.
    invariant: Vec<f64>,
    phase_sign: f64,
    step: usize,
}

impl<'a> Stepper<'a> {
    fn new(launch: &WaveFront, medium: &'a MediumSpec, cfg: &'a RunConfig) -> Result<Self> {
        cfg.validate()?;
        let mut front = launch.clone();
        if cfg.reverse {
            for r in &mut front.rays {
                r.kappa = -r.kappa;
            }
        }
        if !cfg.wave_potential_on {
            // The classical limit starts from the classical dispersion relation.
            for r in &mut front.rays {
                let n2 = medium.eff_index_sq(r.xi);
                let k = r.kappa.norm();
                if n2 > 0.0 && k > 0.0 && k * k != n2 {
                    r.kappa = (r.kappa / k) * n2.sqrt();
                }
            }
        }
        // Orientation is judged against the given positions: a reversed
        // front runs against its own launch orientation.
        let x0 = front.positions();
        let closed = close(&mut front, Some(&x0), false, medium, cfg)?;
        let invariant = residual_with(&front, medium, &closed.potential);
        Ok(Stepper {
            medium,
            cfg,
            front,
            closed,
            invariant,
            phase_sign: if cfg.reverse { -1.0 } else { 1.0 },
            step: 0,
        })
    }

    fn residual(&self) -> Vec<f64> {
        residual_with(&self.front, self.medium, &self.closed.potential)
    }

    fn advance(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let exec = cfg.execution;
        let n = self.front.len();
        let x0 = self.front.positions();
        let k0: Vec<Vec2> = self.front.rays.iter().map(|r| r.kappa).collect();
        let f0 = &self.closed.force;
        let equal_phase = cfg.stepping == Stepping::EqualPhase;
        // Equal phase: h_i = 2 d_tau / (|kappa_n|^2 + |kappa_{n+1}|^2), symmetric in
        // the two ends of the step and solved together with the projection.
        let phase_step = |k_end2: f64, i: usize| {
            let d = k0[i].norm_squared() + k_end2;
            if d > 0.0 {
                2.0 * cfg.d_tau / d
            } else {
                cfg.d_tau
            }
        };
        let mut hs: Vec<f64> = if equal_phase {
            (0..n).map(|i| phase_step(k0[i].norm_squared(), i)).collect()
        } else {
            vec![cfg.d_tau; n]
        };
        let project = cfg.longitudinal == Longitudinal::Projected;
        let mut mu = vec![0.0; n];
        let mut free = vec![false; n];

        let mut iter = 0;
        let mut last_change = f64::INFINITY;
        let (next, closed, ka, kb) = loop {
            iter += 1;
            let ka: Vec<Vec2> = par::map_indexed(exec, n, |i| {
                k0[i] * (1.0 + mu[i]) + f0[i] * (0.5 * hs[i])
            });
            let mut next = self.front.clone();
            for (i, r) in next.rays.iter_mut().enumerate() {
                r.xi = x0[i] + ka[i] * hs[i];
                r.kappa = ka[i];
            }
            let closed = close(&mut next, Some(&x0), true, self.medium, cfg)?;
            let kb: Vec<Vec2> = par::map_indexed(exec, n, |i| ka[i] + closed.force[i] * (0.5 * hs[i]));
            if (!project && !equal_phase) || iter >= MAX_PROJECTION_ITERS {
                break (next, closed, ka, kb);
            }
            let updated: Vec<f64> = if project {
                let target: Vec<Option<f64>> = par::map_indexed(exec, n, |i| {
                    let s2 = self.medium.eff_index_sq(next.rays[i].xi) - 2.0 * closed.potential[i]
                        + 2.0 * self.invariant[i];
                    let kn = k0[i].norm();
                    if free[i] || !(s2 > 0.0) || !(kn > 0.0) {
                        return None;
                    }
                    let s = s2.sqrt();
                    let m = mu[i] - (kb[i].norm() - s * (1.0 - mu[i])) / (kn + s);
                    (m.abs() <= MAX_PROJECTION).then_some(m)
                });
                // A ray whose constraint cannot be met by a small rescaling is at
                // a turning point; it moves unconstrained for this step.
                target
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        t.unwrap_or_else(|| {
                            free[i] = true;
                            0.0
                        })
                    })
                    .collect()
            } else {
                mu.clone()
            };
            let mut change = updated
                .iter()
                .zip(&mu)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let mut h_new = None;
            if equal_phase {
                let h: Vec<f64> = (0..n)
                    .map(|i| phase_step((kb[i] / (1.0 - updated[i])).norm_squared(), i))
                    .collect();
                change = h
                    .iter()
                    .zip(&hs)
                    .map(|(a, b)| (a - b).abs() / b)
                    .fold(change, f64::max);
                h_new = Some(h);
            }
            // Past a few iterations the update only jitters at the roundoff floor.
            if change <= PROJECTION_TOL || (iter > 10 && change >= last_change) {
                break (next, closed, ka, kb);
            }
            last_change = change;
            if let Some(h) = h_new {
                hs = h;
            }
            mu = updated;
        };

        let mut next = next;
        let step = self.step + 1;
        for (i, r) in next.rays.iter_mut().enumerate() {
            r.kappa = kb[i] / (1.0 - mu[i]);
            r.tau += self.phase_sign * hs[i];
            r.phase += self.phase_sign * hs[i] * ka[i].norm_squared();
            if !(r.xi.x.is_finite() && r.xi.y.is_finite() && r.kappa.x.is_finite() && r.kappa.y.is_finite())
            {
                return Err(Error::NonFinite { ray: i, step });
            }
        }
        let mut closed = closed;
        closed.diag.long_w = (0..n)
            .map(|i| {
                let ds = hs[i] * ka[i].norm();
                if ds > 0.0 {
                    (closed.diag.w_tilde[i] - self.closed.diag.w_tilde[i]) / ds
                } else {
                    0.0
                }
            })
            .collect();
        if free.iter().any(|&f| f) {
            let res = residual_with(&next, self.medium, &closed.potential);
            for i in (0..n).filter(|&i| free[i]) {
                self.invariant[i] = res[i];
            }
        }
        self.front = next;
        self.closed = closed;
        self.step = step;
        Ok(())
    }
}

/// Advance a front by one step. The per-ray conserved value of `D~` is taken
/// from the front as given.
pub fn step_front(front: &WaveFront, medium: &MediumSpec, cfg: &RunConfig) -> Result<WaveFront> {
    let mut stepper = Stepper::new(front, medium, cfg)?;
    stepper.advance()?;
    let mut out = stepper.front;
    if cfg.reverse {
        for r in &mut out.rays {
            r.kappa = -r.kappa;
        }
    }
    Ok(out)
}

/// Tracks per-ray crossings of one plane.
struct PlaneTracker {
    cut: PlaneCut,
}

impl PlaneTracker {
    fn new(z: f64, n: usize) -> Self {
        PlaneTracker {
            cut: PlaneCut {
                z,
                x: vec![f64::NAN; n],
                amp: vec![f64::NAN; n],
                intensity: vec![f64::NAN; n],
            },
        }
    }

    fn observe(&mut self, before: &WaveFront, after: &WaveFront, medium: &MediumSpec) {
        let z = self.cut.z;
        for i in 0..before.len() {
            if self.cut.x[i].is_finite() {
                continue;
            }
            let (a, b) = (&before.rays[i], &after.rays[i]);
            if !(a.xi.y < z && b.xi.y >= z) && !(a.xi.y > z && b.xi.y <= z) {
                continue;
            }
            let h = b.tau - a.tau;
            let t = hermite_root(a.xi.y, b.xi.y, a.kappa.y * h, b.kappa.y * h, z);
            let x = hermite(a.xi.x, b.xi.x, a.kappa.x * h, b.kappa.x * h, t);
            let amp = before.amp[i] + t * (after.amp[i] - before.amp[i]);
            let speed = |f: &WaveFront| {
                let r = &f.rays[i];
                closure::flux_speed(f.flux_weight, r.kappa, r.xi, medium)
            };
            let s = speed(before) + t * (speed(after) - speed(before));
            self.cut.x[i] = x;
            self.cut.amp[i] = amp;
            self.cut.intensity[i] = amp * amp * s;
        }
    }
}

fn hermite(p0: f64, p1: f64, m0: f64, m1: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * p0
        + (t3 - 2.0 * t2 + t) * m0
        + (-2.0 * t3 + 3.0 * t2) * p1
        + (t3 - t2) * m1
}

/// Parameter in [0, 1] where the cubic Hermite segment reaches `target`.
fn hermite_root(p0: f64, p1: f64, m0: f64, m1: f64, target: f64) -> f64 {
    let mut t = ((target - p0) / (p1 - p0)).clamp(0.0, 1.0);
    for _ in 0..8 {
        let t2 = t * t;
        let f = hermite(p0, p1, m0, m1, t) - target;
        let df = (6.0 * t2 - 6.0 * t) * p0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * p1
            + (3.0 * t2 - 2.0 * t) * m1;
        if df == 0.0 {
            break;
        }
        let next = (t - f / df).clamp(0.0, 1.0);
        if next == t {
            break;
        }
        t = next;
    }
    t
}

fn finished(front: &WaveFront, start: &WaveFront, step: usize, cfg: &RunConfig) -> bool {
    let tau_done = cfg.max_tau.map(|max_tau| match cfg.stepping {
        Stepping::EqualTime => {
            let steps = (max_tau / cfg.d_tau - 1e-9).ceil().max(0.0) as usize;
            step >= steps
        }
        Stepping::EqualPhase => front
            .rays
            .iter()
            .zip(&start.rays)
            .filter(|(r, _)| r.alive)
            .all(|(r, r0)| (r.tau - r0.tau).abs() >= max_tau - 1e-9 * cfg.d_tau),
    });
    let z_done = cfg.max_z.map(|max_z| {
        let sign = if cfg.reverse { -1.0 } else { 1.0 };
        front
            .rays
            .iter()
            .filter(|r| r.alive)
            .all(|r| sign * r.xi.y >= sign * max_z)
    });
    match (tau_done, z_done) {
        (None, None) => true,
        (a, b) => a.unwrap_or(false) || b.unwrap_or(false),
    }
}

/// Integrate a launch front until the configured target, recording fronts,
/// residuals and power at the output cadence. Numerical aborts end the run
/// early and are reported in `termination`; configuration errors are returned.
pub fn run(launch: &WaveFront, medium: &MediumSpec, cfg: &RunConfig) -> Result<TrajectoryRecord> {
    let mut stepper = Stepper::new(launch, medium, cfg)?;
    let envelope = (
        launch.ray_launched_near(-1.0).unwrap_or(0),
        launch.ray_launched_near(1.0).unwrap_or(launch.len().saturating_sub(1)),
    );
    let width = |f: &WaveFront| (f.rays[envelope.1].xi - f.rays[envelope.0].xi).norm();
    let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    let mut record = TrajectoryRecord {
        fronts: Vec::new(),
        steps: Vec::new(),
        wave_potential: Vec::new(),
        residuals: Vec::new(),
        power: Vec::new(),
        max_residual: 0.0,
        envelope_width: vec![(stepper.front.rays[envelope.0].tau, width(&stepper.front))],
        envelope_rays: envelope,
        plane_cuts: Vec::new(),
        termination: Termination::ReachedTarget,
        steps_taken: 0,
    };
    let mut planes: Vec<PlaneTracker> = cfg
        .planes
        .iter()
        .map(|&z| PlaneTracker::new(z, launch.len()))
        .collect();

    let store = |record: &mut TrajectoryRecord, st: &Stepper| {
        let res = st.residual();
        record.fronts.push(st.front.clone());
        record.steps.push(st.step);
        record.wave_potential.push(st.closed.diag.w_tilde.clone());
        record.residuals.push(max_abs(&res));
        record.power.push(st.front.total_flux());
    };
    record.max_residual = max_abs(&stepper.residual());
    store(&mut record, &stepper);

    while !finished(&stepper.front, launch, stepper.step, cfg) && stepper.step < MAX_STEPS {
        let before = stepper.front.clone();
        if let Err(e) = stepper.advance() {
            record.termination = match e {
                Error::CausticEncountered { ray, tau } => Termination::Caustic { ray, tau },
                Error::NonFinite { ray, step } => Termination::NonFinite { ray, step },
                Error::TooFewRays { alive } => Termination::TooFewRays { alive },
                other => return Err(other),
            };
            break;
        }
        for p in &mut planes {
            p.observe(&before, &stepper.front, medium);
        }
        let res = max_abs(&stepper.residual());
        record.max_residual = record.max_residual.max(res);
        record
            .envelope_width
            .push((stepper.front.rays[envelope.0].tau, width(&stepper.front)));
        if stepper.step % cfg.output_every == 0 {
            store(&mut record, &stepper);
        }
    }
    if record.steps.last() != Some(&stepper.step) {
        store(&mut record, &stepper);
    }
    if cfg.reverse {
        for f in &mut record.fronts {
            for r in &mut f.rays {
                r.kappa = -r.kappa;
            }
        }
    }
    record.steps_taken = stepper.step;
    record.plane_cuts = planes.into_iter().map(|p| p.cut).collect();
    Ok(record)
}

/// One job of a batch: a launch, its medium and run settings.
#[derive(Debug, Clone)]
pub struct RunJob {
    pub launch: WaveFront,
    pub medium: MediumSpec,
    pub config: RunConfig,
}

/// Independent runs, executed concurrently under `exec`. Results keep job order.
pub fn run_batch(jobs: &[RunJob], exec: Execution) -> Vec<Result<TrajectoryRecord>> {
    par::map_jobs(exec, jobs, |job| run(&job.launch, &job.medium, &job.config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamcore::{build_launch, LaunchConfig, Mode};

    fn gaussian_launch(medium: &MediumSpec) -> WaveFront {
        let cfg = LaunchConfig {
            n_rays: 101,
            extent: 2.5,
            ..LaunchConfig::default()
        };
        build_launch(&cfg, medium).unwrap()
    }

    fn steps(n: usize) -> RunConfig {
        RunConfig {
            max_tau: Some(n as f64 * 1e-2),
            output_every: 1,
            ..RunConfig::default()
        }
    }

    #[test]
    fn classical_vacuum_rays_are_straight() {
        let medium = MediumSpec::vacuum(Mode::Optical);
        let launch = gaussian_launch(&medium);
        let cfg = RunConfig {
            wave_potential_on: false,
            ..steps(300)
        };
        let rec = run(&launch, &medium, &cfg).unwrap();
        assert_eq!(rec.termination, Termination::ReachedTarget);
        for (f, &step) in rec.fronts.iter().zip(&rec.steps) {
            for (r, r0) in f.rays.iter().zip(&launch.rays) {
                assert_eq!(r.xi.x, r0.xi.x);
                assert!((r.xi.y - step as f64 * 1e-2).abs() < 1e-13);
                assert_eq!(r.kappa, Vec2::new(0.0, 1.0));
            }
        }
        assert_eq!(rec.max_residual, 0.0);
    }

    #[test]
    fn launch_residual_vanishes() {
        let medium = MediumSpec::vacuum(Mode::Optical);
        let launch = gaussian_launch(&medium);
        let res = hamiltonian_residual(&launch, &medium).unwrap();
        assert!(res.iter().all(|r| r.abs() < 1e-14));
    }

    #[test]
    fn zero_steps_keep_the_launch() {
        let medium = MediumSpec::vacuum(Mode::Optical);
        let launch = gaussian_launch(&medium);
        let rec = run(&launch, &medium, &steps(0)).unwrap();
        assert_eq!(rec.steps_taken, 0);
        assert_eq!(rec.fronts.len(), 1);
        assert_eq!(rec.fronts[0].rays, launch.rays);
    }

    #[test]
    fn single_step_reverses() {
        let medium = MediumSpec::vacuum(Mode::Optical);
        let launch = gaussian_launch(&medium);
        for stepping in [Stepping::EqualTime, Stepping::EqualPhase] {
            let cfg = RunConfig {
                stepping,
                ..RunConfig::default()
            };
            let ahead = step_front(&launch, &medium, &cfg).unwrap();
            let back = step_front(&ahead, &medium, &RunConfig { reverse: true, ..cfg }).unwrap();
            for (a, b) in launch.rays.iter().zip(&back.rays) {
                assert!((a.xi - b.xi).norm() < 1e-12, "{stepping:?}");
                assert!((a.kappa - b.kappa).norm() < 1e-12, "{stepping:?}");
            }
        }
    }

    #[test]
    fn structural_function_is_held_per_ray() {
        let medium = MediumSpec::vacuum(Mode::Optical);
        let launch = gaussian_launch(&medium);
        let rec = run(&launch, &medium, &steps(200)).unwrap();
        assert_eq!(rec.termination, Termination::ReachedTarget);
        assert!(rec.max_residual < 1e-13, "{}", rec.max_residual);
    }

    #[test]
    fn execution_policies_agree_bitwise() {
        let medium = MediumSpec::vacuum(Mode::Optical);
        let launch = gaussian_launch(&medium);
        let go = |execution| {
            let cfg = RunConfig {
                execution,
                stepping: Stepping::EqualPhase,
                ..steps(50)
            };
            run(&launch, &medium, &cfg).unwrap()
        };
        assert_eq!(go(Execution::Sequential), go(Execution::Parallel));
    }

    #[test]
    fn plane_crossings_are_recorded() {
        let medium = MediumSpec::vacuum(Mode::Optical);
        let launch = gaussian_launch(&medium);
        let cfg = RunConfig {
            planes: vec![1.234],
            ..steps(200)
        };
        let rec = run(&launch, &medium, &cfg).unwrap();
        let cut = rec.plane_cut(1.234).unwrap();
        assert!(cut.is_complete());
        let c = launch.len() / 2;
        assert_eq!(cut.x[c], 0.0);
    }

    #[test]
    fn bad_step_is_rejected() {
        let medium = MediumSpec::vacuum(Mode::Optical);
        let launch = gaussian_launch(&medium);
        let cfg = RunConfig {
            d_tau: 0.0,
            ..RunConfig::default()
        };
        assert!(matches!(run(&launch, &medium, &cfg), Err(Error::InvalidConfig(_))));
    }
}
