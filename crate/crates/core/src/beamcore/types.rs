use crate::Vec2;

/// One ray (optical mode) or particle (matter mode) in dimensionless units:
/// lengths in launch half-widths, wave vectors in `k0` (momenta in `p0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayState {
    pub xi: Vec2,
    pub kappa: Vec2,
    pub tau: f64,
    /// Accumulated phase (optical) or `S / hbar` (matter).
    pub phase: f64,
    pub alive: bool,
}

impl RayState {
    pub fn new(xi: Vec2, kappa: Vec2) -> Self {
        RayState {
            xi,
            kappa,
            tau: 0.0,
            phase: 0.0,
            alive: true,
        }
    }
}

/// Speed factor `s` in the tube-flux relation `flux = R^2 * s * width`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxWeight {
    /// `s = |kappa|`, the ray's own wave-vector magnitude.
    Kinetic,
    /// `s = sqrt(n~^2(xi))`, the local geometrical-optics wave number. A pure
    /// function of position, which keeps the stepping map time-reversible.
    #[default]
    Medium,
    /// `s = 1`; amplitude follows the tube width alone. Used where rays pass
    /// turning points and any speed factor vanishes.
    Unit,
}

/// An ordered ensemble of rays advanced together in time.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFront {
    pub rays: Vec<RayState>,
    /// Amplitude `R`, peak-normalized to 1 on the launch front.
    pub amp: Vec<f64>,
    /// Signed arc length along the polyline of alive rays; NaN for dead rays.
    pub sigma: Vec<f64>,
    /// Signed length of each segment between consecutive alive rays.
    pub segments: Vec<f64>,
    /// Conserved flux carried by each ray's tube.
    pub tube_flux: Vec<f64>,
    /// Transverse launch coordinate of each ray.
    pub launch_x: Vec<f64>,
    /// Diffraction coupling `1 / (k0 w0)^2`.
    pub alpha: f64,
    pub flux_weight: FluxWeight,
}

impl WaveFront {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn alive_indices(&self) -> Vec<usize> {
        self.rays
            .iter()
            .enumerate()
            .filter(|(_, r)| r.alive)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn positions(&self) -> Vec<Vec2> {
        self.rays.iter().map(|r| r.xi).collect()
    }

    /// `lambda0 / w0`.
    pub fn epsilon(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.alpha.sqrt()
    }

    /// Total power, summed in ray order.
    pub fn total_flux(&self) -> f64 {
        self.tube_flux.iter().sum()
    }

    /// Ray whose launch coordinate is nearest to `x`.
    pub fn ray_launched_near(&self, x: f64) -> Option<usize> {
        self.launch_x
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
            .map(|(i, _)| i)
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    ReachedTarget,
    Caustic { ray: usize, tau: f64 },
    NonFinite { ray: usize, step: usize },
    TooFewRays { alive: usize },
}

impl Termination {
    pub fn is_abort(&self) -> bool {
        !matches!(self, Termination::ReachedTarget)
    }
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Termination::ReachedTarget => write!(f, "reached target"),
            Termination::Caustic { ray, tau } => write!(f, "caustic at ray {ray}, tau = {tau}"),
            Termination::NonFinite { ray, step } => {
                write!(f, "non-finite state at ray {ray}, step {step}")
            }
            Termination::TooFewRays { alive } => write!(f, "too few alive rays ({alive})"),
        }
    }
}

/// Per-ray crossing of a transverse plane `z = const`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCut {
    pub z: f64,
    /// Transverse position, NaN for rays that never crossed.
    pub x: Vec<f64>,
    pub amp: Vec<f64>,
    /// Local intensity `R^2 * s` carried into the plane.
    pub intensity: Vec<f64>,
}

impl PlaneCut {
    pub fn is_complete(&self) -> bool {
        self.x.iter().all(|x| x.is_finite())
    }
}

/// Output of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub fronts: Vec<WaveFront>,
    /// Step index of each stored front.
    pub steps: Vec<usize>,
    /// Wave Potential at each stored front.
    pub wave_potential: Vec<Vec<f64>>,
    /// Max |D~| over rays, per stored front.
    pub residuals: Vec<f64>,
    /// Total flux per stored front.
    pub power: Vec<f64>,
    /// Max |D~| over every step, not just stored fronts.
    pub max_residual: f64,
    /// (tau, separation of the two envelope rays) at every step.
    pub envelope_width: Vec<(f64, f64)>,
    /// The rays launched nearest to `x = -1` and `x = +1`.
    pub envelope_rays: (usize, usize),
    pub plane_cuts: Vec<PlaneCut>,
    pub termination: Termination,
    pub steps_taken: usize,
}

impl TrajectoryRecord {
    pub fn last_front(&self) -> &WaveFront {
        self.fronts.last().expect("record always holds the launch front")
    }

    pub fn min_envelope_width(&self) -> f64 {
        self.envelope_width
            .iter()
            .map(|&(_, w)| w)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn plane_cut(&self, z: f64) -> Option<&PlaneCut> {
        self.plane_cuts.iter().find(|c| c.z == z)
    }
}
