use std::f64::consts::PI;

use crate::beamcore::{FluxWeight, MediumSpec, RayState, WaveFront};
use crate::closure;
use crate::{Error, Result, Vec2};

/// Transverse amplitude shape on the launch segment, before normalization.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `exp(-x^2)`
    Gaussian,
    /// `exp(-|x|^order)`
    SuperGaussian(f64),
    /// Piecewise-linear samples `(x, R)` sorted by `x`; zero outside.
    Table(Vec<(f64, f64)>),
}

impl Profile {
    pub fn sample(&self, x: f64) -> f64 {
        match self {
            Profile::Gaussian => (-x * x).exp(),
            Profile::SuperGaussian(order) => (-x.abs().powf(*order)).exp(),
            Profile::Table(t) => {
                if t.is_empty() || x < t[0].0 || x > t[t.len() - 1].0 {
                    return 0.0;
                }
                let k = t.partition_point(|&(tx, _)| tx <= x);
                if k == 0 {
                    return t[0].1;
                }
                if k == t.len() {
                    return t[t.len() - 1].1;
                }
                let (x0, r0) = t[k - 1];
                let (x1, r1) = t[k];
                if x1 == x0 {
                    r1
                } else {
                    r0 + (r1 - r0) * (x - x0) / (x1 - x0)
                }
            }
        }
    }

    /// Whether `R(-x) == R(x)` holds by construction.
    pub fn is_even(&self) -> bool {
        !matches!(self, Profile::Table(_))
    }
}

/// Geometry and shape of the launching surface.
#[derive(Debug, Clone, PartialEq)]
pub struct LaunchConfig {
    pub profile: Profile,
    pub n_rays: usize,
    /// Half-width of the seeded segment, in launch half-widths.
    pub extent: f64,
    /// `lambda0 / w0`.
    pub epsilon: f64,
    /// Initial propagation direction; normalized on use.
    pub direction: Vec2,
    /// Center of the launch segment.
    pub origin: Vec2,
    pub flux_weight: FluxWeight,
}

impl Default for LaunchConfig {
    fn default() -> Self {
        LaunchConfig {
            profile: Profile::Gaussian,
            n_rays: 201,
            extent: 4.0,
            epsilon: 0.2,
            direction: Vec2::new(0.0, 1.0),
            origin: Vec2::zeros(),
            flux_weight: FluxWeight::Medium,
        }
    }
}

impl LaunchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_rays < closure::MIN_ALIVE {
            return Err(Error::InvalidConfig(format!(
                "n_rays = {} is below the stencil minimum of {}",
                self.n_rays,
                closure::MIN_ALIVE
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon = lambda0/w0 = {} must satisfy 0 < epsilon < 1",
                self.epsilon
            )));
        }
        if !(self.extent > 0.0 && self.extent.is_finite()) {
            return Err(Error::InvalidConfig(format!("extent = {} must be > 0", self.extent)));
        }
        if !(self.direction.norm() > 0.0) {
            return Err(Error::InvalidConfig("direction must be non-zero".into()));
        }
        match &self.profile {
            Profile::SuperGaussian(order) if !(*order > 0.0) => {
                return Err(Error::InvalidConfig(format!(
                    "super-Gaussian order {order} must be > 0"
                )));
            }
            Profile::Table(t) => {
                if t.len() < 2 {
                    return Err(Error::InvalidConfig("amplitude table needs two samples".into()));
                }
                if t.windows(2).any(|w| w[1].0 < w[0].0) {
                    return Err(Error::InvalidConfig("amplitude table must be sorted by x".into()));
                }
                if let Some(&(x, r)) = t.iter().find(|&&(_, r)| r < 0.0) {
                    return Err(Error::NegativeAmplitude { position: x, value: r });
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Diffraction coupling `alpha = (epsilon / 2 pi)^2`.
    pub fn alpha(&self) -> f64 {
        alpha_from_epsilon(self.epsilon)
    }

    /// Transverse seeding coordinates, exactly antisymmetric about the center.
    pub fn seed_coordinates(&self) -> Vec<f64> {
        let n = self.n_rays;
        let span = (n - 1) as f64;
        (0..n)
            .map(|i| self.extent * ((2 * i) as f64 - span) / span)
            .collect()
    }

    /// Profile samples at the seeds, normalized to a unit peak.
    pub fn seed_amplitudes(&self) -> Result<Vec<f64>> {
        let xs = self.seed_coordinates();
        let raw: Vec<f64> = xs.iter().map(|&x| self.profile.sample(x)).collect();
        if let Some((i, &r)) = raw.iter().enumerate().find(|(_, &r)| r < 0.0 || r.is_nan()) {
            return Err(Error::NegativeAmplitude { position: xs[i], value: r });
        }
        let peak = raw.iter().copied().fold(0.0, f64::max);
        if !(peak > 0.0) {
            return Err(Error::InvalidConfig("launch profile is zero on every ray".into()));
        }
        Ok(raw.into_iter().map(|r| r / peak).collect())
    }
}

pub fn alpha_from_epsilon(epsilon: f64) -> f64 {
    let r = epsilon / (2.0 * PI);
    r * r
}

/// Rayleigh range `pi w0^2 / lambda0` in units of `w0`.
pub fn rayleigh_range(epsilon: f64) -> f64 {
    PI / epsilon
}

/// Seed the launch front: rays on a flat segment perpendicular to the launch
/// direction, amplitudes from the profile, and wave vectors along the
/// direction with magnitudes from [`dispersion_init`].
pub fn build_launch(cfg: &LaunchConfig, medium: &MediumSpec) -> Result<WaveFront> {
    cfg.validate()?;
    let dir = cfg.direction.normalize();
    let transverse = Vec2::new(dir.y, -dir.x);
    let xs = cfg.seed_coordinates();
    let amp = cfg.seed_amplitudes()?;
    let rays: Vec<RayState> = xs
        .iter()
        .map(|&x| RayState::new(cfg.origin + transverse * x, dir))
        .collect();
    let n = rays.len();
    let mut front = WaveFront {
        rays,
        amp,
        sigma: vec![],
        segments: vec![],
        tube_flux: vec![0.0; n],
        launch_x: xs,
        alpha: cfg.alpha(),
        flux_weight: cfg.flux_weight,
    };
    closure::retire_dim_rays(&mut front);
    for (r, a) in front.rays.iter().zip(front.amp.iter_mut()) {
        if !r.alive {
            *a = 0.0;
        }
    }
    closure::update_geometry(&mut front, None);
    let mut front = dispersion_init(&front, medium)?;
    front.tube_flux = closure::tube_fluxes(&front, medium)?;
    Ok(front)
}

/// Rescale each `|kappa|` so that `(kappa^2 - n~^2)/2 + W~ = 0`, keeping
/// directions. `W~` is the potential the integrator conserves `D~` with
/// ([`closure::dynamic_potential`]). Rays outside the stencil set only get
/// `|kappa| = n~`.
pub fn dispersion_init(front: &WaveFront, medium: &MediumSpec) -> Result<WaveFront> {
    let w_tilde = closure::dynamic_potential(front, medium)?;
    let mut out = front.clone();
    for (i, ray) in out.rays.iter_mut().enumerate() {
        let n2 = medium.eff_index_sq(ray.xi);
        let margin = if ray.alive { n2 - 2.0 * w_tilde[i] } else { n2 };
        if !(margin > 0.0) {
            if ray.alive {
                return Err(Error::EvanescentLaunch { ray: i, margin });
            }
            continue;
        }
        let norm = ray.kappa.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidConfig(format!("ray {i} has no direction")));
        }
        ray.kappa *= margin.sqrt() / norm;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beamcore::{Field, Mode};

    const ALPHA_02: f64 = 0.0010132118364233778;

    fn gaussian(n_rays: usize, extent: f64) -> LaunchConfig {
        LaunchConfig {
            n_rays,
            extent,
            ..LaunchConfig::default()
        }
    }

    #[test]
    fn alpha_for_default_epsilon() {
        assert!((LaunchConfig::default().alpha() - ALPHA_02).abs() < 1e-18);
    }

    #[test]
    fn gaussian_seeds_sample_profile() {
        let amp = gaussian(5, 2.0).seed_amplitudes().unwrap();
        let e1 = (-1.0f64).exp();
        assert_eq!(amp[2], 1.0);
        assert!((amp[1] - e1).abs() < 1e-16 && (amp[3] - e1).abs() < 1e-16);
    }

    #[test]
    fn uniform_table_in_vacuum_has_unit_wavevector() {
        let cfg = LaunchConfig {
            profile: Profile::Table(vec![(-10.0, 2.0), (10.0, 2.0)]),
            n_rays: 21,
            extent: 3.0,
            ..LaunchConfig::default()
        };
        let f = build_launch(&cfg, &MediumSpec::vacuum(Mode::Optical)).unwrap();
        assert!(f.rays.iter().all(|r| r.kappa.norm() == 1.0));
        assert!(f.amp.iter().all(|&a| a == 1.0));
    }

    #[test]
    fn gaussian_center_wavevector_includes_wave_potential() {
        // Oracle: W~(0) = alpha for exp(-x^2), so |kappa| = sqrt(1 - 2 alpha),
        // up to the O(spacing^2) error of the discrete potential.
        let f = build_launch(&gaussian(201, 4.0), &MediumSpec::vacuum(Mode::Optical)).unwrap();
        let k = f.rays[100].kappa.norm();
        assert!((k - 0.9989862743437236).abs() < 2e-6, "{k}");
        assert_eq!(f.rays[100].kappa.x, 0.0);
    }

    #[test]
    fn half_potential_gives_inverse_sqrt_two() {
        let cfg = LaunchConfig {
            profile: Profile::Table(vec![(-5.0, 1.0), (5.0, 1.0)]),
            n_rays: 9,
            ..LaunchConfig::default()
        };
        let f = build_launch(&cfg, &MediumSpec::matter(Field::Uniform(0.5))).unwrap();
        for r in &f.rays {
            assert!((r.kappa.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
        }
    }

    #[test]
    fn dispersion_is_idempotent() {
        let medium = MediumSpec::vacuum(Mode::Matter);
        let f = build_launch(&gaussian(101, 3.0), &medium).unwrap();
        let g = dispersion_init(&f, &medium).unwrap();
        for (a, b) in f.rays.iter().zip(&g.rays) {
            let (ka, kb) = (a.kappa.norm(), b.kappa.norm());
            assert!((ka - kb).abs() <= 1e-14 * ka);
        }
    }

    #[test]
    fn launch_is_mirror_symmetric() {
        let cfg = LaunchConfig {
            profile: Profile::SuperGaussian(4.0),
            n_rays: 81,
            extent: 2.0,
            ..LaunchConfig::default()
        };
        let f = build_launch(&cfg, &MediumSpec::vacuum(Mode::Optical)).unwrap();
        let n = f.len();
        for i in 0..n {
            let j = n - 1 - i;
            assert_eq!(f.amp[i], f.amp[j]);
            assert_eq!(f.rays[i].kappa.norm(), f.rays[j].kappa.norm());
            assert_eq!(f.rays[i].xi.x, -f.rays[j].xi.x);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let neg = LaunchConfig {
            profile: Profile::Table(vec![(-1.0, 1.0), (0.0, -0.1), (1.0, 1.0)]),
            ..LaunchConfig::default()
        };
        assert!(matches!(
            build_launch(&neg, &MediumSpec::vacuum(Mode::Optical)),
            Err(Error::NegativeAmplitude { .. })
        ));
        let few = gaussian(4, 2.0);
        assert!(matches!(few.validate(), Err(Error::InvalidConfig(_))));
        let wide = LaunchConfig {
            epsilon: 1.5,
            ..LaunchConfig::default()
        };
        let msg = wide.validate().unwrap_err().to_string();
        assert!(msg.contains("epsilon < 1"), "{msg}");
    }

    #[test]
    fn evanescent_launch_is_rejected() {
        let err = build_launch(&gaussian(21, 2.0), &MediumSpec::matter(Field::Uniform(1.0))).unwrap_err();
        assert!(matches!(err, Error::EvanescentLaunch { .. }));
    }

    #[test]
    fn direction_sets_launch_segment() {
        let cfg = LaunchConfig {
            direction: Vec2::new(1.0, 0.0),
            n_rays: 11,
            extent: 1.0,
            ..LaunchConfig::default()
        };
        let f = build_launch(&cfg, &MediumSpec::vacuum(Mode::Optical)).unwrap();
        // Transverse axis is (d.z, -d.x) = (0, -1); rays fan out along z.
        assert_eq!(f.rays[0].xi, Vec2::new(0.0, 1.0));
        assert!(f.rays.iter().all(|r| r.kappa.y == 0.0 && r.kappa.x > 0.0));
        assert!(f.sigma[10] > 0.0);
    }
}
