//! Preset problems: Gaussian and non-Gaussian slit diffraction, a Gaussian
//! electron beam against an electrostatic mirror, and a free plane wave.

use crate::beamcore::{rayleigh_range, Field, FluxWeight, LaunchConfig, MediumSpec, Mode, Profile};
use crate::integrator::{Longitudinal, RunConfig, Stepping};
use crate::{Error, Result, Vec2};

pub const REGISTRY: [&str; 4] = [
    "gaussian_slit",
    "supergaussian_slit",
    "electrostatic_mirror",
    "free_plane_wave",
];

/// Qualitative outcome a scenario is expected to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Envelope rays follow the paraxial hyperbola.
    GaussianDiffraction,
    /// Spreading with a non-Gaussian intensity profile.
    Diffraction,
    /// A focus without the Wave Potential, a finite waist with it.
    FocusOrWaist,
    StraightRays,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub launch: LaunchConfig,
    pub medium: MediumSpec,
    pub run: RunConfig,
    pub expected: Outcome,
}

/// Mirror geometry: `V/E = 2 tanh(q/2)`, `q = (x/15)^2 + (z/10)^2`. The
/// longitudinal part turns the beam around after `tau ~ 5 pi`, the transverse
/// part bends it back to a focus near `tau ~ 24.5` on the return leg.
pub const MIRROR_SCALE: (f64, f64) = (15.0, 10.0);
pub const MIRROR_CEILING: f64 = 2.0;
pub const MIRROR_EPSILON: f64 = 0.05;
pub const MIRROR_RUN_TAU: f64 = 32.0;

pub fn mirror_potential() -> Field {
    Field::SaturatedBowl {
        center: Vec2::zeros(),
        scale: Vec2::new(MIRROR_SCALE.0, MIRROR_SCALE.1),
        ceiling: MIRROR_CEILING,
    }
}

pub fn make_scenario(name: &str) -> Result<Scenario> {
    let slit = |profile: Profile, extent: f64| LaunchConfig {
        profile,
        extent,
        ..LaunchConfig::default()
    };
    // Equal-phase fronts keep the beam tails on the wavefront, which the
    // projected speed constraint needs to stay reversible.
    let slit_run = |epsilon: f64| RunConfig {
        max_z: Some(3.0 * rayleigh_range(epsilon)),
        stepping: Stepping::EqualPhase,
        ..RunConfig::default()
    };
    let scenario = match name {
        "gaussian_slit" => Scenario {
            name: REGISTRY[0],
            launch: slit(Profile::Gaussian, 2.5),
            medium: MediumSpec::vacuum(Mode::Optical),
            run: slit_run(0.2),
            expected: Outcome::GaussianDiffraction,
        },
        "supergaussian_slit" => Scenario {
            name: REGISTRY[1],
            launch: slit(Profile::SuperGaussian(4.0), 2.0),
            medium: MediumSpec::vacuum(Mode::Optical),
            // The steep flanks slow their rays too much for equal phase.
            run: RunConfig {
                stepping: Stepping::EqualTime,
                ..slit_run(0.2)
            },
            expected: Outcome::Diffraction,
        },
        "electrostatic_mirror" => Scenario {
            name: REGISTRY[2],
            launch: LaunchConfig {
                epsilon: MIRROR_EPSILON,
                extent: 4.0,
                flux_weight: FluxWeight::Unit,
                ..LaunchConfig::default()
            },
            medium: MediumSpec::matter(mirror_potential()),
            run: RunConfig {
                max_tau: Some(MIRROR_RUN_TAU),
                // The speed constraint is singular where rays turn around.
                longitudinal: Longitudinal::Off,
                ..RunConfig::default()
            },
            expected: Outcome::FocusOrWaist,
        },
        "free_plane_wave" => Scenario {
            name: REGISTRY[3],
            launch: slit(Profile::Table(vec![(-5.0, 1.0), (5.0, 1.0)]), 4.0),
            medium: MediumSpec::vacuum(Mode::Optical),
            run: slit_run(0.2),
            expected: Outcome::StraightRays,
        },
        other => {
            return Err(Error::UnknownScenario {
                name: other.to_string(),
                registry: REGISTRY.to_vec(),
            })
        }
    };
    Ok(scenario)
}

impl Scenario {
    /// Re-derive the run length after changing `launch.epsilon`.
    pub fn rescale_run(&mut self) {
        if self.run.max_z.is_some() {
            self.run.max_z = Some(3.0 * rayleigh_range(self.launch.epsilon));
        }
    }
}
