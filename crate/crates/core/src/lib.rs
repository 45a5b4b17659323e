//! Exact ray and particle trajectories for monochromatic Helmholtz waves and
//! mono-energetic matter waves.
//!
//! Rays are advanced as a front: their amplitudes follow from flux
//! conservation along ray tubes, and the amplitude curvature across the
//! front (the Wave Potential) deflects them. Switching the Wave Potential
//! off recovers geometrical optics, or classical mechanics for particles.
//! Optical and matter-wave problems share one dimensionless code path.

pub mod beamcore;
pub mod closure;
mod error;
pub mod integrator;
pub mod oracles;
pub mod par;
pub mod stencil;

pub use error::{Error, Result};

/// 2D vector in the (x, z) plane; `.x` is transverse, `.y` is `z`.
pub type Vec2 = nalgebra::Vector2<f64>;

pub use beamcore::{
    build_launch, dispersion_init, optical_matter_map, Field, FluxWeight, LaunchConfig,
    MediumSpec, Mode, Profile, RayState, Termination, TrajectoryRecord, WaveFront,
};
pub use closure::{transport_amplitude, wave_potential, wave_potential_gradient, ClosureDiagnostics};
pub use integrator::{hamiltonian_residual, run, step_front, RunConfig};
pub use oracles::{bpm_solve, intensity_compare, make_scenario, paraxial_envelope, Scenario};
pub use par::Execution;
