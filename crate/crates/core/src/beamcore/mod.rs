//! Domain types, the shared dimensionless formulation, and the launch stage.

mod launch;
mod medium;
mod types;
mod units;

pub use launch::{
    alpha_from_epsilon, build_launch, dispersion_init, rayleigh_range, LaunchConfig, Profile,
};
pub use medium::{CustomField, Field, MediumSpec, Mode};
pub use types::{FluxWeight, PlaneCut, RayState, Termination, TrajectoryRecord, WaveFront};
pub use units::{optical_matter_map, Dimensionless, PhysicalProblem};
