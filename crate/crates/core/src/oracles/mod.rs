//! Independent references for the ray engine: the paraxial envelope, a
//! split-step field solver, intensity comparison, and scenario presets.

pub mod bpm;
pub mod compare;
pub mod envelope;
pub mod scenario;

pub use bpm::{bpm_solve, BpmGrid, FieldGrid};
pub use compare::{compare_profiles, intensity_compare, ComparisonReport};
pub use envelope::{gaussian_beam, paraxial_envelope};
pub use scenario::{make_scenario, Outcome, Scenario, REGISTRY};
