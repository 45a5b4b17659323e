use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("negative launch amplitude {value} at xi = {position}")]
    NegativeAmplitude { position: f64, value: f64 },

    #[error("evanescent launch at ray {ray}: n^2 - 2W = {margin:e} <= 0")]
    EvanescentLaunch { ray: usize, margin: f64 },

    #[error("caustic encountered at ray {ray}, tau = {tau}")]
    CausticEncountered { ray: usize, tau: f64 },

    #[error("non-finite state at ray {ray}, step {step}")]
    NonFinite { ray: usize, step: usize },

    #[error("only {alive} alive rays remain, at least 5 are required")]
    TooFewRays { alive: usize },

    #[error("unknown scenario `{name}`; registry: {}", registry.join(", "))]
    UnknownScenario {
        name: String,
        registry: Vec<&'static str>,
    },

    #[error("spectral energy fraction {fraction:e} at the band edge; enlarge or refine the grid")]
    Aliasing { fraction: f64 },

    #[error("ray and field intensity supports do not overlap at z = {z}")]
    NonOverlapping { z: f64 },
}

impl Error {
    /// True for failures of the numerical march itself, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::CausticEncountered { .. }
                | Error::NonFinite { .. }
                | Error::TooFewRays { .. }
                | Error::Aliasing { .. }
        )
    }
}
