use std::fmt;
use std::sync::Arc;

use crate::Vec2;

/// Optical waves (field is n^2) or matter waves (field is V/E).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Optical,
    Matter,
}

/// A user-supplied scalar field; its gradient is taken by central differences.
pub type CustomField = Arc<dyn Fn(Vec2) -> f64 + Send + Sync>;

/// Step used for finite-difference gradients of [`Field::Custom`].
const CUSTOM_FD_STEP: f64 = 1e-5;

/// Scalar field over the dimensionless (x, z) plane.
#[derive(Clone)]
pub enum Field {
    Uniform(f64),
    /// `offset + gradient . xi`
    Linear { offset: f64, gradient: Vec2 },
    /// `ceiling * tanh(q / ceiling)` with `q = sum(((xi - center) / scale)^2)`:
    /// quadratic near the center, saturating at `ceiling` far away.
    SaturatedBowl {
        center: Vec2,
        scale: Vec2,
        ceiling: f64,
    },
    /// `1 - inner`
    OneMinus(Box<Field>),
    /// `factor * inner`
    Scaled(f64, Box<Field>),
    Custom(CustomField),
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Uniform(v) => f.debug_tuple("Uniform").field(v).finish(),
            Field::Linear { offset, gradient } => f
                .debug_struct("Linear")
                .field("offset", offset)
                .field("gradient", &[gradient.x, gradient.y])
                .finish(),
            Field::SaturatedBowl {
                center,
                scale,
                ceiling,
            } => f
                .debug_struct("SaturatedBowl")
                .field("center", &[center.x, center.y])
                .field("scale", &[scale.x, scale.y])
                .field("ceiling", ceiling)
                .finish(),
            Field::OneMinus(inner) => f.debug_tuple("OneMinus").field(inner).finish(),
            Field::Scaled(k, inner) => f.debug_tuple("Scaled").field(k).field(inner).finish(),
            Field::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Field {
    pub fn value(&self, xi: Vec2) -> f64 {
        match self {
            Field::Uniform(v) => *v,
            Field::Linear { offset, gradient } => offset + gradient.dot(&xi),
            Field::SaturatedBowl {
                center,
                scale,
                ceiling,
            } => {
                let q = bowl_q(xi, center, scale);
                ceiling * (q / ceiling).tanh()
            }
            Field::OneMinus(inner) => 1.0 - inner.value(xi),
            Field::Scaled(k, inner) => k * inner.value(xi),
            Field::Custom(f) => f(xi),
        }
    }

    pub fn gradient(&self, xi: Vec2) -> Vec2 {
        match self {
            Field::Uniform(_) => Vec2::zeros(),
            Field::Linear { gradient, .. } => *gradient,
            Field::SaturatedBowl {
                center,
                scale,
                ceiling,
            } => {
                let q = bowl_q(xi, center, scale);
                let t = (q / ceiling).tanh();
                let dv_dq = 1.0 - t * t;
                let d = xi - center;
                Vec2::new(
                    dv_dq * 2.0 * d.x / (scale.x * scale.x),
                    dv_dq * 2.0 * d.y / (scale.y * scale.y),
                )
            }
            Field::OneMinus(inner) => -inner.gradient(xi),
            Field::Scaled(k, inner) => inner.gradient(xi) * *k,
            Field::Custom(f) => {
                let h = CUSTOM_FD_STEP;
                let dx = Vec2::new(h, 0.0);
                let dz = Vec2::new(0.0, h);
                Vec2::new(
                    (f(xi + dx) - f(xi - dx)) / (2.0 * h),
                    (f(xi + dz) - f(xi - dz)) / (2.0 * h),
                )
            }
        }
    }
}

fn bowl_q(xi: Vec2, center: &Vec2, scale: &Vec2) -> f64 {
    let d = xi - center;
    let u = d.x / scale.x;
    let w = d.y / scale.y;
    u * u + w * w
}

/// The propagation medium, seen through the dimensionless effective index
/// `n~^2`: `n^2` for optical waves, `(E - V) / E` for matter waves.
#[derive(Debug, Clone)]
pub struct MediumSpec {
    pub mode: Mode,
    /// `n^2(xi)` in optical mode, `V(xi)/E` in matter mode.
    pub field: Field,
}

impl MediumSpec {
    pub fn vacuum(mode: Mode) -> Self {
        match mode {
            Mode::Optical => Self::optical(Field::Uniform(1.0)),
            Mode::Matter => Self::matter(Field::Uniform(0.0)),
        }
    }

    pub fn optical(index_sq: Field) -> Self {
        MediumSpec {
            mode: Mode::Optical,
            field: index_sq,
        }
    }

    pub fn matter(potential_over_energy: Field) -> Self {
        MediumSpec {
            mode: Mode::Matter,
            field: potential_over_energy,
        }
    }

    pub fn eff_index_sq(&self, xi: Vec2) -> f64 {
        match self.mode {
            Mode::Optical => self.field.value(xi),
            Mode::Matter => 1.0 - self.field.value(xi),
        }
    }

    pub fn grad_eff_index_sq(&self, xi: Vec2) -> Vec2 {
        match self.mode {
            Mode::Optical => self.field.gradient(xi),
            Mode::Matter => -self.field.gradient(xi),
        }
    }

    /// True when `n~^2 == 1` identically, which lets the integrator skip
    /// medium forces altogether.
    pub fn is_vacuum(&self) -> bool {
        match (self.mode, &self.field) {
            (Mode::Optical, Field::Uniform(v)) => *v == 1.0,
            (Mode::Matter, Field::Uniform(v)) => *v == 0.0,
            _ => false,
        }
    }
}
