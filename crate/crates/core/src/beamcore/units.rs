//! Mapping of optical and matter-wave problems onto one dimensionless form.
//!
//! Lengths are measured in the launch half-width `w0`, wave vectors in `k0`
//! (momenta in `p0 = sqrt(2 m E)`, via `k = p / hbar`). Both problems then
//! share the coupling `alpha = 1 / (k0 w0)^2` and the effective index
//! `n~^2`: `n^2` for light, `(E - V) / E` for matter.

use std::f64::consts::PI;

use crate::beamcore::{Field, MediumSpec, Mode};
use crate::{Error, Result, Vec2};

/// A problem stated in physical units (any consistent unit system).
#[derive(Debug, Clone)]
pub enum PhysicalProblem {
    Optical {
        wavelength: f64,
        half_width: f64,
        /// `n^2` as a function of `xi = r / w0`.
        index_sq: Field,
    },
    Matter {
        mass: f64,
        energy: f64,
        hbar: f64,
        half_width: f64,
        /// `V` in energy units as a function of `xi = r / w0`.
        potential: Field,
    },
}

/// The same problem in dimensionless form, plus the scales that undo it.
#[derive(Debug, Clone)]
pub struct Dimensionless {
    pub alpha: f64,
    pub medium: MediumSpec,
    /// Vacuum wave number `k0` (`p0 / hbar` for matter).
    pub k0: f64,
    /// Vacuum wavelength `2 pi / k0` (de Broglie wavelength for matter).
    pub wavelength: f64,
    pub half_width: f64,
    /// Physical time per unit `tau`: `w0 / c` needs `c`, so optical problems
    /// report `w0` (time in units of `1/c`); matter reports `w0 m / p0`.
    pub time_unit: f64,
}

impl Dimensionless {
    /// `lambda0 / w0`.
    pub fn epsilon(&self) -> f64 {
        2.0 * PI * self.alpha.sqrt()
    }

    /// Two problems are equivalent when their couplings match and their
    /// `n~^2` fields agree at every probe point.
    pub fn equivalent_to(&self, other: &Dimensionless, probes: &[Vec2], tol: f64) -> bool {
        (self.alpha - other.alpha).abs() <= tol * self.alpha
            && probes.iter().all(|&xi| {
                (self.medium.eff_index_sq(xi) - other.medium.eff_index_sq(xi)).abs() <= tol
            })
    }

    /// Undo the matter-wave scaling for a given particle mass and `hbar`.
    /// `V = E (1 - n~^2)` with `E = hbar^2 / (2 m alpha w0^2)`.
    pub fn to_matter(&self, mass: f64, hbar: f64) -> Result<PhysicalProblem> {
        if !(mass > 0.0 && hbar > 0.0) {
            return Err(Error::InvalidConfig("mass and hbar must be positive".into()));
        }
        let w0 = self.half_width;
        let energy = hbar * hbar / (2.0 * mass * self.alpha * w0 * w0);
        let potential = match (&self.medium.mode, &self.medium.field) {
            (Mode::Matter, Field::Scaled(k, inner)) => Field::Scaled(energy * k, inner.clone()),
            (Mode::Matter, f) => Field::Scaled(energy, Box::new(f.clone())),
            (Mode::Optical, f) => {
                Field::Scaled(energy, Box::new(Field::OneMinus(Box::new(f.clone()))))
            }
        };
        Ok(PhysicalProblem::Matter {
            mass,
            energy,
            hbar,
            half_width: w0,
            potential,
        })
    }
}

pub fn optical_matter_map(problem: &PhysicalProblem) -> Result<Dimensionless> {
    match problem {
        PhysicalProblem::Optical {
            wavelength,
            half_width,
            index_sq,
        } => {
            if !(*wavelength > 0.0 && *half_width > 0.0) {
                return Err(Error::InvalidConfig(
                    "wavelength and half-width must be positive".into(),
                ));
            }
            let k0 = 2.0 * PI / wavelength;
            let kw = k0 * half_width;
            Ok(Dimensionless {
                alpha: 1.0 / (kw * kw),
                medium: MediumSpec::optical(index_sq.clone()),
                k0,
                wavelength: *wavelength,
                half_width: *half_width,
                time_unit: *half_width,
            })
        }
        PhysicalProblem::Matter {
            mass,
            energy,
            hbar,
            half_width,
            potential,
        } => {
            if !(*energy > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "particle energy E = {energy} must be positive"
                )));
            }
            if !(*mass > 0.0 && *hbar > 0.0 && *half_width > 0.0) {
                return Err(Error::InvalidConfig(
                    "mass, hbar and half-width must be positive".into(),
                ));
            }
            let p0 = (2.0 * mass * energy).sqrt();
            let k0 = p0 / hbar;
            let field = match potential {
                Field::Uniform(v) => Field::Uniform(v / energy),
                Field::Scaled(k, inner) => Field::Scaled(k / energy, inner.clone()),
                f => Field::Scaled(1.0 / energy, Box::new(f.clone())),
            };
            Ok(Dimensionless {
                alpha: hbar * hbar / (2.0 * mass * energy * half_width * half_width),
                medium: MediumSpec::matter(field),
                k0,
                wavelength: 2.0 * PI * hbar / p0,
                half_width: *half_width,
                time_unit: half_width * mass / p0,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probes() -> Vec<Vec2> {
        vec![Vec2::new(0.0, 0.0), Vec2::new(1.5, -2.0), Vec2::new(-3.0, 7.0)]
    }

    #[test]
    fn free_particle_maps_to_de_broglie() {
        let (m, e, hbar, w0) = (9.109e-31, 1.602e-17, 1.0546e-34, 1e-9);
        let d = optical_matter_map(&PhysicalProblem::Matter {
            mass: m,
            energy: e,
            hbar,
            half_width: w0,
            potential: Field::Uniform(0.0),
        })
        .unwrap();
        let p0 = (2.0 * m * e).sqrt();
        assert_eq!(d.medium.eff_index_sq(Vec2::new(0.3, 0.1)), 1.0);
        assert!((d.k0 - p0 / hbar).abs() <= 1e-14 * d.k0);
        assert!((d.wavelength - 2.0 * PI * hbar / p0).abs() <= 1e-14 * d.wavelength);
    }

    #[test]
    fn equal_alpha_for_matching_optical_and_matter() {
        let optical = optical_matter_map(&PhysicalProblem::Optical {
            wavelength: 0.2,
            half_width: 1.0,
            index_sq: Field::Uniform(1.0),
        })
        .unwrap();
        // hbar / (p0 w0) = 0.2 / 2 pi with m = 1/2, E = 1, w0 = 1 (p0 = 1).
        let matter = optical_matter_map(&PhysicalProblem::Matter {
            mass: 0.5,
            energy: 1.0,
            hbar: 0.2 / (2.0 * PI),
            half_width: 1.0,
            potential: Field::Uniform(0.0),
        })
        .unwrap();
        assert!((optical.alpha - matter.alpha).abs() <= 1e-16);
        assert!(optical.equivalent_to(&matter, &probes(), 1e-14));
    }

    #[test]
    fn half_energy_barrier_halves_index() {
        let d = optical_matter_map(&PhysicalProblem::Matter {
            mass: 2.0,
            energy: 3.0,
            hbar: 0.1,
            half_width: 1.0,
            potential: Field::Uniform(1.5),
        })
        .unwrap();
        for xi in probes() {
            assert_eq!(d.medium.eff_index_sq(xi), 0.5);
        }
    }

    #[test]
    fn non_positive_energy_is_rejected() {
        let err = optical_matter_map(&PhysicalProblem::Matter {
            mass: 1.0,
            energy: 0.0,
            hbar: 1.0,
            half_width: 1.0,
            potential: Field::Uniform(0.0),
        })
        .unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn matter_round_trip() {
        let (m, e, hbar, w0) = (3.7, 0.42, 0.013, 2.5);
        let v = Field::SaturatedBowl {
            center: Vec2::new(0.0, 1.0),
            scale: Vec2::new(3.0, 4.0),
            ceiling: 0.8,
        };
        let d = optical_matter_map(&PhysicalProblem::Matter {
            mass: m,
            energy: e,
            hbar,
            half_width: w0,
            potential: v.clone(),
        })
        .unwrap();
        let PhysicalProblem::Matter {
            energy, potential, half_width, ..
        } = d.to_matter(m, hbar).unwrap()
        else {
            panic!("expected a matter problem");
        };
        assert!((energy - e).abs() <= 1e-14 * e);
        assert_eq!(half_width, w0);
        for xi in probes() {
            let (a, b) = (potential.value(xi), v.value(xi));
            assert!((a - b).abs() <= 1e-14 * b.abs().max(1e-300), "{a} vs {b}");
        }
    }
}
