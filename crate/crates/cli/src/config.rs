//! Line-oriented run configuration.
//!
//! ```text
//! # comment
//! scenario = gaussian_slit        # or an inline [medium] section
//!
//! [launch]
//! epsilon = 0.2
//! n_rays = 201
//!
//! [run]
//! d_tau = 0.01
//!
//! [output]
//! dir = out
//! ```
//!
//! Keys are listed in [`KEYS`]. Values are plain words or numbers; vectors
//! are comma separated; fields take a function-like form such as
//! `bowl(0, 0; 15, 10; 2)`.

use std::path::PathBuf;

use helmray::beamcore::rayleigh_range;
use helmray::integrator::{Longitudinal, Stepping};
use helmray::{
    make_scenario, Execution, Field, FluxWeight, LaunchConfig, MediumSpec, Mode, Profile,
    RunConfig, Vec2,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}` in [{section}]")]
    UnknownKey {
        line: usize,
        section: String,
        key: String,
    },
    #[error("line {line}: unknown section [{section}]")]
    UnknownSection { line: usize, section: String },
    #[error("line {line}: bad value for `{key}`: {message}")]
    BadValue {
        line: usize,
        key: String,
        message: String,
    },
    #[error("no setup given: set `scenario = <name>` or describe an inline [medium]")]
    MissingScenario,
    #[error("both `scenario` and an inline [medium] are given; use one")]
    ConflictingSetup,
    #[error(
        "epsilon = {0}: the ray model holds for beams wider than a wavelength, \
         epsilon = lambda0/w0 < 1"
    )]
    EpsilonOutOfRange(f64),
    #[error(transparent)]
    Model(#[from] helmray::Error),
}

/// Every accepted key, as `(section, key, description)`; the top level has an
/// empty section name.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("", "scenario", "preset: gaussian_slit | supergaussian_slit | electrostatic_mirror | free_plane_wave"),
    ("launch", "profile", "gaussian | supergaussian(order) | table(x:R, x:R, ...)"),
    ("launch", "n_rays", "number of rays (>= 5), default 201"),
    ("launch", "extent", "half-width of the seeded segment in w0"),
    ("launch", "epsilon", "lambda0 / w0, 0 < epsilon < 1, default 0.2"),
    ("launch", "direction", "launch direction x, z"),
    ("launch", "origin", "center of the launch segment x, z"),
    ("launch", "flux_weight", "medium | kinetic | unit"),
    ("medium", "mode", "optical (field is n^2) | matter (field is V/E)"),
    ("medium", "field", "uniform(v) | linear(v0; gx, gz) | bowl(cx, cz; sx, sz; ceiling)"),
    ("run", "d_tau", "time step, default 0.01"),
    ("run", "max_tau", "stop after this much tau"),
    ("run", "max_z", "stop when every ray has z >= max_z, default 3 zR"),
    ("run", "wave_potential", "on | off"),
    ("run", "output_every", "store a front every this many steps, default 10"),
    ("run", "reverse", "true | false"),
    ("run", "stepping", "equal_time | equal_phase"),
    ("run", "longitudinal", "projected | off"),
    ("run", "execution", "parallel | sequential"),
    ("run", "planes", "z values where crossings are recorded, comma separated"),
    ("output", "dir", "output directory, default out"),
    ("output", "trajectories", "write trajectories.csv (true | false)"),
    ("output", "fronts", "write fronts.csv"),
    ("output", "intensity", "write intensity.csv"),
    ("output", "oracle", "add split-step field intensity to intensity.csv"),
    ("output", "envelope", "write envelope.csv"),
    ("output", "svg", "write figure.svg"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Emit {
    pub trajectories: bool,
    pub fronts: bool,
    pub intensity: bool,
    pub oracle: bool,
    pub envelope: bool,
    pub svg: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Emit {
            trajectories: true,
            fronts: true,
            intensity: true,
            oracle: false,
            envelope: true,
            svg: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CliConfig {
    /// Preset name, or `None` for an inline setup.
    pub scenario: Option<String>,
    pub launch: LaunchConfig,
    pub medium: MediumSpec,
    pub run: RunConfig,
    pub output: PathBuf,
    pub emit: Emit,
}

impl CliConfig {
    pub fn label(&self) -> &str {
        self.scenario.as_deref().unwrap_or("inline")
    }
}

struct Entry {
    line: usize,
    section: String,
    key: String,
    value: String,
}

fn tokenize(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut section = String::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("unterminated section header `{body}`"),
            })?;
            let name = name.trim().to_string();
            if !KEYS.iter().any(|(s, _, _)| *s == name) || name.is_empty() {
                return Err(ConfigError::UnknownSection { line, section: name });
            }
            section = name;
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("expected `key = value`, found `{body}`"),
        })?;
        let key = key.trim().to_string();
        if !KEYS.iter().any(|(s, k, _)| *s == section && *k == key) {
            return Err(ConfigError::UnknownKey { line, section, key });
        }
        out.push(Entry {
            line,
            section: section.clone(),
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

fn bad(e: &Entry, message: impl Into<String>) -> ConfigError {
    ConfigError::BadValue {
        line: e.line,
        key: e.key.clone(),
        message: message.into(),
    }
}

fn number(e: &Entry, s: &str) -> Result<f64, ConfigError> {
    let v: f64 = s.trim().parse().map_err(|_| bad(e, format!("`{}` is not a number", s.trim())))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(e, "value must be finite"))
    }
}

fn numbers(e: &Entry, s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(|p| number(e, p)).collect()
}

fn vector(e: &Entry, s: &str) -> Result<Vec2, ConfigError> {
    match numbers(e, s)?.as_slice() {
        [x, z] => Ok(Vec2::new(*x, *z)),
        _ => Err(bad(e, "expected two comma-separated numbers `x, z`")),
    }
}

fn flag(e: &Entry) -> Result<bool, ConfigError> {
    match e.value.as_str() {
        "true" | "on" | "yes" => Ok(true),
        "false" | "off" | "no" => Ok(false),
        other => Err(bad(e, format!("`{other}` is not true/false"))),
    }
}

fn integer(e: &Entry) -> Result<usize, ConfigError> {
    e.value.parse().map_err(|_| bad(e, format!("`{}` is not a whole number", e.value)))
}

/// Split `name(args)` into its parts.
fn call(e: &Entry) -> Result<(String, String), ConfigError> {
    let v = e.value.as_str();
    match v.find('(') {
        None => Ok((v.to_string(), String::new())),
        Some(k) => {
            let args = v[k + 1..]
                .strip_suffix(')')
                .ok_or_else(|| bad(e, "missing closing parenthesis"))?;
            Ok((v[..k].trim().to_string(), args.to_string()))
        }
    }
}

fn profile(e: &Entry) -> Result<Profile, ConfigError> {
    let (name, args) = call(e)?;
    match name.as_str() {
        "gaussian" => Ok(Profile::Gaussian),
        "supergaussian" => Ok(Profile::SuperGaussian(number(e, &args)?)),
        "table" => {
            let mut t = Vec::new();
            for pair in args.split(',') {
                let (x, r) = pair
                    .split_once(':')
                    .ok_or_else(|| bad(e, format!("table entry `{}` is not `x:R`", pair.trim())))?;
                t.push((number(e, x)?, number(e, r)?));
            }
            Ok(Profile::Table(t))
        }
        other => Err(bad(e, format!("unknown profile `{other}`"))),
    }
}

fn field(e: &Entry) -> Result<Field, ConfigError> {
    let (name, args) = call(e)?;
    let groups: Vec<&str> = args.split(';').collect();
    match (name.as_str(), groups.as_slice()) {
        ("uniform", [v]) => Ok(Field::Uniform(number(e, v)?)),
        ("linear", [v, g]) => Ok(Field::Linear {
            offset: number(e, v)?,
            gradient: vector(e, g)?,
        }),
        ("bowl", [c, s, top]) => Ok(Field::SaturatedBowl {
            center: vector(e, c)?,
            scale: vector(e, s)?,
            ceiling: number(e, top)?,
        }),
        ("uniform" | "linear" | "bowl", _) => Err(bad(e, "wrong number of `;`-separated arguments")),
        (other, _) => Err(bad(e, format!("unknown field `{other}`"))),
    }
}

pub fn parse_config(text: &str) -> Result<CliConfig, ConfigError> {
    let entries = tokenize(text)?;
    let scenario = entries
        .iter()
        .rev()
        .find(|e| e.section.is_empty() && e.key == "scenario")
        .map(|e| e.value.clone());
    let inline = entries.iter().any(|e| e.section == "medium");

    let (mut launch, mut medium, mut run) = match (&scenario, inline) {
        (Some(_), true) => return Err(ConfigError::ConflictingSetup),
        (None, false) => return Err(ConfigError::MissingScenario),
        (Some(name), false) => {
            let s = make_scenario(name)?;
            (s.launch, s.medium, s.run)
        }
        (None, true) => (
            LaunchConfig::default(),
            MediumSpec::vacuum(Mode::Optical),
            RunConfig::default(),
        ),
    };
    let mut output = PathBuf::from("out");
    let mut emit = Emit::default();
    let mut mode = medium.mode;
    let (mut tau_set, mut z_set) = (false, false);
    let mut field_set = false;

    for e in &entries {
        match (e.section.as_str(), e.key.as_str()) {
            ("", "scenario") => {}
            ("launch", "profile") => launch.profile = profile(e)?,
            ("launch", "n_rays") => launch.n_rays = integer(e)?,
            ("launch", "extent") => launch.extent = number(e, &e.value)?,
            ("launch", "epsilon") => launch.epsilon = number(e, &e.value)?,
            ("launch", "direction") => launch.direction = vector(e, &e.value)?,
            ("launch", "origin") => launch.origin = vector(e, &e.value)?,
            ("launch", "flux_weight") => {
                launch.flux_weight = match e.value.as_str() {
                    "medium" => FluxWeight::Medium,
                    "kinetic" => FluxWeight::Kinetic,
                    "unit" => FluxWeight::Unit,
                    other => return Err(bad(e, format!("unknown flux weight `{other}`"))),
                }
            }
            ("medium", "mode") => {
                mode = match e.value.as_str() {
                    "optical" => Mode::Optical,
                    "matter" => Mode::Matter,
                    other => return Err(bad(e, format!("unknown mode `{other}`"))),
                }
            }
            ("medium", "field") => {
                medium.field = field(e)?;
                field_set = true;
            }
            ("run", "d_tau") => run.d_tau = number(e, &e.value)?,
            ("run", "max_tau") => {
                run.max_tau = Some(number(e, &e.value)?);
                tau_set = true;
            }
            ("run", "max_z") => {
                run.max_z = Some(number(e, &e.value)?);
                z_set = true;
            }
            ("run", "wave_potential") => run.wave_potential_on = flag(e)?,
            ("run", "output_every") => run.output_every = integer(e)?,
            ("run", "reverse") => run.reverse = flag(e)?,
            ("run", "stepping") => {
                run.stepping = match e.value.as_str() {
                    "equal_time" => Stepping::EqualTime,
                    "equal_phase" => Stepping::EqualPhase,
                    other => return Err(bad(e, format!("unknown stepping `{other}`"))),
                }
            }
            ("run", "longitudinal") => {
                run.longitudinal = match e.value.as_str() {
                    "projected" => Longitudinal::Projected,
                    "off" => Longitudinal::Off,
                    other => return Err(bad(e, format!("unknown longitudinal mode `{other}`"))),
                }
            }
            ("run", "execution") => {
                run.execution = match e.value.as_str() {
                    "parallel" => Execution::Parallel,
                    "sequential" => Execution::Sequential,
                    other => return Err(bad(e, format!("unknown execution `{other}`"))),
                }
            }
            ("run", "planes") => run.planes = numbers(e, &e.value)?,
            ("output", "dir") => output = PathBuf::from(&e.value),
            ("output", "trajectories") => emit.trajectories = flag(e)?,
            ("output", "fronts") => emit.fronts = flag(e)?,
            ("output", "intensity") => emit.intensity = flag(e)?,
            ("output", "oracle") => emit.oracle = flag(e)?,
            ("output", "envelope") => emit.envelope = flag(e)?,
            ("output", "svg") => emit.svg = flag(e)?,
            _ => unreachable!("keys are checked by the tokenizer"),
        }
    }
    if field_set {
        medium.mode = mode;
    } else if scenario.is_none() {
        medium = MediumSpec::vacuum(mode);
    }

    if !(launch.epsilon > 0.0 && launch.epsilon < 1.0) {
        return Err(ConfigError::EpsilonOutOfRange(launch.epsilon));
    }
    // An explicit run length replaces the preset's; otherwise runs go to 3 zR.
    match (tau_set, z_set) {
        (true, false) => run.max_z = None,
        (false, true) => run.max_tau = None,
        (false, false) if run.max_tau.is_none() => {
            run.max_z = Some(3.0 * rayleigh_range(launch.epsilon))
        }
        _ => {}
    }
    launch.validate()?;
    run.validate()?;
    Ok(CliConfig {
        scenario,
        launch,
        medium,
        run,
        output,
        emit,
    })
}
