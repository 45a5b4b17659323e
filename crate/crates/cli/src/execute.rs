//! Run orchestration and file output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use helmray::beamcore::{rayleigh_range, PlaneCut, TrajectoryRecord, WaveFront};
use helmray::closure::flux_speed;
use helmray::oracles::{BpmGrid, FieldGrid};
use helmray::{
    bpm_solve, build_launch, intensity_compare, paraxial_envelope, run, Mode, Termination,
};
use thiserror::Error;

use crate::config::CliConfig;
use crate::svg;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Invalid = 2,
    Aborted = 3,
}

#[derive(Debug, Error)]
pub enum ExecError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl ExecError {
    pub fn status(&self) -> Status {
        Status::Invalid
    }
}

/// Number of trajectories drawn in the figure.
const FIGURE_RAYS: usize = 41;
/// Samples along the analytic envelope.
const ENVELOPE_SAMPLES: usize = 201;

fn write_file(path: &Path, text: &str) -> Result<(), ExecError> {
    fs::write(path, text).map_err(|source| ExecError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, ExecError> {
    let file = fs::File::create(path).map_err(|source| ExecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(csv::Writer::from_writer(file))
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Rays and crossings at one plane, sorted by `x`, with the intensity
/// normalized to a unit peak.
fn profile_at(cut: &PlaneCut) -> Vec<(usize, f64, f64)> {
    let mut pts: Vec<(usize, f64, f64)> = (0..cut.x.len())
        .filter(|&i| cut.x[i].is_finite() && cut.intensity[i].is_finite())
        .map(|i| (i, cut.x[i], cut.intensity[i]))
        .collect();
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    let peak = pts.iter().map(|p| p.2).fold(0.0, f64::max);
    if peak > 0.0 {
        for p in &mut pts {
            p.2 /= peak;
        }
    }
    pts
}

fn launch_cut(front: &WaveFront, cfg: &CliConfig) -> PlaneCut {
    let intensity = front
        .rays
        .iter()
        .zip(&front.amp)
        .map(|(r, a)| a * a * flux_speed(front.flux_weight, r.kappa, r.xi, &cfg.medium))
        .collect();
    PlaneCut {
        z: cfg.launch.origin.y,
        x: front.rays.iter().map(|r| r.xi.x).collect(),
        amp: front.amp.clone(),
        intensity,
    }
}

fn oracle_value(field: &FieldGrid, plane: usize, peak: f64, x: f64) -> f64 {
    let n = field.x.len();
    let t = (x - field.x[0]) / field.dx;
    if !(t >= 0.0 && t <= (n - 1) as f64) {
        return 0.0;
    }
    let k = (t.floor() as usize).min(n - 2);
    let f = t - k as f64;
    let row = &field.u[plane];
    ((1.0 - f) * row[k].norm_sqr() + f * row[k + 1].norm_sqr()) / peak
}

struct Outputs<'a> {
    cfg: &'a CliConfig,
    rec: &'a TrajectoryRecord,
    cuts: Vec<PlaneCut>,
    oracle: Option<FieldGrid>,
    comparisons: Vec<String>,
    notes: Vec<String>,
}

impl Outputs<'_> {
    fn tau_unit(&self) -> &'static str {
        match self.cfg.medium.mode {
            Mode::Optical => "tau[w0/c]",
            Mode::Matter => "tau[w0*m/p0]",
        }
    }

    fn trajectories(&self, dir: &Path) -> Result<(), ExecError> {
        let mut w = csv_writer(&dir.join("trajectories.csv"))?;
        w.write_record([
            "ray_id",
            "step",
            self.tau_unit(),
            "x[w0]",
            "z[w0]",
            "kx[k0]",
            "kz[k0]",
            "R[launch peak]",
            "W[dimensionless]",
        ])?;
        for (k, f) in self.rec.fronts.iter().enumerate() {
            let step = self.rec.steps[k].to_string();
            for (i, r) in f.rays.iter().enumerate() {
                w.write_record([
                    i.to_string(),
                    step.clone(),
                    num(r.tau),
                    num(r.xi.x),
                    num(r.xi.y),
                    num(r.kappa.x),
                    num(r.kappa.y),
                    num(f.amp[i]),
                    num(self.rec.wave_potential[k][i]),
                ])?;
            }
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    fn fronts(&self, dir: &Path) -> Result<(), ExecError> {
        let mut w = csv_writer(&dir.join("fronts.csv"))?;
        w.write_record(["step", "ray_id", "sigma[w0]", "R[launch peak]"])?;
        for (k, f) in self.rec.fronts.iter().enumerate() {
            let step = self.rec.steps[k].to_string();
            for i in f.alive_indices() {
                w.write_record([step.clone(), i.to_string(), num(f.sigma[i]), num(f.amp[i])])?;
            }
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    fn intensity(&self, dir: &Path) -> Result<(), ExecError> {
        let mut w = csv_writer(&dir.join("intensity.csv"))?;
        w.write_record(["plane[w0]", "x[w0]", "I_ray[peak]", "I_oracle[peak]"])?;
        for cut in &self.cuts {
            let oracle = self.oracle.as_ref().map(|f| {
                let plane = f.plane_index(cut.z);
                let peak = f.intensity(plane).into_iter().fold(0.0, f64::max);
                (f, plane, peak)
            });
            for (_, x, i) in profile_at(cut) {
                let o = match oracle {
                    Some((f, plane, peak)) => num(oracle_value(f, plane, peak, x)),
                    None => String::new(),
                };
                w.write_record([num(cut.z), num(x), num(i), o])?;
            }
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    fn z_span(&self) -> (f64, f64) {
        let z0 = self.cfg.launch.origin.y;
        let z1 = self
            .rec
            .fronts
            .iter()
            .flat_map(|f| f.rays.iter().map(|r| r.xi.y))
            .fold(z0, f64::max);
        (z0, z1)
    }

    fn envelope_points(&self) -> Vec<(f64, f64)> {
        let (z0, z1) = self.z_span();
        (0..ENVELOPE_SAMPLES)
            .map(|k| {
                let z = (z1 - z0) * k as f64 / (ENVELOPE_SAMPLES - 1) as f64;
                (z0 + z, paraxial_envelope(z, self.cfg.launch.epsilon))
            })
            .collect()
    }

    fn envelope(&self, dir: &Path) -> Result<(), ExecError> {
        let mut w = csv_writer(&dir.join("envelope.csv"))?;
        w.write_record(["z[w0]", "x_paraxial[w0]"])?;
        for (z, x) in self.envelope_points() {
            w.write_record([num(z), num(x)])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    fn figure(&self, dir: &Path) -> Result<(), ExecError> {
        let n = self.rec.fronts[0].len();
        let every = n.div_ceil(FIGURE_RAYS).max(1);
        let (ea, eb) = self.rec.envelope_rays;
        let mut lines: Vec<svg::Line> = (0..n)
            .filter(|&i| i % every == 0 || i == n - 1 || i == ea || i == eb)
            .map(|i| {
                let envelope_ray = i == ea || i == eb;
                svg::Line {
                    points: self
                        .rec
                        .fronts
                        .iter()
                        .filter(|f| f.rays[i].alive)
                        .map(|f| (f.rays[i].xi.y, f.rays[i].xi.x))
                        .collect(),
                    color: if envelope_ray { "#d62728" } else { "#555" },
                    width: if envelope_ray { 1.6 } else { 0.6 },
                    dashed: false,
                }
            })
            .collect();
        if self.cfg.emit.envelope {
            let env = self.envelope_points();
            for sign in [1.0, -1.0] {
                lines.push(svg::Line {
                    points: env.iter().map(|&(z, x)| (z, sign * x)).collect(),
                    color: "#1f77b4",
                    width: 1.2,
                    dashed: true,
                });
            }
        }
        let profiles: Vec<svg::Profile> = self
            .cuts
            .iter()
            .map(|c| svg::Profile {
                label: format!("z = {:.3}", c.z),
                points: profile_at(c).into_iter().map(|(_, x, i)| (x, i)).collect(),
            })
            .collect();
        let title = format!("{}: rays and transverse intensity", self.cfg.label());
        write_file(&dir.join("figure.svg"), &svg::render(&title, &lines, &profiles))
    }

    fn summary(&self) -> String {
        let rec = self.rec;
        let mut s = String::new();
        let _ = writeln!(s, "scenario: {}", self.cfg.label());
        let _ = writeln!(s, "mode: {:?}", self.cfg.medium.mode);
        let _ = writeln!(
            s,
            "epsilon: {}  alpha: {:e}  zR: {}",
            self.cfg.launch.epsilon,
            self.cfg.launch.alpha(),
            rayleigh_range(self.cfg.launch.epsilon)
        );
        let _ = writeln!(s, "rays: {}", rec.fronts[0].len());
        let _ = writeln!(s, "wave potential: {}", if self.cfg.run.wave_potential_on { "on" } else { "off" });
        let _ = writeln!(s, "termination: {}", rec.termination);
        let _ = writeln!(s, "steps: {}", rec.steps_taken);
        let last = rec.last_front();
        let mid = last.len() / 2;
        let _ = writeln!(s, "final tau (center ray): {}", last.rays[mid].tau);
        let _ = writeln!(s, "max residual |D~|: {:e}", rec.max_residual);
        let p0 = rec.power[0];
        let p1 = *rec.power.last().unwrap_or(&p0);
        let _ = writeln!(s, "power drift: {:e}", (p1 - p0) / p0);
        let (ea, eb) = rec.envelope_rays;
        let f0 = &rec.fronts[0];
        let _ = writeln!(
            s,
            "envelope rays: {} and {} (launched at x = {}, {})",
            ea, eb, f0.launch_x[ea], f0.launch_x[eb]
        );
        let (tau_min, w_min) = rec
            .envelope_width
            .iter()
            .copied()
            .fold((f64::NAN, f64::INFINITY), |m, (t, w)| if w < m.1 { (t, w) } else { m });
        let _ = writeln!(s, "minimum front width: {w_min:e} at tau = {tau_min}");
        for cut in &self.cuts {
            let crossed = cut.x.iter().filter(|x| x.is_finite()).count();
            let _ = writeln!(s, "plane z = {}: {crossed} of {} rays crossed", cut.z, cut.x.len());
        }
        for line in &self.comparisons {
            let _ = writeln!(s, "{line}");
        }
        for note in &self.notes {
            let _ = writeln!(s, "note: {note}");
        }
        s
    }
}

/// Run the configured problem and write every requested file into the
/// output directory. The summary is written whenever the run started.
pub fn execute(cfg: &CliConfig) -> Result<Status, ExecError> {
    let launch = build_launch(&cfg.launch, &cfg.medium).map_err(|e| ExecError::Invalid(e.to_string()))?;
    let mut run_cfg = cfg.run.clone();
    if cfg.emit.intensity || cfg.emit.svg {
        if let (true, Some(z)) = (run_cfg.planes.is_empty(), run_cfg.max_z) {
            run_cfg.planes.push(z);
        }
    }
    let dir = cfg.output.as_path();
    fs::create_dir_all(dir).map_err(|source| ExecError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let summary_path = dir.join("summary.txt");

    let rec = match run(&launch, &cfg.medium, &run_cfg) {
        Ok(rec) => rec,
        Err(e) if e.is_numerical() => {
            write_file(
                &summary_path,
                &format!("scenario: {}\ntermination: {e}\n", cfg.label()),
            )?;
            return Ok(Status::Aborted);
        }
        Err(e) => return Err(ExecError::Invalid(e.to_string())),
    };

    let mut cuts = vec![launch_cut(&rec.fronts[0], cfg)];
    cuts.extend(rec.plane_cuts.iter().cloned());
    let mut notes = Vec::new();
    let oracle = if cfg.emit.oracle && !run_cfg.planes.is_empty() {
        let z_max = run_cfg.planes.iter().copied().fold(0.0, f64::max);
        let grid = BpmGrid {
            z_max,
            planes: run_cfg.planes.clone(),
            ..BpmGrid::default()
        };
        match bpm_solve(&cfg.launch, &cfg.medium, &grid) {
            Ok(f) => Some(f),
            Err(e) => {
                notes.push(format!("split-step oracle unavailable: {e}"));
                None
            }
        }
    } else {
        None
    };
    let mut comparisons = Vec::new();
    if let Some(field) = &oracle {
        for &z in &run_cfg.planes {
            match intensity_compare(&rec, field, z) {
                Ok(c) => comparisons.push(format!(
                    "oracle L2 at z = {z}: {:e} (peak offset {:e}, width ratio {})",
                    c.l2, c.peak_offset, c.width_ratio
                )),
                Err(e) => notes.push(format!("no oracle comparison at z = {z}: {e}")),
            }
        }
    }
    let out = Outputs {
        cfg,
        rec: &rec,
        cuts,
        oracle,
        comparisons,
        notes,
    };
    if cfg.emit.trajectories {
        out.trajectories(dir)?;
    }
    if cfg.emit.fronts {
        out.fronts(dir)?;
    }
    if cfg.emit.intensity {
        out.intensity(dir)?;
    }
    if cfg.emit.envelope {
        out.envelope(dir)?;
    }
    if cfg.emit.svg {
        out.figure(dir)?;
    }
    write_file(&summary_path, &out.summary())?;
    Ok(match rec.termination {
        Termination::ReachedTarget => Status::Success,
        _ => Status::Aborted,
    })
}
