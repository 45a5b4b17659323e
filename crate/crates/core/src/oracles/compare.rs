use crate::beamcore::TrajectoryRecord;
use crate::oracles::bpm::{second_moment_width, FieldGrid};
use crate::{Error, Result};

/// Discrepancy between two transverse intensity profiles, each normalized
/// to a unit peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonReport {
    /// `||I_a - I_b|| / ||I_b||` over the reference grid.
    pub l2: f64,
    /// Peak position of `a` minus that of `b`.
    pub peak_offset: f64,
    /// Second-moment width of `a` over that of `b`.
    pub width_ratio: f64,
}

fn linear_resample(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
        return 0.0;
    }
    let k = xs.partition_point(|&v| v <= x);
    if k == 0 {
        return ys[0];
    }
    if k == xs.len() {
        return ys[xs.len() - 1];
    }
    let (x0, x1) = (xs[k - 1], xs[k]);
    let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 1.0 };
    ys[k - 1] + t * (ys[k] - ys[k - 1])
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Compare samples `(xs, a)` (sorted by `xs`, zero outside their span)
/// against a reference profile `b` on `grid`.
pub fn compare_profiles(xs: &[f64], a: &[f64], grid: &[f64], b: &[f64]) -> Result<ComparisonReport> {
    let resampled: Vec<f64> = grid.iter().map(|&x| linear_resample(xs, a, x)).collect();
    let peak_a = resampled.iter().copied().fold(0.0, f64::max);
    let peak_b = b.iter().copied().fold(0.0, f64::max);
    if !(peak_a > 0.0 && peak_b > 0.0) {
        return Err(Error::NonOverlapping { z: f64::NAN });
    }
    let overlap: f64 = resampled.iter().zip(b).map(|(p, q)| p * q).sum();
    if !(overlap > 0.0) {
        return Err(Error::NonOverlapping { z: f64::NAN });
    }
    let na: Vec<f64> = resampled.iter().map(|v| v / peak_a).collect();
    let nb: Vec<f64> = b.iter().map(|v| v / peak_b).collect();
    let diff: f64 = na.iter().zip(&nb).map(|(p, q)| (p - q) * (p - q)).sum();
    let norm: f64 = nb.iter().map(|q| q * q).sum();
    Ok(ComparisonReport {
        l2: (diff / norm).sqrt(),
        peak_offset: grid[argmax(&na)] - grid[argmax(&nb)],
        width_ratio: second_moment_width(grid, &na) / second_moment_width(grid, &nb),
    })
}

/// Ray intensity where the run crossed plane `z` against the field at the
/// stored plane nearest to `z`. The run must have been configured with `z`
/// among its planes.
pub fn intensity_compare(
    record: &TrajectoryRecord,
    field: &FieldGrid,
    z: f64,
) -> Result<ComparisonReport> {
    let cut = record.plane_cut(z).ok_or_else(|| {
        Error::InvalidConfig(format!("run recorded no crossings of plane z = {z}"))
    })?;
    let alive = &record.last_front().rays;
    let mut samples: Vec<(f64, f64)> = cut
        .x
        .iter()
        .zip(&cut.intensity)
        .zip(alive)
        .filter(|((x, i), r)| r.alive && x.is_finite() && i.is_finite())
        .map(|((&x, &i), _)| (x, i))
        .collect();
    if samples.len() < 2 {
        return Err(Error::NonOverlapping { z });
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (xs, is): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
    let plane = field.plane_index(z);
    compare_profiles(&xs, &is, &field.x, &field.intensity(plane)).map_err(|e| match e {
        Error::NonOverlapping { .. } => Error::NonOverlapping { z },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile() -> (Vec<f64>, Vec<f64>) {
        let x: Vec<f64> = (0..401).map(|i| -10.0 + i as f64 * 0.05).collect();
        let i = x.iter().map(|x| (-(x - 0.3) * (x - 0.3) / 2.0).exp()).collect();
        (x, i)
    }

    #[test]
    fn identical_profiles_agree_exactly() {
        let (x, i) = profile();
        let r = compare_profiles(&x, &i, &x, &i).unwrap();
        assert_eq!(r.l2, 0.0);
        assert_eq!(r.peak_offset, 0.0);
        assert_eq!(r.width_ratio, 1.0);
    }

    #[test]
    fn peak_normalization_removes_scale() {
        let (x, i) = profile();
        let doubled: Vec<f64> = i.iter().map(|v| 2.0 * v).collect();
        let r = compare_profiles(&x, &doubled, &x, &i).unwrap();
        assert_eq!(r.l2, 0.0);
    }

    #[test]
    fn shifted_profile_reports_offset() {
        let (x, i) = profile();
        let shifted: Vec<f64> = x.iter().map(|v| v + 1.0).collect();
        let r = compare_profiles(&shifted, &i, &x, &i).unwrap();
        assert!((r.peak_offset - 1.0).abs() < 1e-9);
        assert!(r.l2 > 0.1);
    }

    #[test]
    fn disjoint_supports_are_rejected() {
        let (x, i) = profile();
        let far: Vec<f64> = (0..10).map(|k| 100.0 + k as f64).collect();
        let ones = vec![1.0; 10];
        assert!(matches!(
            compare_profiles(&far, &ones, &x, &i),
            Err(Error::NonOverlapping { .. })
        ));
    }
}
