//! Two-panel vector figure: ray trajectories in the (z, x) plane on the
//! left, transverse intensity profiles on the right.

use std::fmt::Write;

const PANEL_W: f64 = 520.0;
const PANEL_H: f64 = 360.0;
const MARGIN: f64 = 50.0;
const GAP: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// A polyline in data coordinates.
pub struct Line {
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    pub width: f64,
    pub dashed: bool,
}

pub struct Profile {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Copy)]
struct Frame {
    x0: f64,
    y0: f64,
    lo: (f64, f64),
    hi: (f64, f64),
}

impl Frame {
    fn fit<'a>(x0: f64, y0: f64, pts: impl Iterator<Item = &'a (f64, f64)>) -> Frame {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(a, b) in pts.filter(|p| p.0.is_finite() && p.1.is_finite()) {
            lo = (lo.0.min(a), lo.1.min(b));
            hi = (hi.0.max(a), hi.1.max(b));
        }
        if !(lo.0 < hi.0) {
            (lo.0, hi.0) = (lo.0.min(0.0) - 1.0, hi.0.max(0.0) + 1.0);
        }
        if !(lo.1 < hi.1) {
            (lo.1, hi.1) = (lo.1.min(0.0) - 1.0, hi.1.max(0.0) + 1.0);
        }
        Frame { x0, y0, lo, hi }
    }

    fn map(&self, (a, b): (f64, f64)) -> (f64, f64) {
        (
            self.x0 + (a - self.lo.0) / (self.hi.0 - self.lo.0) * PANEL_W,
            self.y0 + PANEL_H - (b - self.lo.1) / (self.hi.1 - self.lo.1) * PANEL_H,
        )
    }

    fn axes(&self, out: &mut String, xlabel: &str, ylabel: &str) {
        let _ = writeln!(
            out,
            r##"<rect x="{:.1}" y="{:.1}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="#333"/>"##,
            self.x0, self.y0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">{xlabel}</text>"#,
            self.x0 + PANEL_W / 2.0,
            self.y0 + PANEL_H + 34.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13" transform="rotate(-90 {:.1} {:.1})">{ylabel}</text>"#,
            self.x0 - 34.0,
            self.y0 + PANEL_H / 2.0,
            self.x0 - 34.0,
            self.y0 + PANEL_H / 2.0
        );
        for (v, (px, py), anchor) in [
            (self.lo.0, self.map((self.lo.0, self.lo.1)), "start"),
            (self.hi.0, self.map((self.hi.0, self.lo.1)), "end"),
        ] {
            let _ = writeln!(
                out,
                r#"<text x="{px:.1}" y="{:.1}" text-anchor="{anchor}" font-size="11">{v:.3}</text>"#,
                py + 16.0
            );
        }
        for (v, (px, py)) in [
            (self.lo.1, self.map((self.lo.0, self.lo.1))),
            (self.hi.1, self.map((self.lo.0, self.hi.1))),
        ] {
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="11">{v:.3}</text>"#,
                px - 4.0,
                py + 4.0
            );
        }
    }

    fn polyline(&self, out: &mut String, pts: &[(f64, f64)], color: &str, width: f64, dashed: bool) {
        let coords: Vec<String> = pts
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        if coords.len() < 2 {
            return;
        }
        let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="{width}"{dash} points="{}"/>"#,
            coords.join(" ")
        );
    }
}

pub fn render(title: &str, rays: &[Line], profiles: &[Profile]) -> String {
    let width = 2.0 * PANEL_W + 2.0 * MARGIN + GAP;
    let height = PANEL_H + 2.0 * MARGIN + 20.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{title}</text>"#,
        width / 2.0
    );

    let left = Frame::fit(MARGIN, MARGIN, rays.iter().flat_map(|l| l.points.iter()));
    left.axes(&mut out, "z / w0", "x / w0");
    for l in rays {
        left.polyline(&mut out, &l.points, l.color, l.width, l.dashed);
    }

    let right = Frame::fit(
        MARGIN + PANEL_W + GAP,
        MARGIN,
        profiles.iter().flat_map(|p| p.points.iter()),
    );
    right.axes(&mut out, "x / w0", "intensity (peak = 1)");
    for (k, p) in profiles.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        right.polyline(&mut out, &p.points, color, 1.5, false);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" fill="{color}">{}</text>"#,
            right.x0 + 8.0,
            right.y0 + 16.0 + 14.0 * k as f64,
            p.label
        );
    }
    out.push_str("</svg>\n");
    out
}
