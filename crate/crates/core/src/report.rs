//! Plain SVG trajectory plots.
//!
//! The plot holds three panels: the image plane with ground truth and every
//! prediction as polylines, then x(t) and y(t). Only `polyline`, `rect`,
//! `line` and `text` elements are emitted.

use std::fmt::Write;

use crate::event::LabelTrack;
use crate::track::Trajectory;

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const TRUTH: &str = "#111111";

struct Panel {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

impl Panel {
    fn frame(&self, out: &mut String, title: &str) {
        let _ = writeln!(
            out,
            r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#999"/>"##,
            self.x, self.y, self.w, self.h
        );
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" font-size="13">{title}</text>"#, self.x, self.y - 6.0);
    }

    fn polyline(&self, out: &mut String, pts: impl Iterator<Item = (f64, f64)>, color: &str, dash: bool) {
        let coords: Vec<String> = pts.map(|(x, y)| format!("{:.2},{:.2}", self.x + x * self.w, self.y + y * self.h)).collect();
        if coords.is_empty() {
            return;
        }
        let dash = if dash { r#" stroke-dasharray="4 3""# } else { "" };
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.2"{dash} points="{}"/>"#,
            coords.join(" ")
        );
    }
}

/// Renders ground truth and named predictions for a `width` x `height` sensor.
pub fn trajectory_svg(gt: &LabelTrack, preds: &[(&str, &Trajectory)], width: u16, height: u16) -> String {
    let (sw, sh) = (f64::from(width.max(1)), f64::from(height.max(1)));
    let plane_h = 300.0;
    let plane_w = plane_h * sw / sh;
    let series_w: f64 = 860.0;
    let total_w = series_w.max(plane_w) + 60.0;
    let total_h = 40.0 + plane_h + 40.0 + 2.0 * (180.0 + 40.0) + 20.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w:.0}" height="{total_h:.0}" font-family="monospace">"#
    );
    let plane = Panel { x: 30.0, y: 40.0, w: plane_w, h: plane_h };
    plane.frame(&mut out, "image plane");
    let xs_panel = Panel { x: 30.0, y: 40.0 + plane_h + 40.0, w: series_w, h: 180.0 };
    xs_panel.frame(&mut out, "x(t)");
    let ys_panel = Panel { x: 30.0, y: xs_panel.y + 180.0 + 40.0, w: series_w, h: 180.0 };
    ys_panel.frame(&mut out, "y(t)");

    let n = gt.len().max(preds.iter().map(|(_, p)| p.len()).max().unwrap_or(0)).max(2);
    let t = |i: usize| i as f64 / (n - 1) as f64;
    let mut series = vec![("ground truth", gt.points(), TRUTH)];
    for (k, (name, p)) in preds.iter().enumerate() {
        series.push((name, p.points.clone(), PALETTE[k % PALETTE.len()]));
    }
    for (k, (name, pts, color)) in series.iter().enumerate() {
        let truth = k == 0;
        plane.polyline(&mut out, pts.iter().map(|p| (p[0] / sw, p[1] / sh)), color, !truth);
        xs_panel.polyline(&mut out, pts.iter().enumerate().map(|(i, p)| (t(i), 1.0 - p[0] / sw)), color, !truth);
        ys_panel.polyline(&mut out, pts.iter().enumerate().map(|(i, p)| (t(i), 1.0 - p[1] / sh)), color, !truth);
        let ly = 40.0 + 16.0 * k as f64;
        let lx = plane.x + plane.w + 30.0;
        let _ = writeln!(out, r#"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="2"/>"#, ly - 4.0, lx + 24.0, ly - 4.0);
        let _ = writeln!(out, r#"<text x="{:.1}" y="{ly:.1}" font-size="12">{}</text>"#, lx + 30.0, escape(name));
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
