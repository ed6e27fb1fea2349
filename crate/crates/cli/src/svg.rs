//! Minimal SVG figures: a fidelity heatmap for sweeps and line plots for
//! trajectories.

use std::fmt::Write as _;

use crate::experiments::{CrosscheckResult, Curve, SweepResult};

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / span(self.x) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y.0) / span(self.y) * (H - TOP - BOTTOM)
    }
}

fn span(r: (f64, f64)) -> f64 {
    if r.1 > r.0 {
        r.1 - r.0
    } else {
        1.0
    }
}

fn header(s: &mut String, title: &str) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
}

fn axes(s: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    let _ = writeln!(s, r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y1 - y0);
    for k in 0..=4 {
        let fx = f.x.0 + span(f.x) * k as f64 / 4.0;
        let fy = f.y.0 + span(f.y) * k as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, f.px(fx), y1 + 16.0, tick(fx));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, x0 - 6.0, f.py(fy) + 4.0, tick(fy));
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, (x0 + x1) / 2.0, H - 10.0, escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn colour(v: f64) -> String {
    let v = v.clamp(0.0, 1.0);
    let r = (255.0 * v.powf(0.7)) as u8;
    let g = (255.0 * (1.0 - (2.0 * v - 1.0).abs()).max(0.0).powf(0.8) * 0.85) as u8;
    let b = (255.0 * (1.0 - v).powf(0.7)) as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Heatmap of fidelity over ancilla gap `h_b` (x) and collision count `n` (y).
pub fn sweep_heatmap(r: &SweepResult) -> String {
    let mut s = String::new();
    header(&mut s, "Fidelity to the Gibbs state");
    let n_max = r.collisions();
    let (h0, h1) = bounds(r.h_b.iter().copied());
    let dh = if r.h_b.len() > 1 { (h1 - h0) / (r.h_b.len() - 1) as f64 } else { 1.0 };
    let frame = Frame { x: (h0 - dh / 2.0, h1 + dh / 2.0), y: (-0.5, n_max as f64 + 0.5) };
    let (lo, hi) = bounds(r.fidelity.iter().flatten().copied());
    let norm = |v: f64| if hi > lo { (v - lo) / (hi - lo) } else { 1.0 };
    for (h_b, row) in r.h_b.iter().zip(&r.fidelity) {
        for (n, &f) in row.iter().enumerate() {
            let (x0, x1) = (frame.px(h_b - dh / 2.0), frame.px(h_b + dh / 2.0));
            let (y0, y1) = (frame.py(n as f64 + 0.5), frame.py(n as f64 - 0.5));
            let _ = writeln!(
                s,
                r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                x1 - x0 + 0.3,
                y1 - y0 + 0.3,
                colour(norm(f))
            );
        }
    }
    axes(&mut s, &frame, "ancilla field h_b (rad/ns)", "collisions n");
    let bar_x = W - RIGHT + 20.0;
    for k in 0..50 {
        let v = k as f64 / 49.0;
        let y = H - BOTTOM - v * (H - TOP - BOTTOM);
        let _ = writeln!(s, r#"<rect x="{bar_x}" y="{:.2}" width="16" height="{:.2}" fill="{}"/>"#, y - 7.0, 7.5, colour(v));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, bar_x + 22.0, TOP + 8.0, tick(hi));
    let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, bar_x + 22.0, H - BOTTOM, tick(lo));
    s.push_str("</svg>\n");
    s
}

fn lines(title: &str, ylabel: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut s = String::new();
    header(&mut s, title);
    let x = bounds(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)));
    let mut y = bounds(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)));
    if !y.0.is_finite() {
        y = (0.0, 1.0);
    }
    let pad = 0.05 * span(y);
    let frame = Frame { x: if x.0.is_finite() { x } else { (0.0, 1.0) }, y: (y.0 - pad, y.1 + pad) };
    axes(&mut s, &frame, "time (ns)", ylabel);
    for (i, (label, pts)) in series.iter().enumerate() {
        let c = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(a, b)| format!("{:.2},{:.2}", frame.px(a), frame.py(b))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        let ly = TOP + 14.0 + 16.0 * i as f64;
        let lx = W - RIGHT + 10.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{}" x2="{}" y2="{}" stroke="{c}" stroke-width="2"/>"#, ly - 4.0, lx + 18.0, ly - 4.0);
        let _ = writeln!(s, r#"<text x="{}" y="{ly}">{}</text>"#, lx + 22.0, escape(label));
    }
    s.push_str("</svg>\n");
    s
}

/// Fidelity against time, one polyline per curve.
pub fn fidelity_plot(title: &str, curves: &[Curve]) -> String {
    let series: Vec<(String, Vec<(f64, f64)>)> = curves
        .iter()
        .map(|c| (c.label.clone(), c.trajectory.samples.iter().map(|s| (s.t, s.fidelity)).collect()))
        .collect();
    lines(title, "fidelity", &series)
}

pub fn crosscheck_plot(r: &CrosscheckResult) -> String {
    lines("Collision engine vs master equation", "trace distance", &[("trace distance".into(), r.rows.clone())])
}
