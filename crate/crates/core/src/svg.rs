//! Minimal SVG line chart for sweep output: log-ρ axis, curves as
//! polylines, reference levels as horizontal lines.

use std::fmt::Write;

use crate::sweep::SweepOutput;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;

const CURVES: [(&str, &str, &str); 3] = [
    ("objective", "#1f77b4", "two-class objective"),
    ("single_q1", "#d62728", "single-class, Q1"),
    ("single_q2", "#2ca02c", "single-class, Q2"),
];

const LEVELS: [(&str, &str, &str, &str); 3] = [
    ("two_class", "#1f77b4", "none", "two-class exponent"),
    ("single_class", "#d62728", "none", "best single-class"),
    ("baseline", "#555555", "9,4,2,4", "random-coding baseline"),
];

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn px(&self, rho: f64) -> f64 {
        LEFT + (rho.log10() - self.x_lo) / (self.x_hi - self.x_lo) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        TOP + (self.y_hi - y) / (self.y_hi - self.y_lo) * (HEIGHT - TOP - BOTTOM)
    }

    fn inside(&self, y: f64) -> bool {
        y.is_finite() && y >= self.y_lo && y <= self.y_hi
    }
}

fn frame(out: &SweepOutput) -> Frame {
    let finite = |v: &f64| v.is_finite();
    let curves: Vec<&[f64]> = CURVES.iter().filter_map(|(n, _, _)| out.column(n)).collect();
    let levels: Vec<f64> = out.levels.iter().map(|l| l.value).filter(finite).collect();
    let top = curves
        .iter()
        .flat_map(|c| c.iter().copied().filter(finite))
        .chain(levels.iter().copied())
        .fold(f64::NEG_INFINITY, f64::max);
    let low = curves
        .iter()
        .filter_map(|c| c.first().copied().filter(finite))
        .chain(levels.iter().copied())
        .fold(f64::INFINITY, f64::min);
    let (top, low) = if top.is_finite() && low.is_finite() { (top, low) } else { (1.0, 0.0) };
    let span = (top - low).max(1e-3);
    Frame {
        x_lo: out.rho[0].log10(),
        x_hi: out.rho[out.rho.len() - 1].log10().max(out.rho[0].log10() + 1e-9),
        y_lo: low - 0.5 * span,
        y_hi: top + 0.1 * span,
    }
}

fn polylines(f: &Frame, rho: &[f64], ys: &[f64], color: &str, svg: &mut String) {
    let mut run: Vec<String> = Vec::new();
    let flush = |run: &mut Vec<String>, svg: &mut String| {
        if run.len() > 1 {
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{}"/>"#,
                run.join(" ")
            );
        }
        run.clear();
    };
    for (&r, &y) in rho.iter().zip(ys) {
        if f.inside(y) {
            run.push(format!("{:.2},{:.2}", f.px(r), f.py(y)));
        } else {
            flush(&mut run, svg);
        }
    }
    flush(&mut run, svg);
}

fn x_ticks(f: &Frame) -> Vec<f64> {
    let mut out = Vec::new();
    let mut decade = 10f64.powf(f.x_lo.floor());
    while decade.log10() <= f.x_hi + 1e-12 {
        for m in [1.0, 2.0, 5.0] {
            let v = m * decade;
            let l = v.log10();
            if l >= f.x_lo - 1e-12 && l <= f.x_hi + 1e-12 {
                out.push(v);
            }
        }
        decade *= 10.0;
    }
    out
}

/// Renders the sweep as a 900×600 SVG 1.1 document.
pub fn render_svg(out: &SweepOutput, title: Option<&str>) -> String {
    let f = frame(out);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>"#
    );
    let (x0, x1) = (LEFT, WIDTH - RIGHT);
    let (y0, y1) = (TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        svg,
        r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );

    for v in x_ticks(&f) {
        let x = f.px(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{y1}" x2="{x:.2}" y2="{y0}" stroke="#e0e0e0"/><text x="{x:.2}" y="{}" text-anchor="middle">{v}</text>"##,
            y1 + 18.0
        );
    }
    for i in 0..=5 {
        let y = f.y_lo + (f.y_hi - f.y_lo) * i as f64 / 5.0;
        let py = f.py(y);
        let _ = writeln!(
            svg,
            r##"<line x1="{x0}" y1="{py:.2}" x2="{x1}" y2="{py:.2}" stroke="#e0e0e0"/><text x="{}" y="{:.2}" text-anchor="end">{y:.3}</text>"##,
            x0 - 6.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">ρ (log scale)</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">nats per channel use</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    if let Some(t) = title {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="30" text-anchor="middle" font-size="15">{}</text>"#,
            (x0 + x1) / 2.0,
            escape(t)
        );
    }

    let mut legend: Vec<(String, &str, &str)> = Vec::new();
    for (name, color, label) in CURVES {
        if let Some(ys) = out.column(name) {
            polylines(&f, &out.rho, ys, color, &mut svg);
            legend.push((label.to_string(), color, "none"));
        }
    }
    for (name, color, dash, label) in LEVELS {
        if let Some(v) = out.level(name) {
            if f.inside(v) {
                let py = f.py(v);
                let _ = writeln!(
                    svg,
                    r#"<line x1="{x0}" y1="{py:.2}" x2="{x1}" y2="{py:.2}" stroke="{color}" stroke-width="1.2" stroke-dasharray="{dash}"/>"#
                );
            }
            legend.push((format!("{label} ({v:.4})"), color, dash));
        }
    }
    for (i, (label, color, dash)) in legend.iter().enumerate() {
        let y = TOP + 15.0 + 20.0 * i as f64;
        let lx = x1 + 10.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="1.8" stroke-dasharray="{dash}"/><text x="{}" y="{}" font-size="11">{}</text>"#,
            lx + 22.0,
            lx + 27.0,
            y + 4.0,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
