//! Deterministic standalone SVG line charts.
//!
//! No plotting dependency earns its keep here: the charts are a handful of
//! polylines with ticks and a legend, and hand-rolling them keeps the output
//! byte-reproducible across runs and platforms.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use kanesim_core::{ObservableSeries, ScenarioRun, TrackedObservable};

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 560.0;
const ML: f64 = 72.0;
const MR: f64 = 24.0;
const MT: f64 = 40.0;
const MB: f64 = 56.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Density cap: long runs are decimated to at most this many points per
/// curve (the final sample is always kept).
const MAX_POINTS: usize = 2000;

pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Tick step of the form {1, 2, 5} x 10^k giving roughly `target` intervals.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let factor = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    factor * mag
}

fn tick_values(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = (lo / step).ceil() as i64;
    loop {
        let t = k as f64 * step;
        if t > hi + step * 1e-9 {
            break;
        }
        out.push(t);
        k += 1;
    }
    out
}

/// Tick labels use fixed decimals derived from the step so neighbouring
/// labels agree in width; 15-digit rendering would expose float noise in
/// values like 0.30000000000000004.
fn tick_label(t: f64, step: f64) -> String {
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor() as i32).clamp(0, 9) as usize
    };
    let text = format!("{:.*}", decimals, t);
    if text == "-0" || text.starts_with("-0.") && text[1..].parse::<f64>() == Ok(0.0) {
        text[1..].to_string()
    } else {
        text
    }
}

fn bounds(curves: &[Curve]) -> ((f64, f64), (f64, f64)) {
    let mut xlo = f64::INFINITY;
    let mut xhi = f64::NEG_INFINITY;
    let mut ylo = f64::INFINITY;
    let mut yhi = f64::NEG_INFINITY;
    for c in curves {
        for &(x, y) in &c.points {
            xlo = xlo.min(x);
            xhi = xhi.max(x);
            ylo = ylo.min(y);
            yhi = yhi.max(y);
        }
    }
    if !xlo.is_finite() || xhi <= xlo {
        xlo = 0.0;
        xhi = 1.0;
    }
    if !ylo.is_finite() {
        ylo = 0.0;
        yhi = 1.0;
    } else if yhi <= ylo {
        ylo -= 0.5;
        yhi += 0.5;
    } else {
        let pad = (yhi - ylo) * 0.05;
        ylo -= pad;
        yhi += pad;
    }
    ((xlo, xhi), (ylo, yhi))
}

fn decimate(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = points.len();
    if n <= MAX_POINTS {
        return points.to_vec();
    }
    let stride = n.div_ceil(MAX_POINTS);
    let mut out: Vec<(f64, f64)> = points.iter().copied().step_by(stride).collect();
    if out.last() != points.last() {
        out.push(*points.last().unwrap());
    }
    out
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, curves: &[Curve]) -> String {
    let ((xlo, xhi), (ylo, yhi)) = bounds(curves);
    let pw = WIDTH - ML - MR;
    let ph = HEIGHT - MT - MB;
    let sx = |x: f64| ML + (x - xlo) / (xhi - xlo) * pw;
    let sy = |y: f64| MT + ph - (y - ylo) / (yhi - ylo) * ph;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        ML + pw / 2.0,
        escape(title)
    ));

    let xstep = nice_step(xhi - xlo, 8.0);
    let ystep = nice_step(yhi - ylo, 6.0);
    for t in tick_values(xlo, xhi, xstep) {
        let px = sx(t);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>\n",
            MT,
            MT + ph
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n",
            MT + ph + 18.0,
            tick_label(t, xstep)
        ));
    }
    for t in tick_values(ylo, yhi, ystep) {
        let py = sy(t);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#dddddd\"/>\n",
            ML,
            ML + pw
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"12\">{}</text>\n",
            ML - 8.0,
            py + 4.0,
            tick_label(t, ystep)
        ));
    }
    svg.push_str(&format!(
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"#333333\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
        ML + pw / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"13\" \
transform=\"rotate(-90 18 {:.2})\">{}</text>\n",
        MT + ph / 2.0,
        MT + ph / 2.0,
        escape(y_label)
    ));

    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts = decimate(&curve.points);
        let mut path = String::with_capacity(pts.len() * 14);
        for (k, &(x, y)) in pts.iter().enumerate() {
            path.push_str(if k == 0 { "M" } else { " L" });
            path.push_str(&format!("{:.2} {:.2}", sx(x), sy(y)));
        }
        svg.push_str(&format!(
            "<path d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
        ));
    }

    // legend, top-right inside the plot area
    let lx = ML + pw - 180.0;
    let mut ly = MT + 16.0;
    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        svg.push_str(&format!(
            "<line x1=\"{lx:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
stroke=\"{color}\" stroke-width=\"2\"/>\n",
            ly - 4.0,
            lx + 24.0,
            ly - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{ly:.2}\" font-size=\"12\">{}</text>\n",
            lx + 30.0,
            escape(&curve.label)
        ));
        ly += 18.0;
    }

    svg.push_str("</svg>\n");
    svg
}

/// All four observables of one run on a shared axis.
pub fn series_svg(s: &ObservableSeries, title: &str) -> String {
    let curves = [
        ("purity", &s.purity),
        ("entropy", &s.entropy),
        ("bloch_norm", &s.bloch_norm),
        ("fidelity", &s.fidelity),
    ]
    .into_iter()
    .map(|(label, values)| Curve {
        label: label.to_string(),
        points: s.tau.iter().copied().zip(values.iter().copied()).collect(),
    })
    .collect::<Vec<_>>();
    line_chart(title, "tau", "observable", &curves)
}

/// One tracked observable across every parameter combination of a scenario.
pub fn runs_svg(runs: &[ScenarioRun], tracked: TrackedObservable, title: &str) -> String {
    let curves: Vec<Curve> = runs
        .iter()
        .map(|run| Curve {
            label: format!("theta={:.4}, kappa={:.4}", run.theta, run.kappa),
            points: run
                .series
                .tau
                .iter()
                .copied()
                .zip(tracked.values(&run.series).iter().copied())
                .collect(),
        })
        .collect();
    line_chart(title, "tau", tracked.name(), &curves)
}

pub fn write_svg(svg: &str, path: &Path) -> Result<()> {
    fs::write(path, svg).with_context(|| format!("writing {}", path.display()))
}
