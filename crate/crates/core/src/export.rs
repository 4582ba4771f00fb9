//! CSV and SVG writers for traces, oracle timelines, error reports and
//! error surfaces. Output is deterministic byte for byte.

use std::fmt::Write as _;

use crate::analysis::{ErrorReport, ErrorSurface};
use crate::ir::SpeciesName;
use crate::oracle::OracleTimeline;
use crate::simulator::Trace;

/// C's `%.17g`: 17 significant digits, trailing zeros removed, exponent
/// form outside `1e-4 ≤ |x| < 1e17`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    strip_zeros(&format!("{x:.decimals$}"))
}

fn strip_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `time,<species...>` then one row per trace point.
pub fn trace_csv(trace: &Trace) -> String {
    let mut out = String::from("time");
    for s in &trace.species {
        out.push(',');
        out.push_str(&s.to_string());
    }
    out.push('\n');
    for (t, row) in trace.times.iter().zip(&trace.states) {
        out.push_str(&format_g17(*t));
        for v in row {
            out.push(',');
            out.push_str(&format_g17(*v));
        }
        out.push('\n');
    }
    out
}

/// `cycle,phase,<species...>,flag`, one row per phase occurrence.
pub fn timeline_csv(timeline: &OracleTimeline) -> String {
    let mut out = String::from("cycle,phase");
    for s in &timeline.species {
        out.push(',');
        out.push_str(s);
    }
    out.push_str(",flag\n");
    for e in &timeline.entries {
        let _ = write!(out, "{},{}", e.cycle, e.phase);
        for s in &timeline.species {
            out.push(',');
            out.push_str(&format_g17(e.env[s].to_f64()));
        }
        let _ = writeln!(out, ",{}", e.flag);
    }
    out
}

/// `species,occurrence,cycle,phase,time,simulated,expected,error,undefined`.
pub fn error_report_csv(report: &ErrorReport) -> String {
    let mut out = String::from("species,occurrence,cycle,phase,time,simulated,expected,error,undefined\n");
    for s in &report.tracked {
        for r in &s.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                s.species,
                r.occurrence,
                r.cycle,
                r.phase,
                format_g17(r.time),
                format_g17(r.simulated),
                format_g17(r.expected),
                format_g17(r.error),
                r.undefined
            );
        }
    }
    out
}

/// Matrix with operand `a` down the rows and `b` across the columns.
pub fn surface_csv(surface: &ErrorSurface) -> String {
    let mut out = String::from("a\\b");
    for b in &surface.values {
        out.push(',');
        out.push_str(&format_g17(*b));
    }
    out.push('\n');
    for (a, row) in surface.values.iter().zip(&surface.errors) {
        out.push_str(&format_g17(*a));
        for e in row {
            out.push(',');
            out.push_str(&format_g17(*e));
        }
        out.push('\n');
    }
    out
}

const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const MAX_POINTS: usize = 4000;

/// A named series of `(x, y)` points.
pub struct Series<'a> {
    pub name: String,
    pub xs: &'a [f64],
    pub ys: Vec<f64>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Line chart of several series sharing one x axis.
pub fn line_chart_svg(title: &str, x_label: &str, series: &[Series<'_>]) -> String {
    let (x0, x1) = bounds(series.iter().flat_map(|s| s.xs.iter().copied()));
    let (y0, y1) = bounds(series.iter().flat_map(|s| s.ys.iter().copied()));
    let (y0, y1) = (y0.min(0.0), y1 + 0.05 * (y1 - y0.min(0.0)));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, LEFT + pw / 2.0, escape(title));
    let _ = writeln!(out, r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##);
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(out, r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="#ddd"/>"##, TOP + ph);
        let _ = writeln!(out, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, tick(xv));
        let _ = writeln!(out, r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ddd"/>"##, LEFT + pw);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 6.0, py + 4.0, tick(yv));
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 10.0, escape(x_label));
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let stride = (s.xs.len() / MAX_POINTS).max(1);
        let mut points = String::new();
        for i in (0..s.xs.len().min(s.ys.len())).filter(|i| i % stride == 0 || i + 1 == s.xs.len()) {
            if s.ys[i].is_finite() {
                let _ = write!(points, "{:.2},{:.2} ", sx(s.xs[i]), sy(s.ys[i]));
            }
        }
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, points.trim_end());
        let ly = TOP + 16.0 * k as f64 + 10.0;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(out, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/>"#, lx + 18.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 24.0, ly + 4.0, escape(&s.name));
    }
    out.push_str("</svg>\n");
    out
}

fn tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.3}");
        strip_zeros(&s)
    }
}

/// Chart of the named species over time. Unknown names are skipped.
pub fn trace_svg(trace: &Trace, species: &[SpeciesName], title: &str) -> String {
    let series: Vec<Series<'_>> = species
        .iter()
        .filter_map(|s| Some(Series { name: s.to_string(), xs: &trace.times, ys: trace.column(s)? }))
        .collect();
    line_chart_svg(title, "time", &series)
}

/// Continuous error curve of every tracked species.
pub fn error_svg(report: &ErrorReport, title: &str) -> String {
    let series: Vec<Series<'_>> = report
        .tracked
        .iter()
        .zip(&report.curve.errors)
        .map(|(s, e)| Series { name: format!("|{} error|", s.species), xs: &report.curve.times, ys: e.clone() })
        .collect();
    line_chart_svg(title, "time", &series)
}

fn color_ramp(f: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 5] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.25, [59.0, 82.0, 139.0]),
        (0.5, [33.0, 145.0, 140.0]),
        (0.75, [94.0, 201.0, 98.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let f = if f.is_finite() { f.clamp(0.0, 1.0) } else { 0.0 };
    let k = STOPS.iter().position(|(p, _)| *p >= f).unwrap_or(4).max(1);
    let ((p0, c0), (p1, c1)) = (STOPS[k - 1], STOPS[k]);
    let w = (f - p0) / (p1 - p0);
    let c: Vec<u8> = (0..3).map(|i| (c0[i] + w * (c1[i] - c0[i])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Heatmap of an error surface with `a` on the vertical axis.
pub fn surface_svg(surface: &ErrorSurface) -> String {
    let n = surface.values.len().max(1);
    let size = 400.0;
    let cell = size / n as f64;
    let (left, top) = (70.0, 40.0);
    let (lo, hi) = bounds(surface.errors.iter().flatten().copied());
    let mut out = String::new();
    let (w, h) = (left + size + 130.0, top + size + 60.0);
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{} error after t = {}</text>"#,
        left + size / 2.0,
        escape(&surface.module),
        tick(surface.duration)
    );
    for (i, row) in surface.errors.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let x = left + j as f64 * cell;
            let y = top + size - (i + 1) as f64 * cell;
            let _ = writeln!(
                out,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"><title>a={} b={} error={}</title></rect>"#,
                cell + 0.2,
                cell + 0.2,
                color_ramp((e - lo) / (hi - lo)),
                format_g17(surface.values[i]),
                format_g17(surface.values[j]),
                format_g17(*e)
            );
        }
    }
    let step = (n / 5).max(1);
    for (k, v) in surface.values.iter().enumerate().filter(|(k, _)| k % step == 0) {
        let c = (k as f64 + 0.5) * cell;
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, left + c, top + size + 16.0, tick(*v));
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, left - 6.0, top + size - c + 4.0, tick(*v));
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">b</text>"#, left + size / 2.0, top + size + 40.0);
    let _ = writeln!(out, r#"<text x="20" y="{}" text-anchor="middle">a</text>"#, top + size / 2.0);
    let bar_x = left + size + 30.0;
    for k in 0..50 {
        let f = k as f64 / 49.0;
        let y = top + size - (k + 1) as f64 * size / 50.0;
        let _ = writeln!(out, r#"<rect x="{bar_x}" y="{y:.2}" width="20" height="{:.2}" fill="{}"/>"#, size / 50.0 + 0.2, color_ramp(f));
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, bar_x + 26.0, top + 10.0, tick(hi));
    let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, bar_x + 26.0, top + size, tick(lo));
    out.push_str("</svg>\n");
    out
}
