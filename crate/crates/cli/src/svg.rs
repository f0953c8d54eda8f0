//! Minimal SVG line and bar charts.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD_L: f64 = 70.0;
const PAD_R: f64 = 20.0;
const PAD_T: f64 = 40.0;
const PAD_B: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" font-size="16" text-anchor="middle" font-family="sans-serif">{}</text>"#, W / 2.0, escape(title));
    s
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-300 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn axes(s: &mut String, xlabel: &str, ylabel: &str, y: (f64, f64)) {
    let (x0, x1, y0, y1) = (PAD_L, W - PAD_R, PAD_T, H - PAD_B);
    let _ = writeln!(s, r#"<path d="M{x0} {y0} L{x0} {y1} L{x1} {y1}" stroke="black" fill="none"/>"#);
    for t in 0..=4 {
        let v = y.0 + (y.1 - y.0) * t as f64 / 4.0;
        let py = y1 - (y1 - y0) * t as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end" font-family="sans-serif">{}</text>"#, x0 - 6.0, py + 4.0, fmt_tick(v));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="13" text-anchor="middle" font-family="sans-serif">{}</text>"#, (x0 + x1) / 2.0, H - 12.0, escape(xlabel));
    let _ = writeln!(s, r#"<text x="16" y="{}" font-size="13" text-anchor="middle" font-family="sans-serif" transform="rotate(-90 16 {})">{}</text>"#, (y0 + y1) / 2.0, (y0 + y1) / 2.0, escape(ylabel));
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}").trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// One polyline per series over a shared x axis.
pub fn line_chart(title: &str, xlabel: &str, x: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let mut s = header(title);
    let xr = range(x.iter().copied());
    let yr = range(series.iter().flat_map(|(_, v)| v.iter().copied()));
    axes(&mut s, xlabel, "", yr);
    let px = |v: f64| PAD_L + (W - PAD_L - PAD_R) * (v - xr.0) / (xr.1 - xr.0);
    let py = |v: f64| H - PAD_B - (H - PAD_T - PAD_B) * (v - yr.0) / (yr.1 - yr.0);
    for (i, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = x
            .iter()
            .zip(ys)
            .filter(|(_, y)| y.is_finite())
            .map(|(&a, &b)| format!("{:.2},{:.2}", px(a), py(b)))
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" stroke="{color}" fill="none" stroke-width="1.5"/>"#, pts.join(" "));
        let ly = PAD_T + 16.0 * i as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12" fill="{color}" font-family="sans-serif">{}</text>"#, W - PAD_R - 150.0, ly + 12.0, escape(name));
    }
    s.push_str("</svg>\n");
    s
}

/// Bars at categorical positions.
pub fn bar_chart(title: &str, xlabel: &str, labels: &[String], values: &[f64]) -> String {
    let mut s = header(title);
    let top = values.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max).max(1e-300);
    axes(&mut s, xlabel, "", (0.0, top));
    let n = labels.len().max(1) as f64;
    let slot = (W - PAD_L - PAD_R) / n;
    for (i, (label, &v)) in labels.iter().zip(values).enumerate() {
        let h = (H - PAD_T - PAD_B) * (v.max(0.0) / top);
        let x = PAD_L + slot * i as f64 + slot * 0.15;
        let _ = writeln!(s, r#"<rect x="{x:.2}" y="{:.2}" width="{:.2}" height="{h:.2}" fill="{}"/>"#, H - PAD_B - h, slot * 0.7, COLORS[0]);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{}" font-size="11" text-anchor="middle" font-family="sans-serif">{}</text>"#, x + slot * 0.35, H - PAD_B + 14.0, escape(label));
    }
    s.push_str("</svg>\n");
    s
}
