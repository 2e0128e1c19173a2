//! CSV traces and static SVG convergence plots.

use std::fmt::Write as _;

use undernewton::SolveTrace;

/// 17 significant digits in scientific notation.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// `k,residual,step_norm`; the last row has an empty step column.
pub fn trace_csv(trace: &SolveTrace) -> String {
    let mut out = String::from("k,residual,step_norm\n");
    for (k, r) in trace.residual_norms.iter().enumerate() {
        let step = trace.step_norms.get(k).map(|s| fmt_float(*s)).unwrap_or_default();
        writeln!(out, "{k},{},{step}", fmt_float(*r)).unwrap();
    }
    out
}

/// `k,residual_project,residual_polyak`; a series that stopped earlier
/// leaves its column empty.
pub fn compare_csv(project: &[f64], polyak: &[f64]) -> String {
    let mut out = String::from("k,residual_project,residual_polyak\n");
    let cell = |s: &[f64], k: usize| s.get(k).map(|v| fmt_float(*v)).unwrap_or_default();
    for k in 0..project.len().max(polyak.len()) {
        writeln!(out, "{k},{},{}", cell(project, k), cell(polyak, k)).unwrap();
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
/// Values at or below zero are drawn at this level.
const DISPLAY_FLOOR: f64 = 1e-17;
const COLORS: [&str; 4] = ["#009bfa", "#e26f46", "#3da44d", "#c271d2"];

/// Log-scale line plot of one or more series against `k`.
pub fn convergence_svg(title: &str, series: &[(&str, &[f64])]) -> String {
    let logs: Vec<Vec<f64>> = series
        .iter()
        .map(|(_, s)| s.iter().map(|v| v.max(DISPLAY_FLOOR).log10()).collect())
        .collect();
    let all = logs.iter().flatten().copied();
    let (lo, hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let (y_lo, mut y_hi) = if lo.is_finite() { (lo.floor(), hi.ceil()) } else { (-1.0, 0.0) };
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let k_max = series.iter().map(|(_, s)| s.len()).max().unwrap_or(0).saturating_sub(1).max(1) as f64;

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |k: f64| LEFT + plot_w * k / k_max;
    let py = |l: f64| TOP + plot_h * (y_hi - l) / (y_hi - y_lo);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(svg, r#"<title>{}</title>"#, escape(title)).unwrap();
    writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();

    // decade grid and labels
    let step = ((y_hi - y_lo) / 10.0).ceil().max(1.0);
    let mut e = y_lo;
    while e <= y_hi + 1e-9 {
        let y = py(e);
        writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#000" stroke-opacity="0.1"/>"##,
            LEFT,
            LEFT + plot_w
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            e as i64
        )
        .unwrap();
        e += step;
    }
    let k_step = (k_max / 10.0).ceil().max(1.0);
    let mut k = 0.0;
    while k <= k_max + 1e-9 {
        let x = px(k);
        writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + plot_h + 16.0,
            k as i64
        )
        .unwrap();
        k += k_step;
    }
    writeln!(
        svg,
        r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="#000"/>"##
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">k</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">‖G(x^k)‖</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    )
    .unwrap();

    for (i, ((label, _), l)) in series.iter().zip(&logs).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = l
            .iter()
            .enumerate()
            .map(|(k, v)| format!("{:.2},{:.2}", px(k as f64), py(*v)))
            .collect();
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        )
        .unwrap();
        let ly = TOP + 14.0 + 16.0 * i as f64;
        let lx = LEFT + plot_w + 12.0;
        writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="1.5"/>"#,
            ly - 4.0,
            lx + 18.0,
            ly - 4.0
        )
        .unwrap();
        writeln!(svg, r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#, lx + 24.0, escape(label)).unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
