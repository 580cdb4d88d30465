//! Line charts of annual series as standalone SVG.
//!
//! Output depends only on the input values and labels: fixed canvas, fixed
//! palette, axis ranges padded 5% past the data, ticks at 1/2/5 steps and
//! every coordinate printed with two decimals.

use std::fmt::Write as _;
use std::path::Path;

use super::io::write_file;
use crate::error::{Error, Result};
use crate::timeseries::AnnualSeries;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 40.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];
const TARGET_TICKS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    /// Data extremes padded by 5% on each side. A zero-width range is
    /// opened symmetrically so the data sits in the middle.
    fn padded(lo: f64, hi: f64) -> Self {
        let span = hi - lo;
        if span > 0.0 {
            Range {
                lo: lo - 0.05 * span,
                hi: hi + 0.05 * span,
            }
        } else {
            let half = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
            Range {
                lo: lo - half,
                hi: hi + half,
            }
        }
    }

    fn frac(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }
}

/// Step of the form 1, 2 or 5 times a power of ten giving roughly
/// `TARGET_TICKS` intervals over `span`.
pub fn nice_step(span: f64) -> f64 {
    let raw = span / TARGET_TICKS;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let m = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn ticks(r: Range, step: f64) -> Vec<f64> {
    let first = (r.lo / step).ceil() as i64;
    let last = (r.hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn decimals(step: f64) -> usize {
    (-step.log10().floor()).max(0.0) as usize
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Renders the series as one chart. Each series is labelled in the legend
/// by its own label.
pub fn render_svg(title: &str, series: &[AnnualSeries]) -> Result<String> {
    if series.is_empty() {
        return Err(Error::InsufficientData("nothing to plot".into()));
    }
    let (ylo, yhi) = series
        .iter()
        .flat_map(|s| s.values())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let xlo = series.iter().map(|s| s.start_year()).min().unwrap_or(0) as f64;
    let xhi = series.iter().map(|s| s.end_year()).max().unwrap_or(0) as f64;
    let xr = Range::padded(xlo, xhi);
    let yr = Range::padded(ylo, yhi);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + xr.frac(x) * pw;
    let py = |y: f64| TOP + (1.0 - yr.frac(y)) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="18" text-anchor="middle" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    let xstep = nice_step(xr.hi - xr.lo).max(1.0);
    for t in ticks(xr, xstep) {
        let x = px(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            TOP,
            TOP + ph
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 16.0,
            t as i64
        );
    }
    let ystep = nice_step(yr.hi - yr.lo);
    let yd = decimals(ystep);
    for t in ticks(yr, ystep) {
        let y = py(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            LEFT,
            LEFT + pw
        );
        // Avoid printing "-0.00".
        let label = format!("{:.*}", yd, if t.abs() < ystep * 1e-9 { 0.0 } else { t });
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .iter()
            .map(|(year, v)| format!("{:.2},{:.2}", px(year as f64), py(v)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 14.0 + 16.0 * i as f64;
        let lx = LEFT + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(s.label())
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_plot(title: &str, series: &[AnnualSeries], path: &Path) -> Result<()> {
    write_file(path, &render_svg(title, series)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeseries::Unit;

    fn s(start: i32, v: Vec<f64>, label: &str) -> AnnualSeries {
        AnnualSeries::new(start, v, Unit::RatePerYear, label).unwrap()
    }

    fn polylines(svg: &str) -> Vec<&str> {
        svg.lines().filter(|l| l.starts_with("<polyline")).collect()
    }

    #[test]
    fn constant_series_is_drawn_at_mid_canvas() {
        let svg = render_svg("flat", &[s(1990, vec![0.03; 10], "c")]).unwrap();
        let lines = polylines(&svg);
        assert_eq!(lines.len(), 1);
        let mid = TOP + (HEIGHT - TOP - BOTTOM) / 2.0;
        let points = lines[0]
            .split("points=\"")
            .nth(1)
            .unwrap()
            .trim_end_matches("\"/>");
        for p in points.split(' ') {
            let y: f64 = p.split(',').nth(1).unwrap().parse().unwrap();
            assert_eq!(y, (mid * 100.0).round() / 100.0);
        }
    }

    #[test]
    fn identical_series_coincide_with_both_labels() {
        let a = s(1990, vec![0.01, 0.03, 0.02, 0.05], "measured");
        let b = a.clone().with_label("predicted");
        let svg = render_svg("x", &[a, b]).unwrap();
        let lines = polylines(&svg);
        assert_eq!(lines.len(), 2);
        let pts = |l: &str| l.split("points=").nth(1).unwrap().to_string();
        assert_eq!(pts(lines[0]), pts(lines[1]));
        assert!(svg.contains(">measured</text>") && svg.contains(">predicted</text>"));
    }

    #[test]
    fn output_is_deterministic() {
        let a = s(
            1960,
            (0..40).map(|i| (i as f64 * 0.3).sin() * 0.02).collect(),
            "a <&> b",
        );
        let first = render_svg("t", std::slice::from_ref(&a)).unwrap();
        assert_eq!(first, render_svg("t", &[a]).unwrap());
        assert!(first.contains("a &lt;&amp;&gt; b"));
    }

    #[test]
    fn empty_set_is_an_error() {
        assert!(render_svg("t", &[]).is_err());
    }

    #[test]
    fn nice_steps() {
        assert_eq!(nice_step(60.0), 10.0);
        assert_eq!(nice_step(0.12), 0.02);
        assert!((nice_step(3.0) - 0.5).abs() < 1e-15);
        assert_eq!(decimals(0.02), 2);
        assert_eq!(decimals(10.0), 0);
    }
}
