//! CSV and SVG renderings of an instance.
//!
//! Sampling is sequential and index-ordered, so output bytes are a pure
//! function of config + flags.

use afif_core::{depth_for_tolerance, eval_point, AlphaFractalSpec};
use anyhow::{Context, Result};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

pub struct PlotData {
    pub xs: Vec<f64>,
    pub germ: Vec<f64>,
    pub fractal: Vec<f64>,
    pub depth: u32,
    pub error_bound: f64,
}

/// Sample germ and interpolant on `n` uniform abscissae at the certified
/// depth for `tol`.
pub fn sample(spec: &AlphaFractalSpec, n: usize, tol: f64) -> Result<PlotData> {
    anyhow::ensure!(n >= 2, "need at least two samples");
    let (lo, hi) = (spec.partition().lower(), spec.partition().upper());
    let depth = depth_for_tolerance(spec, tol);
    let mut xs = Vec::with_capacity(n);
    let mut germ = Vec::with_capacity(n);
    let mut fractal = Vec::with_capacity(n);
    let mut error_bound = 0.0f64;
    for j in 0..n {
        // Endpoint blend instead of offset+step: with dyadic sample counts
        // this mirrors bitwise when the interval is mirrored, so flipped
        // plots line up with original ones sample by sample.
        let t = j as f64 / (n - 1) as f64;
        let x = if j == n - 1 { hi } else { lo * (1.0 - t) + hi * t };
        let r = eval_point(spec, x, depth).context("evaluation failed")?;
        xs.push(x);
        germ.push(spec.germ().eval(x).context("germ evaluation failed")?);
        fractal.push(r.value);
        error_bound = error_bound.max(r.error_bound);
    }
    Ok(PlotData {
        xs,
        germ,
        fractal,
        depth,
        error_bound,
    })
}

/// `x,f,f_alpha` rows at 17 significant digits.
pub fn write_csv(data: &PlotData, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(data.xs.len() * 64);
    out.push_str("x,f,f_alpha\n");
    for j in 0..data.xs.len() {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e}",
            data.xs[j], data.germ[j], data.fractal[j]
        )?;
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 62.0;
const MARGIN_R: f64 = 18.0;
const MARGIN_T: f64 = 18.0;
const MARGIN_B: f64 = 44.0;

/// Self-contained polyline chart: interpolant in dark red, germ (when
/// `overlay_germ`) in steel blue, inline axes/ticks/legend, no external
/// assets.
pub fn write_svg(data: &PlotData, path: &Path, overlay_germ: bool) -> Result<()> {
    let (x_min, x_max) = (data.xs[0], *data.xs.last().expect("non-empty plot"));
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (j, &y) in data.fractal.iter().enumerate() {
        y_min = y_min.min(y);
        y_max = y_max.max(y);
        if overlay_germ {
            y_min = y_min.min(data.germ[j]);
            y_max = y_max.max(data.germ[j]);
        }
    }
    if y_min == y_max {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    let to_px = |x: f64, y: f64| -> (f64, f64) {
        let px = MARGIN_L + (x - x_min) / (x_max - x_min) * (WIDTH - MARGIN_L - MARGIN_R);
        let py = HEIGHT - MARGIN_B - (y - y_min) / (y_max - y_min) * (HEIGHT - MARGIN_T - MARGIN_B);
        (px, py)
    };
    let polyline = |ys: &[f64]| -> String {
        let mut pts = String::with_capacity(ys.len() * 16);
        for (j, &y) in ys.iter().enumerate() {
            let (px, py) = to_px(data.xs[j], y);
            let _ = write!(pts, "{px:.2},{py:.2} ");
        }
        pts.trim_end().to_string()
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#)?;

    // axes
    let (ox, oy) = (MARGIN_L, HEIGHT - MARGIN_B);
    writeln!(
        svg,
        r#"<line x1="{ox}" y1="{oy}" x2="{}" y2="{oy}" stroke="black" stroke-width="1"/>"#,
        WIDTH - MARGIN_R
    )?;
    writeln!(
        svg,
        r#"<line x1="{ox}" y1="{oy}" x2="{ox}" y2="{MARGIN_T}" stroke="black" stroke-width="1"/>"#
    )?;
    for k in 0..=4 {
        let xv = x_min + (x_max - x_min) * k as f64 / 4.0;
        let (px, _) = to_px(xv, y_min);
        writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{oy}" x2="{px:.2}" y2="{}" stroke="black" stroke-width="1"/>"#,
            oy + 5.0
        )?;
        writeln!(
            svg,
            r#"<text x="{px:.2}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            oy + 20.0,
            tick_label(xv)
        )?;
        let yv = y_min + (y_max - y_min) * k as f64 / 4.0;
        let (_, py) = to_px(x_min, yv);
        writeln!(
            svg,
            r#"<line x1="{}" y1="{py:.2}" x2="{ox}" y2="{py:.2}" stroke="black" stroke-width="1"/>"#,
            ox - 5.0
        )?;
        writeln!(
            svg,
            r#"<text x="{}" y="{py:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            ox - 9.0,
            tick_label(yv)
        )?;
    }

    if overlay_germ {
        writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.2"/>"#,
            polyline(&data.germ)
        )?;
    }
    writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="firebrick" stroke-width="1"/>"#,
        polyline(&data.fractal)
    )?;

    // legend
    let lx = WIDTH - MARGIN_R - 150.0;
    let mut ly = MARGIN_T + 12.0;
    writeln!(
        svg,
        r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="firebrick" stroke-width="2"/>"#,
        lx + 26.0
    )?;
    writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13">f_alpha</text>"#,
        lx + 32.0,
        ly + 4.0
    )?;
    if overlay_germ {
        ly += 18.0;
        writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="steelblue" stroke-width="2"/>"#,
            lx + 26.0
        )?;
        writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13">f</text>"#,
            lx + 32.0,
            ly + 4.0
        )?;
    }
    writeln!(svg, "</svg>")?;
    fs::write(path, svg).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() >= 0.001 && v.abs() < 10000.0 {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.2e}")
    }
}
