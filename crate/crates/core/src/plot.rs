//! Deterministic SVG output: log-log exponent plots and a residual heat map.

use crate::analysis::ExponentFit;
use crate::error::{Error, Result};
use std::fmt::Write;

const W: f64 = 480.0;
const H: f64 = 360.0;
const PAD: f64 = 48.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn sx(&self, x: f64) -> f64 {
        PAD + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * PAD)
    }
    fn sy(&self, y: f64) -> f64 {
        H - PAD - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * PAD)
    }
}

fn span(lo: f64, hi: f64) -> (f64, f64) {
    let pad = ((hi - lo) * 0.08).max(0.1);
    (lo - pad, hi + pad)
}

/// Points `(log Lip, log |deg|)`, the fitted line, and a reference line of
/// slope `target` through the centroid.
pub fn exponent_svg(fit: &ExponentFit, target: f64, title: &str) -> Result<String> {
    if fit.points.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            got: fit.points.len(),
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = fit.points.iter().copied().unzip();
    let (xl, xh) = (xs.iter().copied().fold(f64::INFINITY, f64::min), xs.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let (yl, yh) = (ys.iter().copied().fold(f64::INFINITY, f64::min), ys.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let (x0, x1) = span(xl, xh);
    let (y0, y1) = span(yl, yh);
    let f = Frame { x0, x1, y0, y1 };
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
    writeln!(s, r##"<rect width="{W}" height="{H}" fill="#ffffff"/>"##).unwrap();
    writeln!(
        s,
        r##"<rect x="{PAD}" y="{PAD}" width="{:.3}" height="{:.3}" fill="none" stroke="#444444"/>"##,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    )
    .unwrap();
    writeln!(s, r#"<text x="{PAD}" y="{:.3}" font-size="14" font-family="sans-serif">{}</text>"#, PAD - 16.0, escape(title)).unwrap();
    writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="11" font-family="sans-serif" text-anchor="middle">log Lip</text>"#, W / 2.0, H - 12.0).unwrap();
    writeln!(s, r#"<text x="14" y="{:.3}" font-size="11" font-family="sans-serif" transform="rotate(-90 14 {:.3})" text-anchor="middle">log |deg|</text>"#, H / 2.0, H / 2.0).unwrap();

    let line = |s: &mut String, slope: f64, icpt: f64, color: &str, dash: &str| {
        let (a, b) = (x0, x1);
        writeln!(
            s,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="1.5"{dash} clip-path="url(#plot)"/>"#,
            f.sx(a),
            f.sy(icpt + slope * a),
            f.sx(b),
            f.sy(icpt + slope * b)
        )
        .unwrap();
    };
    writeln!(
        s,
        r#"<clipPath id="plot"><rect x="{PAD}" y="{PAD}" width="{:.3}" height="{:.3}"/></clipPath>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    )
    .unwrap();
    line(&mut s, fit.slope, fit.intercept, "#1f77b4", "");
    line(&mut s, target, my - target * mx, "#d62728", r#" stroke-dasharray="6 4""#);
    for (x, y) in &fit.points {
        writeln!(s, r##"<circle cx="{:.3}" cy="{:.3}" r="4" fill="#1f77b4"/>"##, f.sx(*x), f.sy(*y)).unwrap();
    }
    writeln!(
        s,
        r##"<text x="{:.3}" y="{:.3}" font-size="11" font-family="sans-serif" fill="#1f77b4">fit {:.4}</text>"##,
        PAD + 8.0,
        PAD + 16.0,
        fit.slope
    )
    .unwrap();
    writeln!(
        s,
        r##"<text x="{:.3}" y="{:.3}" font-size="11" font-family="sans-serif" fill="#d62728">target {:.4}</text>"##,
        PAD + 8.0,
        PAD + 30.0,
        target
    )
    .unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}

/// Heat map of `values[row][col]` on a `(η, φ)` grid, log-scaled.
pub fn field_svg(values: &[Vec<f64>], title: &str) -> Result<String> {
    let rows = values.len();
    let cols = values.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 || values.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidParameter("field grid must be rectangular and non-empty".into()));
    }
    let logs: Vec<f64> = values.iter().flatten().map(|v| v.max(1e-300).log10()).collect();
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (cw, ch) = ((W - 2.0 * PAD) / cols as f64, (H - 2.0 * PAD) / rows as f64);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
    writeln!(s, r##"<rect width="{W}" height="{H}" fill="#ffffff"/>"##).unwrap();
    writeln!(s, r#"<text x="{PAD}" y="{:.3}" font-size="14" font-family="sans-serif">{}</text>"#, PAD - 16.0, escape(title)).unwrap();
    for (i, row) in values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let t = if hi > lo { (v.max(1e-300).log10() - lo) / (hi - lo) } else { 0.5 };
            let (r, b) = ((255.0 * t).round() as u8, (255.0 * (1.0 - t)).round() as u8);
            writeln!(
                s,
                r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#{r:02x}40{b:02x}"/>"##,
                PAD + j as f64 * cw,
                PAD + i as f64 * ch,
                cw,
                ch
            )
            .unwrap();
        }
    }
    writeln!(
        s,
        r#"<text x="{PAD}" y="{:.3}" font-size="11" font-family="sans-serif">log10 range [{lo:.2}, {hi:.2}]</text>"#,
        H - 16.0
    )
    .unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
