//! Minimal hand-rolled SVG polyline plots for check series.

use crate::report::Check;

const W: f64 = 640.0;
const H: f64 = 480.0;
const ML: f64 = 70.0; // left margin
const MR: f64 = 20.0;
const MT: f64 = 40.0;
const MB: f64 = 55.0;

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

/// One SVG per non-empty series; empty series are skipped with a warning on
/// stderr. Log-log series drop non-positive points (with a warning) before
/// taking log10.
pub fn emit_plots(checks: &[Check]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for check in checks {
        let Some(series) = &check.series else { continue };
        if series.points.is_empty() {
            eprintln!("warning: empty series for check {}; plot skipped", check.id);
            continue;
        }
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for &(x, y) in &series.points {
            if series.log_log {
                if x > 0.0 && y > 0.0 {
                    pts.push((x.log10(), y.log10()));
                } else {
                    eprintln!(
                        "warning: dropping non-positive point ({x}, {y}) from log-log plot {}",
                        check.id
                    );
                }
            } else {
                pts.push((x, y));
            }
        }
        if pts.is_empty() {
            eprintln!("warning: series for check {} is empty after filtering; plot skipped", check.id);
            continue;
        }
        let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        // avoid a degenerate viewport for constant series
        if x1 - x0 < 1e-12 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 - y0 < 1e-12 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let px = |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
        let py = |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);
        let poly: Vec<String> = pts.iter().map(|&(x, y)| format!("{},{}", fmt(px(x)), fmt(py(y)))).collect();
        let markers: String = pts
            .iter()
            .map(|&(x, y)| {
                format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#1f4e79\"/>",
                    fmt(px(x)),
                    fmt(py(y))
                )
            })
            .collect();
        let x_label = if series.log_log {
            format!("log10({})", series.x_label)
        } else {
            series.x_label.clone()
        };
        let y_label = if series.log_log {
            format!("log10({})", series.y_label)
        } else {
            series.y_label.clone()
        };
        let svg = format!(
            concat!(
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
                "viewBox=\"0 0 {w} {h}\">\n",
                "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
                "<text x=\"{tx}\" y=\"22\" text-anchor=\"middle\" font-family=\"monospace\" ",
                "font-size=\"14\">{title}</text>\n",
                "<line x1=\"{ml}\" y1=\"{yb}\" x2=\"{xr}\" y2=\"{yb}\" stroke=\"black\"/>\n",
                "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{yb}\" stroke=\"black\"/>\n",
                "<text x=\"{tx}\" y=\"{xlab_y}\" text-anchor=\"middle\" font-family=\"monospace\" ",
                "font-size=\"12\">{xlab}</text>\n",
                "<text x=\"16\" y=\"{ty}\" text-anchor=\"middle\" font-family=\"monospace\" ",
                "font-size=\"12\" transform=\"rotate(-90 16 {ty})\">{ylab}</text>\n",
                "<text x=\"{ml}\" y=\"{tick_y}\" font-family=\"monospace\" font-size=\"10\">{xmin}</text>\n",
                "<text x=\"{xr}\" y=\"{tick_y}\" text-anchor=\"end\" font-family=\"monospace\" ",
                "font-size=\"10\">{xmax}</text>\n",
                "<text x=\"{tick_x}\" y=\"{yb}\" text-anchor=\"end\" font-family=\"monospace\" ",
                "font-size=\"10\">{ymin}</text>\n",
                "<text x=\"{tick_x}\" y=\"{mt2}\" text-anchor=\"end\" font-family=\"monospace\" ",
                "font-size=\"10\">{ymax}</text>\n",
                "<polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1.5\" points=\"{poly}\"/>\n",
                "{markers}\n",
                "</svg>\n"
            ),
            w = W,
            h = H,
            ml = ML,
            mt = MT,
            mt2 = MT + 4.0,
            xr = W - MR,
            yb = H - MB,
            tx = (ML + W - MR) / 2.0,
            ty = (MT + H - MB) / 2.0,
            xlab_y = H - 12.0,
            tick_y = H - MB + 16.0,
            tick_x = ML - 6.0,
            title = xml_escape(&format!("{}: {}", check.id, check.anchor)),
            xlab = xml_escape(&x_label),
            ylab = xml_escape(&y_label),
            xmin = fmt(x0),
            xmax = fmt(x1),
            ymin = fmt(y0),
            ymax = fmt(y1),
            poly = poly.join(" "),
            markers = markers,
        );
        out.push((format!("{}.svg", check.id), svg));
    }
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
