//! Hand-written SVG figures: a two-panel counts/CHE plot per series and a
//! comparison of CHE curves.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::emit::{ensure_dir, write_file};
use super::pipeline::ReportDocument;
use crate::error::{Error, Result};

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 640.0;

const LEFT: f64 = 90.0;
const RIGHT: f64 = 930.0;
const COLORS: [&str; 2] = ["#1f4e9c", "#c0392b"];

#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    top: f64,
    bottom: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (RIGHT - LEFT)
    }

    fn py(&self, y: f64) -> f64 {
        self.bottom - (y - self.y0) / (self.y1 - self.y0) * (self.bottom - self.top)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Roughly five round tick values covering [lo, hi].
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(f64::EPSILON);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1000.0 || v.fract() == 0.0 {
        format!("{}", v.round() as i64)
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn header(out: &mut String, title: &str) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, y_label: &str, x_labels: bool) {
    let _ = writeln!(
        out,
        "<rect x=\"{LEFT}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#333\"/>",
        f.top,
        RIGHT - LEFT,
        f.bottom - f.top
    );
    for y in ticks(f.y0, f.y1) {
        let py = f.py(y);
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{LEFT}\" y2=\"{py:.2}\" stroke=\"#333\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            fmt_tick(y)
        );
    }
    for x in ticks(f.x0, f.x1) {
        let px = f.px(x);
        let _ = write!(
            out,
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#333\"/>",
            f.bottom,
            f.bottom + 5.0
        );
        if x_labels {
            let _ = write!(
                out,
                "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
                f.bottom + 20.0,
                fmt_tick(x)
            );
        }
        out.push('\n');
    }
    let cy = (f.top + f.bottom) / 2.0;
    let _ = writeln!(
        out,
        "<text x=\"24\" y=\"{cy:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 24 {cy:.2})\">{}</text>",
        escape(y_label)
    );
}

fn polyline(out: &mut String, f: &Frame, xs: &[f64], ys: &[f64], color: &str) {
    let mut d = String::new();
    for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
        let _ = write!(
            d,
            "{}{:.2},{:.2}",
            if i == 0 { "M" } else { " L" },
            f.px(*x),
            f.py(*y)
        );
    }
    let _ = writeln!(
        out,
        "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>"
    );
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn che_xy(doc: &ReportDocument) -> (Vec<f64>, Vec<f64>) {
    (
        doc.che
            .prefix_end
            .iter()
            .map(|m| m.decimal_year())
            .collect(),
        doc.che.h_values.clone(),
    )
}

fn title_case(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map(|first| first.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

/// Counts on top, chronological Hurst values below, on a shared time axis.
pub fn series_svg(doc: &ReportDocument) -> String {
    let s = &doc.series;
    let tx: Vec<f64> = (0..s.len()).map(|i| s.month_at(i).decimal_year()).collect();
    let (x0, x1) = (tx[0], tx[tx.len() - 1]);
    let (cy0, cy1) = range(s.values().iter().copied());
    let top = Frame {
        x0,
        x1,
        y0: cy0.min(0.0),
        y1: cy1,
        top: 50.0,
        bottom: 300.0,
    };
    let (hx, hy) = che_xy(doc);
    let (hy0, hy1) = range(hy.iter().copied());
    let bottom = Frame {
        x0,
        x1,
        y0: hy0.min(0.4),
        y1: hy1.max(1.1),
        top: 350.0,
        bottom: 590.0,
    };

    let label = title_case(&doc.meta.label);
    let mut out = String::new();
    header(
        &mut out,
        &format!("{label}: monthly counts and chronological Hurst exponent"),
    );
    axes(&mut out, &top, "count", false);
    polyline(&mut out, &top, &tx, s.values(), COLORS[0]);
    axes(&mut out, &bottom, &format!("H ({})", doc.che.method), true);
    for level in [0.5, 1.0] {
        if level > bottom.y0 && level < bottom.y1 {
            let py = bottom.py(level);
            let _ = writeln!(
                out,
                "<line x1=\"{LEFT}\" y1=\"{py:.2}\" x2=\"{RIGHT}\" y2=\"{py:.2}\" stroke=\"#999\" stroke-dasharray=\"2 3\"/>"
            );
        }
    }
    if let Some(p) = &doc.periods {
        for m in [p.p1_end, p.p2_end] {
            let px = bottom.px(m.decimal_year());
            let _ = writeln!(
                out,
                "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#777\" stroke-dasharray=\"6 4\"/><text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\">{m}</text>",
                bottom.top,
                bottom.bottom,
                px + 3.0,
                bottom.top + 12.0
            );
        }
    }
    polyline(&mut out, &bottom, &hx, &hy, COLORS[1]);
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"630\" text-anchor=\"middle\">year (prefix end)</text>\n</svg>",
        (LEFT + RIGHT) / 2.0
    );
    out
}

/// Both chronological Hurst curves on one panel with a legend.
pub fn compare_svg(a: &ReportDocument, b: &ReportDocument) -> String {
    let curves = [che_xy(a), che_xy(b)];
    let (x0, x1) = range(curves.iter().flat_map(|c| c.0.iter().copied()));
    let (y0, y1) = range(curves.iter().flat_map(|c| c.1.iter().copied()));
    let f = Frame {
        x0,
        x1,
        y0: y0.min(0.4),
        y1: y1.max(1.1),
        top: 60.0,
        bottom: 580.0,
    };

    let mut out = String::new();
    header(&mut out, "Chronological Hurst exponent comparison");
    axes(&mut out, &f, "H", true);
    for (i, (doc, (xs, ys))) in [a, b].iter().zip(&curves).enumerate() {
        polyline(&mut out, &f, xs, ys, COLORS[i]);
        let ly = 80.0 + 20.0 * i as f64;
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{}\" stroke-width=\"3\"/><text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            RIGHT - 170.0,
            RIGHT - 140.0,
            COLORS[i],
            RIGHT - 132.0,
            ly + 4.0,
            escape(&title_case(&doc.meta.label))
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"620\" text-anchor=\"middle\">year (prefix end)</text>\n</svg>",
        (LEFT + RIGHT) / 2.0
    );
    out
}

/// Writes `fig_<label>.svg` for each document and, for exactly two
/// documents, `fig_compare.svg`.
pub fn emit_figures(docs: &[ReportDocument], dir: &Path) -> Result<Vec<PathBuf>> {
    if docs.is_empty() {
        return Err(Error::InvalidParameter("no report documents given".into()));
    }
    if docs.len() > 2 {
        return Err(Error::InvalidParameter(format!(
            "at most two report documents, got {}",
            docs.len()
        )));
    }
    ensure_dir(dir)?;
    let mut written = Vec::new();
    for doc in docs {
        let path = dir.join(format!("fig_{}.svg", doc.meta.label));
        write_file(&path, &series_svg(doc))?;
        written.push(path);
    }
    if docs.len() == 2 {
        written.push(emit_comparison(docs, dir)?);
    }
    Ok(written)
}

/// Writes `fig_compare.svg`; requires exactly two documents.
pub fn emit_comparison(docs: &[ReportDocument], dir: &Path) -> Result<PathBuf> {
    let [a, b] = docs else {
        return Err(Error::MissingComparison(docs.len()));
    };
    ensure_dir(dir)?;
    let path = dir.join("fig_compare.svg");
    write_file(&path, &compare_svg(a, b))?;
    Ok(path)
}
