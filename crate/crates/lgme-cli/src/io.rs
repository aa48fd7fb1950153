//! Artifact writers: versioned CSV, a small self-contained SVG line chart,
//! and the plain-text Fock state dump.
//!
//! All floating-point output goes through [`fmt_f64`] (17 significant
//! digits) so identical inputs produce byte-identical files.

use std::io::{self, Write};
use std::path::Path;

use lgme_core::fock::FockState;

use crate::sweep::SweepRow;

/// Formats with 17 significant digits (round-trip exact for f64).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub const CSV_SCHEMA: &str = "schema=1";
pub const CSV_HEADER: &str =
    "experiment,lambda,kind,m1,m2,m3,m4,lgme_lower,lgme_upper,gaussian_opt,gaussian_closed,residual,n_max,flagged";

/// Renders rows as CSV text. The first line is the schema version, the
/// second the column header. Wall-clock timings are deliberately not a
/// column: they would break byte-identical reruns.
pub fn csv_text(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(CSV_SCHEMA);
    out.push('\n');
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.experiment,
            fmt_f64(r.lambda),
            r.kind,
            r.photons[0],
            r.photons[1],
            r.photons[2],
            r.photons[3],
            fmt_f64(r.lgme_lower),
            fmt_f64(r.lgme_upper),
            fmt_opt(r.gaussian_opt),
            fmt_opt(r.gaussian_closed),
            fmt_f64(r.residual),
            r.n_max,
            u8::from(r.flagged),
        ));
    }
    out
}

pub fn write_csv(path: &Path, rows: &[SweepRow]) -> io::Result<()> {
    std::fs::write(path, csv_text(rows))
}

/// One line per amplitude, `n1 n2 n3 n4 amplitude`, lexicographically
/// sorted by occupation tuple (the state's iteration order).
pub fn dump_state(path: &Path, state: &FockState) -> io::Result<()> {
    let mut f = io::BufWriter::new(std::fs::File::create(path)?);
    for (occ, amp) in state.iter() {
        let nums: Vec<String> = occ.iter().map(|n| n.to_string()).collect();
        writeln!(f, "{} {}", nums.join(" "), fmt_f64(amp))?;
    }
    f.flush()
}

const SVG_W: f64 = 720.0;
const SVG_H: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 180.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Minimal line chart: axes, min/max tick labels, one polyline per series,
/// legend on the right. No external plotting dependency.
pub fn write_svg(
    path: &Path,
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[(String, Vec<(f64, f64)>)],
) -> io::Result<()> {
    let pts: Vec<(f64, f64)> = series.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-300 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-300 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * (SVG_W - MARGIN_L - MARGIN_R);
    let py = |y: f64| SVG_H - MARGIN_B - (y - y0) / (y1 - y0) * (SVG_H - MARGIN_T - MARGIN_B);

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    s.push_str(&format!(
        "<rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>\n"
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{title}</text>\n",
        (MARGIN_L + SVG_W - MARGIN_R) / 2.0
    ));
    // axes
    s.push_str(&format!(
        "<line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{b}\" stroke=\"black\"/>\n",
        l = MARGIN_L,
        r = SVG_W - MARGIN_R,
        t = MARGIN_T,
        b = SVG_H - MARGIN_B,
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{xlabel}</text>\n",
        (MARGIN_L + SVG_W - MARGIN_R) / 2.0,
        SVG_H - 12.0
    ));
    s.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{ylabel}</text>\n",
        (MARGIN_T + SVG_H - MARGIN_B) / 2.0,
        (MARGIN_T + SVG_H - MARGIN_B) / 2.0
    ));
    for (v, anchor, x, y) in [
        (x0, "middle", px(x0), SVG_H - MARGIN_B + 16.0),
        (x1, "middle", px(x1), SVG_H - MARGIN_B + 16.0),
        (y0, "end", MARGIN_L - 6.0, py(y0) + 4.0),
        (y1, "end", MARGIN_L - 6.0, py(y1) + 4.0),
    ] {
        s.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"{anchor}\">{v:.4}</text>\n"
        ));
    }
    for (i, (label, points)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
        let ly = MARGIN_T + 16.0 * i as f64;
        let lx0 = SVG_W - MARGIN_R + 10.0;
        let lx1 = SVG_W - MARGIN_R + 34.0;
        s.push_str(&format!(
            "<line x1=\"{lx0}\" y1=\"{ly}\" x2=\"{lx1}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n\
             <text x=\"{}\" y=\"{}\">{label}</text>\n",
            lx1 + 6.0,
            ly + 4.0,
        ));
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s)
}
