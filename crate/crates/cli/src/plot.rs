//! Hand-written SVG for scan reports, fixed 800x800 viewport.

use std::fmt::{self, Write as _};

use tto_lab::harness::ScanReport;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 70.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
/// Singular values below this are drawn at the floor.
const LOG_FLOOR: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    EigScatter,
    SvDecay,
}

impl std::str::FromStr for PlotKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "eig-scatter" => Ok(PlotKind::EigScatter),
            "sv-decay" => Ok(PlotKind::SvDecay),
            _ => Err(format!("unknown plot kind `{s}` (expected eig-scatter or sv-decay)")),
        }
    }
}

/// The report has no rows carrying the data the plot needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptyReport(pub PlotKind);

impl fmt::Display for EmptyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.0 {
            PlotKind::EigScatter => "eigenvalue",
            PlotKind::SvDecay => "singular-value",
        };
        write!(f, "report has no {what} rows to plot")
    }
}

impl std::error::Error for EmptyReport {}

/// SVG document plus the raw CSV it was drawn from.
pub struct Plot {
    pub svg: String,
    pub csv: String,
}

pub fn emit_plot(report: &ScanReport, kind: PlotKind) -> Result<Plot, EmptyReport> {
    match kind {
        PlotKind::EigScatter => eig_scatter(report),
        PlotKind::SvDecay => sv_decay(report),
    }
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#
    );
    let _ = writeln!(s, r#"<rect width="800" height="800" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="400" y="30" text-anchor="middle" font-family="sans-serif" font-size="18">{}</text>"#,
        escape(title)
    );
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn legend(s: &mut String, degrees: &[usize]) {
    for (i, d) in degrees.iter().enumerate() {
        let y = 60.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="690" y="{:.2}" width="10" height="10" fill="{}"/><text x="706" y="{:.2}" font-family="sans-serif" font-size="12">n = {d}</text>"#,
            y,
            PALETTE[i % PALETTE.len()],
            y + 9.0
        );
    }
}

fn eig_scatter(report: &ScanReport) -> Result<Plot, EmptyReport> {
    let rows: Vec<_> = report.rows.iter().filter(|r| !r.eigenvalues.is_empty()).collect();
    if rows.is_empty() {
        return Err(EmptyReport(PlotKind::EigScatter));
    }
    let reach = rows
        .iter()
        .flat_map(|r| r.eigenvalues.iter().map(|z| z.norm()))
        .fold(1.0, f64::max)
        * 1.05;
    let radius = (SIZE / 2.0 - MARGIN) / reach;
    let (cx, cy) = (SIZE / 2.0, SIZE / 2.0);
    let at = |re: f64, im: f64| (cx + re * radius, cy - im * radius);

    let mut svg = header(&format!("eigenvalues, {}", report.scenario.kind.as_str()));
    let _ = writeln!(
        svg,
        r##"<line x1="{:.2}" y1="{cy:.2}" x2="{:.2}" y2="{cy:.2}" stroke="#bbbbbb"/><line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="#bbbbbb"/>"##,
        MARGIN,
        SIZE - MARGIN,
        MARGIN,
        SIZE - MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{radius:.2}" fill="none" stroke="black" stroke-width="1.5"/>"#
    );
    let mut csv = String::from("degree,re,im\n");
    let mut degrees = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        degrees.push(r.degree);
        let colour = PALETTE[i % PALETTE.len()];
        for z in &r.eigenvalues {
            let (x, y) = at(z.re, z.im);
            let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{colour}" fill-opacity="0.8"/>"#);
            let _ = writeln!(csv, "{},{},{}", r.degree, z.re, z.im);
        }
    }
    if let Some(xi) = report.accumulation_point {
        let (x, y) = at(xi.re, xi.im);
        let _ = writeln!(
            svg,
            r#"<path d="M {:.2} {:.2} L {:.2} {:.2} M {:.2} {:.2} L {:.2} {:.2}" stroke="black" stroke-width="2.5"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13">&#958;</text>"#,
            x - 8.0,
            y - 8.0,
            x + 8.0,
            y + 8.0,
            x - 8.0,
            y + 8.0,
            x + 8.0,
            y - 8.0,
            x + 10.0,
            y - 10.0
        );
    }
    legend(&mut svg, &degrees);
    svg.push_str("</svg>\n");
    Ok(Plot { svg, csv })
}

fn sv_decay(report: &ScanReport) -> Result<Plot, EmptyReport> {
    let rows: Vec<_> = report.rows.iter().filter(|r| !r.singular_values.is_empty()).collect();
    if rows.is_empty() {
        return Err(EmptyReport(PlotKind::SvDecay));
    }
    let log = |s: f64| s.max(LOG_FLOOR).log10();
    let n_max = rows.iter().map(|r| r.singular_values.len()).max().unwrap_or(1).max(2);
    let values = rows.iter().flat_map(|r| r.singular_values.iter().map(|&s| log(s)));
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let lo = lo.floor();
    let hi = hi.ceil().max(lo + 1.0);
    let (x0, x1, y0, y1) = (MARGIN, SIZE - MARGIN - 130.0, SIZE - MARGIN, MARGIN);
    let px = |i: usize| x0 + (i - 1) as f64 / (n_max - 1) as f64 * (x1 - x0);
    let py = |v: f64| y0 + (v - lo) / (hi - lo) * (y1 - y0);

    let mut svg = header(&format!("log10 singular values, {}", report.scenario.kind.as_str()));
    let _ = writeln!(
        svg,
        r#"<path d="M {x0:.2} {y1:.2} L {x0:.2} {y0:.2} L {x1:.2} {y0:.2}" fill="none" stroke="black"/>"#
    );
    let step = ((hi - lo) / 8.0).ceil().max(1.0);
    let mut tick = lo;
    while tick <= hi {
        let y = py(tick);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">1e{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0,
            tick as i64
        );
        tick += step;
    }
    for i in [1, n_max.div_ceil(2), n_max] {
        let x = px(i);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12">{i}</text>"#,
            y0 + 18.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">index</text>"#,
        (x0 + x1) / 2.0,
        y0 + 40.0
    );
    let mut csv = String::from("degree,index,sigma\n");
    let mut degrees = Vec::new();
    for (k, r) in rows.iter().enumerate() {
        degrees.push(r.degree);
        let colour = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = r
            .singular_values
            .iter()
            .enumerate()
            .map(|(i, &s)| format!("{:.2},{:.2}", px(i + 1), py(log(s))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            points.join(" ")
        );
        for (i, s) in r.singular_values.iter().enumerate() {
            let _ = writeln!(csv, "{},{},{}", r.degree, i + 1, s);
        }
    }
    legend(&mut svg, &degrees);
    svg.push_str("</svg>\n");
    Ok(Plot { svg, csv })
}
