//! Small-multiple SVG figures from result rows.
//!
//! Appendix figures put α on panel rows, Δ on panel columns and σ_C on the
//! x axis, one file per arm size n. The Σ̂_k convergence figure puts α on
//! rows, n on columns and k on the x axis.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::rows::{Metric, ResultRow, Series};
use super::ReportError;

/// Panel columns of the Σ̂_k convergence figure.
pub const FIG1_NS: [u32; 4] = [32, 52, 102, 202];
/// Panel rows of the Σ̂_k convergence figure.
pub const FIG1_ALPHAS: [f64; 4] = [0.3, 0.5, 0.7, 0.9];

const PANEL_W: f64 = 220.0;
const PANEL_H: f64 = 160.0;
const GAP: f64 = 24.0;
const LEFT: f64 = 64.0;
const TOP: f64 = 56.0;
const BOTTOM: f64 = 48.0;
const RIGHT: f64 = 24.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Appendix {
    /// Relative bias of Â_k and of the bootstrap median.
    A,
    /// Coverage at 95% and 90%.
    B,
    /// Left/right relative widths of both intervals.
    C,
    /// Relative bias of Σ̂_k against k.
    Fig1,
}

impl Appendix {
    fn series(self) -> Series {
        match self {
            Appendix::Fig1 => Series::Sigma,
            _ => Series::Changepoint,
        }
    }

    fn required_metrics(self) -> &'static [Metric] {
        match self {
            Appendix::A => &[Metric::RelBiasPct, Metric::BootMedianRelBiasPct],
            Appendix::B => &[Metric::Coverage95, Metric::Coverage90],
            Appendix::C => &[Metric::WLeft95, Metric::WRight95, Metric::WLeft90, Metric::WRight90],
            Appendix::Fig1 => &[Metric::SigmaRelBiasPct],
        }
    }

    fn traces(self) -> Vec<TraceStyle> {
        let t = |metric, color, dashed| TraceStyle { metric, color, dashed };
        match self {
            Appendix::A => vec![
                t(Metric::RelBiasPct, "black", false),
                t(Metric::BootMedianRelBiasPct, "green", false),
            ],
            Appendix::B => vec![
                t(Metric::Coverage95, "black", false),
                t(Metric::Coverage90, "green", false),
            ],
            Appendix::C => vec![
                t(Metric::WLeft95, "black", false),
                t(Metric::WRight95, "green", false),
                t(Metric::WLeft90, "black", true),
                t(Metric::WRight90, "green", true),
            ],
            Appendix::Fig1 => vec![t(Metric::SigmaRelBiasPct, "black", false)],
        }
    }

    fn reference_lines(self) -> Vec<RefLine> {
        match self {
            Appendix::A | Appendix::Fig1 => vec![RefLine {
                value: 0.0,
                color: "lightgrey",
            }],
            Appendix::B => vec![
                RefLine {
                    value: 0.95,
                    color: "lightgrey",
                },
                RefLine {
                    value: 0.90,
                    color: "lightblue",
                },
            ],
            Appendix::C => Vec::new(),
        }
    }

    fn y_label(self) -> &'static str {
        match self {
            Appendix::A | Appendix::Fig1 => "relative bias (%)",
            Appendix::B => "coverage",
            Appendix::C => "relative width (% of |A|)",
        }
    }

    fn x_label(self) -> &'static str {
        match self {
            Appendix::Fig1 => "k",
            _ => "sigma_C",
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Appendix::A => "appendix_a",
            Appendix::B => "appendix_b",
            Appendix::C => "appendix_c",
            Appendix::Fig1 => "fig1",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Appendix::A => "Relative bias of A_k (black) and bootstrap median (green)",
            Appendix::B => "Coverage at 95% (black) and 90% (green)",
            Appendix::C => "Relative widths: left (black), right (green); 95% solid, 90% dashed",
            Appendix::Fig1 => "Relative bias of Sigma_k",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefLine {
    pub value: f64,
    pub color: &'static str,
}

#[derive(Debug, Clone, Copy)]
struct TraceStyle {
    metric: Metric,
    color: &'static str,
    dashed: bool,
}

/// Facet layout of one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelSpec {
    pub appendix: Appendix,
    /// α levels, one panel row each.
    pub row_levels: Vec<f64>,
    /// Δ levels (or n for the Σ̂_k figure), one panel column each.
    pub col_levels: Vec<f64>,
    /// σ_C (or k) values on the x axis.
    pub x_levels: Vec<f64>,
    pub reference_lines: Vec<RefLine>,
}

/// A rendered figure and the file name it should be saved under.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub file_name: String,
    /// Arm size for appendix figures.
    pub n: Option<u32>,
    pub spec: PanelSpec,
    pub svg: String,
}

fn sorted_levels(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Render every figure of `appendix` from result rows.
pub fn render_figures(rows: &[ResultRow], appendix: Appendix) -> Result<Vec<Figure>, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::NoData);
    }
    let rows: Vec<&ResultRow> = rows.iter().filter(|r| r.series == appendix.series()).collect();
    let present: BTreeSet<Metric> = rows.iter().map(|r| r.metric).collect();
    let missing: Vec<String> = appendix
        .required_metrics()
        .iter()
        .filter(|m| !present.contains(m))
        .map(|m| m.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(ReportError::MissingMetrics(missing));
    }

    match appendix {
        Appendix::Fig1 => {
            let rows: Vec<&ResultRow> = rows.into_iter().filter(|r| r.k.is_some()).collect();
            let ns_present: BTreeSet<u32> = rows.iter().map(|r| r.n).collect();
            let mut ns: Vec<u32> = FIG1_NS.iter().copied().filter(|n| ns_present.contains(n)).collect();
            if ns.is_empty() {
                ns = ns_present.into_iter().collect();
            }
            let alphas_present = sorted_levels(rows.iter().map(|r| r.alpha));
            let mut alphas: Vec<f64> = FIG1_ALPHAS
                .iter()
                .copied()
                .filter(|a| alphas_present.contains(a))
                .collect();
            if alphas.is_empty() {
                alphas = alphas_present;
            }
            let spec = PanelSpec {
                appendix,
                row_levels: alphas,
                col_levels: ns.iter().map(|&n| f64::from(n)).collect(),
                x_levels: sorted_levels(rows.iter().filter_map(|r| r.k.map(f64::from))),
                reference_lines: appendix.reference_lines(),
            };
            let svg = draw(&spec, "Sigma_k", &|row, col, metric| {
                let mut pts: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.metric == metric && r.alpha == row && f64::from(r.n) == col)
                    .map(|r| (f64::from(r.k.unwrap_or(0)), r.value))
                    .collect();
                pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                pts
            });
            Ok(vec![Figure {
                file_name: format!("{}.svg", appendix.tag()),
                n: None,
                spec,
                svg,
            }])
        }
        _ => {
            let ns: BTreeSet<u32> = rows.iter().map(|r| r.n).collect();
            let mut figures = Vec::with_capacity(ns.len());
            for n in ns {
                let sub: Vec<&ResultRow> = rows.iter().copied().filter(|r| r.n == n).collect();
                let spec = PanelSpec {
                    appendix,
                    row_levels: sorted_levels(sub.iter().map(|r| r.alpha)),
                    col_levels: sorted_levels(sub.iter().filter_map(|r| r.delta)),
                    x_levels: sorted_levels(sub.iter().filter_map(|r| r.sigma_c)),
                    reference_lines: appendix.reference_lines(),
                };
                let svg = draw(&spec, &format!("n = {n}"), &|row, col, metric| {
                    let mut pts: Vec<(f64, f64)> = sub
                        .iter()
                        .filter(|r| r.metric == metric && r.alpha == row && r.delta == Some(col))
                        .filter_map(|r| r.sigma_c.map(|x| (x, r.value)))
                        .collect();
                    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                    pts
                });
                figures.push(Figure {
                    file_name: format!("{}_n{}.svg", appendix.tag(), n),
                    n: Some(n),
                    spec,
                    svg,
                });
            }
            Ok(figures)
        }
    }
}

fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn nice_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

type PointsFn<'a> = dyn Fn(f64, f64, Metric) -> Vec<(f64, f64)> + 'a;

fn draw(spec: &PanelSpec, subtitle: &str, points: &PointsFn<'_>) -> String {
    let traces = spec.appendix.traces();
    let nrows = spec.row_levels.len().max(1);
    let ncols = spec.col_levels.len().max(1);
    let width = LEFT + RIGHT + ncols as f64 * PANEL_W + (ncols - 1) as f64 * GAP;
    let height = TOP + BOTTOM + nrows as f64 * PANEL_H + (nrows - 1) as f64 * GAP;

    // Shared y range across panels.
    let mut all_y = Vec::new();
    for &row in &spec.row_levels {
        for &col in &spec.col_levels {
            for t in &traces {
                all_y.extend(points(row, col, t.metric).into_iter().map(|p| p.1));
            }
        }
    }
    all_y.extend(spec.reference_lines.iter().map(|r| r.value));
    let (y_lo, y_hi) = nice_range(all_y.into_iter());
    let (x_lo, x_hi) = match (spec.x_levels.first(), spec.x_levels.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        (Some(&a), _) => (a - 1.0, a + 1.0),
        _ => (0.0, 1.0),
    };
    let col_label = if spec.appendix == Appendix::Fig1 { "n" } else { "Delta" };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif">"#,
        fmt_num(width),
        fmt_num(height),
        fmt_num(width),
        fmt_num(height)
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" font-size="14" text-anchor="middle">{} ({})</text>"#,
        fmt_num(width / 2.0),
        spec.appendix.title(),
        subtitle
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        fmt_num(width / 2.0),
        fmt_num(height - 10.0),
        spec.appendix.x_label()
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        fmt_num(height / 2.0),
        fmt_num(height / 2.0),
        spec.appendix.y_label()
    );

    for (ri, &row) in spec.row_levels.iter().enumerate() {
        for (ci, &col) in spec.col_levels.iter().enumerate() {
            let x0 = LEFT + ci as f64 * (PANEL_W + GAP);
            let y0 = TOP + ri as f64 * (PANEL_H + GAP);
            let px = |x: f64| x0 + (x - x_lo) / (x_hi - x_lo) * PANEL_W;
            let py = |y: f64| y0 + PANEL_H - (y - y_lo) / (y_hi - y_lo) * PANEL_H;

            let _ = writeln!(
                s,
                r#"<g class="panel" data-alpha="{}" data-col="{}">"#,
                fmt_num(row),
                fmt_num(col)
            );
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="grey"/>"#,
                fmt_num(x0),
                fmt_num(y0),
                fmt_num(PANEL_W),
                fmt_num(PANEL_H)
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">alpha = {}, {} = {}</text>"#,
                fmt_num(x0 + PANEL_W / 2.0),
                fmt_num(y0 - 4.0),
                fmt_num(row),
                col_label,
                fmt_num(col)
            );
            for r in &spec.reference_lines {
                let _ = writeln!(
                    s,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}"/>"#,
                    fmt_num(x0),
                    fmt_num(py(r.value)),
                    fmt_num(x0 + PANEL_W),
                    fmt_num(py(r.value)),
                    r.color
                );
            }
            if ri + 1 == spec.row_levels.len() {
                for &x in &spec.x_levels {
                    let _ = writeln!(
                        s,
                        r#"<text x="{}" y="{}" font-size="9" text-anchor="middle">{}</text>"#,
                        fmt_num(px(x)),
                        fmt_num(y0 + PANEL_H + 12.0),
                        fmt_num(x)
                    );
                }
            }
            if ci == 0 {
                for y in [y_lo, 0.5 * (y_lo + y_hi), y_hi] {
                    let _ = writeln!(
                        s,
                        r#"<text x="{}" y="{}" font-size="9" text-anchor="end">{}</text>"#,
                        fmt_num(x0 - 4.0),
                        fmt_num(py(y) + 3.0),
                        fmt_num((y * 100.0).round() / 100.0)
                    );
                }
            }
            for t in &traces {
                let pts = points(row, col, t.metric);
                let mut d = String::new();
                let mut pen_down = false;
                for (x, y) in &pts {
                    if !y.is_finite() {
                        pen_down = false;
                        continue;
                    }
                    let _ = write!(
                        d,
                        "{}{} {} ",
                        if pen_down { "L" } else { "M" },
                        fmt_num(px(*x)),
                        fmt_num(py(*y))
                    );
                    pen_down = true;
                }
                if d.is_empty() {
                    continue;
                }
                let dash = if t.dashed { r#" stroke-dasharray="5,3""# } else { "" };
                let _ = writeln!(
                    s,
                    r#"<path data-metric="{}" d="{}" fill="none" stroke="{}" stroke-width="1.5"{}/>"#,
                    t.metric,
                    d.trim_end(),
                    t.color,
                    dash
                );
                for (x, y) in pts.iter().filter(|p| p.1.is_finite()) {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{}" cy="{}" r="2" fill="{}"/>"#,
                        fmt_num(px(*x)),
                        fmt_num(py(*y)),
                        t.color
                    );
                }
            }
            let _ = writeln!(s, "</g>");
        }
    }
    s.push_str("</svg>\n");
    s
}
