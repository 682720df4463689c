//! Self-contained SVG figures, rendered without a plotting dependency.
//!
//! Two layouts cover the whole study: solution curves over the domain
//! (exact plus nodal polylines) and max error versus element count with a
//! log-scaled error axis. Output is deterministic: fixed palette, fixed
//! precision, iteration order inherited from the sorted sweep records, so
//! the same input produces byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analysis::SweepResult;
use crate::assembly::MethodKind;
use crate::error::FemvarError;
use crate::exact::ExactSolution;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 56.0;

const EXACT_COLOR: &str = "#000000";
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
];
const DASHES: [Option<&str>; 4] = [None, Some("6 3"), Some("2 2"), Some("9 3 2 3")];

/// Zero errors cannot live on a log axis; they are clamped to this for
/// plotting only, never in data files.
const LOG_FLOOR: f64 = 1e-16;

/// Figure layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Exact solution curve(s) plus one nodal polyline per selected case.
    SolutionOverlay,
    /// Max absolute relative error vs element count, one polyline per
    /// (method, pe), error axis log-scaled.
    ErrorLogLog,
}

fn method_color(method: MethodKind) -> &'static str {
    PALETTE[MethodKind::ALL.iter().position(|m| *m == method).unwrap() % PALETTE.len()]
}

fn pe_dash(pe_values: &[f64], pe: f64) -> Option<&'static str> {
    let idx = pe_values.iter().position(|&p| p == pe).unwrap_or(0);
    DASHES[idx % DASHES.len()]
}

/// Short label for a parameter value: integers without the trailing ".0".
pub(crate) fn fmt_value(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

struct Curve {
    label: String,
    color: &'static str,
    dash: Option<&'static str>,
    points: Vec<(f64, f64)>,
    markers: bool,
}

struct LegendEntry {
    label: String,
    color: &'static str,
    dash: Option<&'static str>,
}

struct Figure {
    title: String,
    x_label: String,
    y_label: String,
    y_log: bool,
    curves: Vec<Curve>,
    legend: Vec<LegendEntry>,
    /// Extra x positions that must receive a tick (element counts).
    x_ticks_at: Option<Vec<f64>>,
}

fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let normalized = raw / magnitude;
    let nice = if normalized <= 1.5 {
        1.0
    } else if normalized <= 3.0 {
        2.0
    } else if normalized <= 7.0 {
        5.0
    } else {
        10.0
    };
    nice * magnitude
}

fn fmt_tick(value: f64, step: f64) -> String {
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor() as usize).min(6)
    };
    let value = if value.abs() < step * 1e-9 {
        0.0
    } else {
        value
    };
    format!("{value:.decimals$}")
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn render_figure(figure: &Figure, path: &Path) -> Result<(), FemvarError> {
    if figure.curves.iter().all(|c| c.points.is_empty()) {
        return Err(FemvarError::EmptyPlotSelection);
    }

    let transform_y = |v: f64| {
        if figure.y_log {
            v.max(LOG_FLOOR).log10()
        } else {
            v
        }
    };
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for curve in &figure.curves {
        for &(x, y) in &curve.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(transform_y(y));
            y_max = y_max.max(transform_y(y));
        }
    }
    if x_min == x_max {
        x_min -= 1.0;
        x_max += 1.0;
    }
    if y_min == y_max {
        y_min -= 1.0;
        y_max += 1.0;
    }
    if figure.y_log {
        y_min = y_min.floor();
        y_max = y_max.ceil();
        if y_min == y_max {
            y_max += 1.0;
        }
    } else {
        let pad = 0.05 * (y_max - y_min);
        y_min -= pad;
        y_max += pad;
    }
    let x_pad = 0.04 * (x_max - x_min);
    let (x_lo, x_hi) = (x_min - x_pad, x_max + x_pad);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px_x = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let to_px_y =
        |y: f64| HEIGHT - MARGIN_BOTTOM - (transform_y(y) - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        escape(&figure.title)
    );

    // ticks and grid
    if figure.y_log {
        let mut exp = y_min as i64;
        while exp <= y_max as i64 {
            let y_px = HEIGHT - MARGIN_BOTTOM - (exp as f64 - y_min) / (y_max - y_min) * plot_h;
            let _ = writeln!(
                svg,
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>",
                MARGIN_LEFT,
                y_px,
                MARGIN_LEFT + plot_w,
                y_px
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e{}</text>",
                MARGIN_LEFT - 6.0,
                y_px + 4.0,
                exp
            );
            exp += 1;
        }
    } else {
        let step = nice_step(y_max - y_min, 6);
        let mut tick = (y_min / step).ceil() * step;
        while tick <= y_max + step * 1e-9 {
            let y_px = HEIGHT - MARGIN_BOTTOM - (tick - y_min) / (y_max - y_min) * plot_h;
            let _ = writeln!(
                svg,
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>",
                MARGIN_LEFT,
                y_px,
                MARGIN_LEFT + plot_w,
                y_px
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>",
                MARGIN_LEFT - 6.0,
                y_px + 4.0,
                fmt_tick(tick, step)
            );
            tick += step;
        }
    }
    let x_tick_values: Vec<f64> = match &figure.x_ticks_at {
        Some(values) => values.clone(),
        None => {
            let step = nice_step(x_hi - x_lo, 6);
            let mut ticks = Vec::new();
            let mut tick = (x_lo / step).ceil() * step;
            while tick <= x_hi + step * 1e-9 {
                ticks.push(tick);
                tick += step;
            }
            ticks
        }
    };
    let x_step = nice_step(x_hi - x_lo, 6);
    for &tick in &x_tick_values {
        let x_px = to_px_x(tick);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>",
            x_px,
            MARGIN_TOP,
            x_px,
            HEIGHT - MARGIN_BOTTOM
        );
        let label = if figure.x_ticks_at.is_some() {
            fmt_value(tick)
        } else {
            fmt_tick(tick, x_step)
        };
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            x_px,
            HEIGHT - MARGIN_BOTTOM + 16.0,
            label
        );
    }

    // frame and axis labels
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"#333333\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        escape(&figure.x_label)
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(&figure.y_label)
    );

    // curves
    for curve in &figure.curves {
        let dash = curve
            .dash
            .map(|d| format!(" stroke-dasharray=\"{d}\""))
            .unwrap_or_default();
        let points: String = curve
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", to_px_x(x), to_px_y(y)))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\"{} points=\"{}\"/>",
            curve.color, dash, points
        );
        if curve.markers {
            for &(x, y) in &curve.points {
                let _ = writeln!(
                    svg,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.6\" fill=\"{}\"/>",
                    to_px_x(x),
                    to_px_y(y),
                    curve.color
                );
            }
        }
    }

    // legend
    let legend_x = WIDTH - MARGIN_RIGHT + 14.0;
    for (k, entry) in figure.legend.iter().enumerate() {
        let y = MARGIN_TOP + 10.0 + 16.0 * k as f64;
        let dash = entry
            .dash
            .map(|d| format!(" stroke-dasharray=\"{d}\""))
            .unwrap_or_default();
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{}\" stroke-width=\"1.6\"{}/>",
            legend_x,
            y,
            legend_x + 26.0,
            y,
            entry.color,
            dash
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            legend_x + 32.0,
            y + 4.0,
            escape(&entry.label)
        );
    }

    svg.push_str("</svg>\n");
    fs::write(path, svg).map_err(|e| FemvarError::io(path, e))
}

fn exact_curve(
    pe: f64,
    domain: (f64, f64),
    samples: usize,
) -> Result<Vec<(f64, f64)>, FemvarError> {
    let (a, b) = domain;
    let sol = ExactSolution::new(pe, a, b)?;
    (0..samples)
        .map(|k| {
            let x = (a + (b - a) * k as f64 / (samples - 1) as f64).min(b);
            Ok((x, sol.evaluate(x)?))
        })
        .collect()
}

/// Family of exact curves, one per Peclet number.
pub fn render_exact_svg(
    domain: (f64, f64),
    pe_values: &[f64],
    path: &Path,
) -> Result<(), FemvarError> {
    if pe_values.is_empty() {
        return Err(FemvarError::EmptyPlotSelection);
    }
    let mut curves = Vec::new();
    let mut legend = Vec::new();
    for (k, &pe) in pe_values.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        curves.push(Curve {
            label: String::new(),
            color,
            dash: None,
            points: exact_curve(pe, domain, 401)?,
            markers: false,
        });
        legend.push(LegendEntry {
            label: format!("Pe = {}", fmt_value(pe)),
            color,
            dash: None,
        });
    }
    render_figure(
        &Figure {
            title: "Exact solutions".to_string(),
            x_label: "x".to_string(),
            y_label: "T(x)".to_string(),
            y_log: false,
            curves,
            legend,
            x_ticks_at: None,
        },
        path,
    )
}

/// Render the selected sweep cases in the requested layout. Singular cases
/// carry no curve; a selection with nothing drawable is refused.
pub fn render_svg(result: &SweepResult, kind: PlotKind, path: &Path) -> Result<(), FemvarError> {
    match kind {
        PlotKind::SolutionOverlay => render_overlay(result, path),
        PlotKind::ErrorLogLog => render_error_loglog(result, path),
    }
}

fn render_overlay(result: &SweepResult, path: &Path) -> Result<(), FemvarError> {
    let drawable: Vec<_> = result
        .cases
        .iter()
        .filter(|c| c.solution.is_some())
        .collect();
    if drawable.is_empty() {
        return Err(FemvarError::EmptyPlotSelection);
    }
    let mut pe_seen: Vec<f64> = Vec::new();
    for case in &drawable {
        if !pe_seen.contains(&case.pe) {
            pe_seen.push(case.pe);
        }
    }
    pe_seen.sort_by(f64::total_cmp);
    let single_pair = pe_seen.len() == 1
        && drawable
            .iter()
            .all(|c| c.n_elements == drawable[0].n_elements);

    let mut curves = Vec::new();
    let mut legend = Vec::new();
    for &pe in &pe_seen {
        let dash = if pe_seen.len() > 1 {
            pe_dash(&pe_seen, pe)
        } else {
            None
        };
        let label = if single_pair {
            "exact".to_string()
        } else {
            format!("exact, Pe = {}", fmt_value(pe))
        };
        curves.push(Curve {
            label: String::new(),
            color: EXACT_COLOR,
            dash,
            points: exact_curve(pe, result.config.domain, 401)?,
            markers: false,
        });
        legend.push(LegendEntry {
            label,
            color: EXACT_COLOR,
            dash,
        });
    }
    for case in &drawable {
        let solution = case.solution.as_ref().unwrap();
        let color = method_color(case.method);
        let dash = if pe_seen.len() > 1 {
            pe_dash(&pe_seen, case.pe)
        } else {
            None
        };
        let label = if single_pair {
            case.method.label().to_string()
        } else {
            format!(
                "{}, Pe = {}, N = {}",
                case.method,
                fmt_value(case.pe),
                case.n_elements
            )
        };
        curves.push(Curve {
            label: String::new(),
            color,
            dash,
            points: case
                .nodes
                .iter()
                .copied()
                .zip(solution.iter().copied())
                .collect(),
            markers: false,
        });
        legend.push(LegendEntry { label, color, dash });
    }
    let title = if single_pair {
        format!(
            "Solutions at Pe = {}, {} elements",
            fmt_value(drawable[0].pe),
            drawable[0].n_elements
        )
    } else {
        "Solutions vs exact".to_string()
    };
    render_figure(
        &Figure {
            title,
            x_label: "x".to_string(),
            y_label: "T(x)".to_string(),
            y_log: false,
            curves,
            legend,
            x_ticks_at: None,
        },
        path,
    )
}

fn render_error_loglog(result: &SweepResult, path: &Path) -> Result<(), FemvarError> {
    // group by (method, pe); the records are already in canonical order
    let mut curves: Vec<Curve> = Vec::new();
    let mut methods_seen: Vec<MethodKind> = Vec::new();
    let pe_values = &result.config.pe_values;
    for case in &result.cases {
        let Some(error) = &case.error else { continue };
        let point = (
            case.n_elements as f64,
            error.max_abs_rel_error.max(LOG_FLOOR),
        );
        let key_label = format!("{}, Pe = {}", case.method, fmt_value(case.pe));
        match curves.iter_mut().find(|c| c.label == key_label) {
            Some(curve) => curve.points.push(point),
            None => {
                curves.push(Curve {
                    label: key_label,
                    color: method_color(case.method),
                    dash: pe_dash(pe_values, case.pe),
                    points: vec![point],
                    markers: true,
                });
                if !methods_seen.contains(&case.method) {
                    methods_seen.push(case.method);
                }
            }
        }
    }
    if curves.is_empty() {
        return Err(FemvarError::EmptyPlotSelection);
    }
    methods_seen.sort();
    let mut legend: Vec<LegendEntry> = methods_seen
        .iter()
        .map(|&m| LegendEntry {
            label: m.label().to_string(),
            color: method_color(m),
            dash: None,
        })
        .collect();
    if pe_values.len() > 1 {
        for &pe in pe_values {
            legend.push(LegendEntry {
                label: format!("Pe = {}", fmt_value(pe)),
                color: "#555555",
                dash: pe_dash(pe_values, pe),
            });
        }
    }
    let x_ticks: Vec<f64> = result
        .config
        .element_counts
        .iter()
        .map(|&n| n as f64)
        .collect();
    render_figure(
        &Figure {
            title: "Max absolute relative error vs element count".to_string(),
            x_label: "elements".to_string(),
            y_label: "max |(exact - numeric) / exact|".to_string(),
            y_log: true,
            curves,
            legend,
            x_ticks_at: Some(x_ticks),
        },
        path,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{run_sweep, SweepConfig};
    use tempfile::tempdir;

    #[test]
    fn exact_figure_is_deterministic_svg() {
        let dir = tempdir().unwrap();
        let p1 = dir.path().join("a.svg");
        let p2 = dir.path().join("b.svg");
        render_exact_svg((1.0, 2.0), &[1.0, 50.0, 100.0, 500.0], &p1).unwrap();
        render_exact_svg((1.0, 2.0), &[1.0, 50.0, 100.0, 500.0], &p2).unwrap();
        let a = std::fs::read(&p1).unwrap();
        let b = std::fs::read(&p2).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.trim_end().ends_with("</svg>"));
        assert!(text.contains("Pe = 500"));
    }

    #[test]
    fn overlay_and_error_figures_render() {
        let result = run_sweep(&SweepConfig::default()).unwrap();
        let dir = tempdir().unwrap();
        let overlay = dir.path().join("overlay.svg");
        render_svg(
            &result.subset(100.0, 75),
            PlotKind::SolutionOverlay,
            &overlay,
        )
        .unwrap();
        let text = std::fs::read_to_string(&overlay).unwrap();
        assert!(text.contains("GLS") && text.contains("exact"));

        let errors = dir.path().join("errors.svg");
        render_svg(&result, PlotKind::ErrorLogLog, &errors).unwrap();
        let text = std::fs::read_to_string(&errors).unwrap();
        assert!(text.contains("1e"), "log ticks expected");
    }

    #[test]
    fn empty_selection_is_refused() {
        let mut result = run_sweep(&SweepConfig::default()).unwrap();
        result.cases.clear();
        let dir = tempdir().unwrap();
        let path = dir.path().join("empty.svg");
        let err = render_svg(&result, PlotKind::SolutionOverlay, &path).unwrap_err();
        assert!(matches!(err, FemvarError::EmptyPlotSelection));
        assert!(!path.exists(), "no empty file may be left behind");
        assert!(render_exact_svg((1.0, 2.0), &[], &path).is_err());
    }
}
