//! CSV and JSON emission.
//!
//! CSV is the primary artifact: greppable, diffable, and serialized with 17
//! significant digits so every f64 survives a round trip bit-exactly.
//! Singular cases appear as flagged rows with empty numeric fields; no file
//! ever carries NaN or infinities.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::analysis::{CaseRecord, SweepResult};
use crate::error::FemvarError;
use crate::exact::ExactSolution;

/// 17 significant digits: the shortest count that round-trips any f64.
pub fn fmt_f64_full(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<(), FemvarError> {
    fs::write(path, contents).map_err(|e| FemvarError::io(path, e))
}

/// One row per (case, node):
/// `method,pe,n_elements,x,T_numeric,T_exact,abs_rel_error,excluded_flag`.
/// A singular case contributes a single row with empty numeric fields and
/// `singular` in the flag column.
pub fn write_solutions_csv(result: &SweepResult, path: &Path) -> Result<(), FemvarError> {
    let mut out = String::new();
    out.push_str("method,pe,n_elements,x,T_numeric,T_exact,abs_rel_error,excluded_flag\n");
    for case in &result.cases {
        if case.singular {
            let _ = writeln!(
                out,
                "{},{},{},,,,,singular",
                case.method, case.pe, case.n_elements
            );
            continue;
        }
        let solution = case.solution.as_ref().expect("non-singular case");
        let per_node = case
            .error
            .as_ref()
            .map(|e| e.per_node_abs_rel_error.as_slice());
        for (i, &x) in case.nodes.iter().enumerate() {
            let node_error = per_node.and_then(|p| p[i]);
            let (err_field, excluded) = match node_error {
                Some(err) => (fmt_f64_full(err), "false"),
                None => (String::new(), "true"),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                case.method,
                case.pe,
                case.n_elements,
                fmt_f64_full(x),
                fmt_f64_full(solution[i]),
                fmt_f64_full(case.exact[i]),
                err_field,
                excluded
            );
        }
    }
    write_file(path, &out)
}

/// One row per case:
/// `method,pe,n_elements,max_abs_rel_error,total_variation,overshoot,undershoot,tau,rcond,singular`.
pub fn write_summary_csv(result: &SweepResult, path: &Path) -> Result<(), FemvarError> {
    let mut out = String::new();
    out.push_str(
        "method,pe,n_elements,max_abs_rel_error,total_variation,overshoot,undershoot,tau,rcond,singular\n",
    );
    for case in &result.cases {
        let metrics = match &case.error {
            Some(e) => format!(
                "{},{},{},{}",
                fmt_f64_full(e.max_abs_rel_error),
                fmt_f64_full(e.total_variation),
                fmt_f64_full(e.overshoot),
                fmt_f64_full(e.undershoot)
            ),
            None => ",,,".to_string(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            case.method,
            case.pe,
            case.n_elements,
            metrics,
            fmt_f64_full(case.tau),
            fmt_f64_full(case.rcond),
            case.singular
        );
    }
    write_file(path, &out)
}

#[derive(Serialize)]
struct JsonNode {
    x: f64,
    t_numeric: f64,
    t_exact: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_rel_error: Option<f64>,
    excluded: bool,
}

#[derive(Serialize)]
struct JsonCase {
    method: &'static str,
    pe: f64,
    n_elements: usize,
    tau: f64,
    rcond: f64,
    singular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_abs_rel_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_variation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    overshoot: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    undershoot: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<Vec<JsonNode>>,
}

#[derive(Serialize)]
struct JsonSweep {
    domain: (f64, f64),
    quad_order: usize,
    cases: Vec<JsonCase>,
}

fn json_case(case: &CaseRecord) -> JsonCase {
    let nodes = case.solution.as_ref().map(|solution| {
        case.nodes
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let abs_rel_error = case
                    .error
                    .as_ref()
                    .and_then(|e| e.per_node_abs_rel_error[i]);
                JsonNode {
                    x,
                    t_numeric: solution[i],
                    t_exact: case.exact[i],
                    abs_rel_error,
                    excluded: abs_rel_error.is_none(),
                }
            })
            .collect()
    });
    JsonCase {
        method: case.method.label(),
        pe: case.pe,
        n_elements: case.n_elements,
        tau: case.tau,
        rcond: case.rcond,
        singular: case.singular,
        max_abs_rel_error: case.error.as_ref().map(|e| e.max_abs_rel_error),
        total_variation: case.error.as_ref().map(|e| e.total_variation),
        overshoot: case.error.as_ref().map(|e| e.overshoot),
        undershoot: case.error.as_ref().map(|e| e.undershoot),
        nodes,
    }
}

/// The same content as the two CSVs, nested by case.
pub fn write_sweep_json(result: &SweepResult, path: &Path) -> Result<(), FemvarError> {
    let doc = JsonSweep {
        domain: result.config.domain,
        quad_order: result.config.quad_order,
        cases: result.cases.iter().map(json_case).collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serialization cannot fail");
    text.push('\n');
    write_file(path, &text)
}

#[derive(Serialize)]
struct JsonExactPoint {
    x: f64,
    t: f64,
}

#[derive(Serialize)]
struct JsonExactCurve {
    pe: f64,
    points: Vec<JsonExactPoint>,
}

#[derive(Serialize)]
struct JsonExact {
    domain: (f64, f64),
    curves: Vec<JsonExactCurve>,
}

/// JSON counterpart of [`write_exact_csv`].
pub fn write_exact_json(
    domain: (f64, f64),
    pe_values: &[f64],
    samples: usize,
    path: &Path,
) -> Result<(), FemvarError> {
    let (a, b) = domain;
    let mut curves = Vec::new();
    for &pe in pe_values {
        let sol = ExactSolution::new(pe, a, b)?;
        let mut points = Vec::with_capacity(samples);
        for k in 0..samples {
            let x = (a + (b - a) * k as f64 / (samples - 1) as f64).min(b);
            points.push(JsonExactPoint {
                x,
                t: sol.evaluate(x)?,
            });
        }
        curves.push(JsonExactCurve { pe, points });
    }
    let mut text = serde_json::to_string_pretty(&JsonExact { domain, curves })
        .expect("serialization cannot fail");
    text.push('\n');
    write_file(path, &text)
}

/// Dense tabulation of the closed-form solution: `pe,x,T` rows with
/// `samples` points per curve.
pub fn write_exact_csv(
    domain: (f64, f64),
    pe_values: &[f64],
    samples: usize,
    path: &Path,
) -> Result<(), FemvarError> {
    let (a, b) = domain;
    let mut out = String::new();
    out.push_str("pe,x,T\n");
    for &pe in pe_values {
        let sol = ExactSolution::new(pe, a, b)?;
        for k in 0..samples {
            let x = a + (b - a) * k as f64 / (samples - 1) as f64;
            let x = x.min(b);
            let _ = writeln!(
                out,
                "{},{},{}",
                pe,
                fmt_f64_full(x),
                fmt_f64_full(sol.evaluate(x)?)
            );
        }
    }
    write_file(path, &out)
}
