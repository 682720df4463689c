//! Error metrics, stability diagnostics, and the comparison sweep.
//!
//! Accuracy is the pointwise absolute relative error
//! `|(exact - numerical) / exact|`, taken over interior nodes whose exact
//! value clears a floor (the left boundary is exactly 0/0, and deep in the
//! pre-layer region the exact solution underflows any meaningful
//! denominator). Stability is operationalized as total variation: the exact
//! solution is monotone with range exactly 1, so a nodal total variation
//! above 1 measures oscillation directly.

use crate::assembly::{apply_dirichlet, assemble, stabilization_tau, MethodKind};
use crate::error::FemvarError;
use crate::exact::ExactSolution;
use crate::mesh::Mesh1D;
use crate::quadrature::QuadratureRule;
use crate::solver::lu_solve;

/// Exact values at or below this magnitude are excluded from the relative
/// error (indeterminate or meaninglessly amplified denominators).
pub const EXACT_FLOOR: f64 = 1e-12;

/// Error metrics and stability diagnostics for one solved case.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// Aligned with the mesh nodes; `None` at boundary nodes and wherever
    /// `|exact| <= EXACT_FLOOR`.
    pub per_node_abs_rel_error: Vec<Option<f64>>,
    /// Max over the included nodes.
    pub max_abs_rel_error: f64,
    /// Sum of |T_{i+1} - T_i|; equals 1 exactly when the nodal values are
    /// monotone between the boundary values 0 and 1.
    pub total_variation: f64,
    /// max(0, max(T) - 1)
    pub overshoot: f64,
    /// max(0, -min(T))
    pub undershoot: f64,
    /// Carried from the solve; always false when metrics are present.
    pub singular: bool,
}

/// Per-node absolute relative error (interior, floored) and its maximum.
/// `None` if every node was excluded, which cannot happen for this problem
/// at nonnegative Peclet numbers.
pub fn absolute_relative_error(
    numerical: &[f64],
    exact: &[f64],
) -> Option<(Vec<Option<f64>>, f64)> {
    assert_eq!(
        numerical.len(),
        exact.len(),
        "nodal sequences must be aligned"
    );
    let n = numerical.len();
    let mut per_node = vec![None; n];
    let mut max = None::<f64>;
    for i in 1..n.saturating_sub(1) {
        if exact[i].abs() <= EXACT_FLOOR {
            continue;
        }
        let err = ((exact[i] - numerical[i]) / exact[i]).abs();
        per_node[i] = Some(err);
        max = Some(max.map_or(err, |m: f64| m.max(err)));
    }
    max.map(|m| (per_node, m))
}

/// Sum of absolute successive differences.
pub fn total_variation(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

fn error_report(numerical: &[f64], exact: &[f64]) -> Option<ErrorReport> {
    let (per_node, max) = absolute_relative_error(numerical, exact)?;
    let max_value = numerical.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_value = numerical.iter().copied().fold(f64::INFINITY, f64::min);
    Some(ErrorReport {
        per_node_abs_rel_error: per_node,
        max_abs_rel_error: max,
        total_variation: total_variation(numerical),
        overshoot: (max_value - 1.0).max(0.0),
        undershoot: (-min_value).max(0.0),
        singular: false,
    })
}

/// One (method, pe, n_elements) outcome.
#[derive(Debug, Clone)]
pub struct CaseRecord {
    pub method: MethodKind,
    pub pe: f64,
    pub n_elements: usize,
    pub tau: f64,
    pub rcond: f64,
    pub singular: bool,
    /// Node coordinates of the mesh the case ran on.
    pub nodes: Vec<f64>,
    /// Exact solution at the nodes.
    pub exact: Vec<f64>,
    /// Nodal solution; `None` iff singular.
    pub solution: Option<Vec<f64>>,
    /// Metrics; `None` iff singular (or, degenerately, all nodes excluded).
    pub error: Option<ErrorReport>,
}

/// Sweep selection. The default mirrors the comparison study: all seven
/// methods, Pe in {1, 50, 100, 500}, 25/50/75/100 elements on (1, 2).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub methods: Vec<MethodKind>,
    pub pe_values: Vec<f64>,
    pub element_counts: Vec<usize>,
    pub domain: (f64, f64),
    pub quad_order: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            methods: MethodKind::ALL.to_vec(),
            pe_values: vec![1.0, 50.0, 100.0, 500.0],
            element_counts: vec![25, 50, 75, 100],
            domain: (1.0, 2.0),
            quad_order: 2,
        }
    }
}

impl SweepConfig {
    /// Sort, deduplicate, and validate. Sorting pins the case order to
    /// (method, pe, n_elements) regardless of how the lists were given.
    pub fn validated(mut self) -> Result<Self, FemvarError> {
        let bad = |msg: &str| Err(FemvarError::InvalidSweepConfig(msg.to_string()));
        if self.methods.is_empty() {
            return bad("method list is empty");
        }
        if self.pe_values.is_empty() {
            return bad("pe list is empty");
        }
        if self.element_counts.is_empty() {
            return bad("element count list is empty");
        }
        if self.pe_values.iter().any(|pe| !(*pe >= 0.0)) {
            return bad("pe values must be nonnegative");
        }
        if self.element_counts.iter().any(|n| *n < 2) {
            return bad("element counts must be at least 2");
        }
        if !(self.domain.1 > self.domain.0) {
            return Err(FemvarError::InvalidDomain {
                a: self.domain.0,
                b: self.domain.1,
            });
        }
        self.methods.sort();
        self.methods.dedup();
        self.pe_values.sort_by(f64::total_cmp);
        self.pe_values.dedup();
        self.element_counts.sort_unstable();
        self.element_counts.dedup();
        Ok(self)
    }
}

/// All case records of a sweep, ordered by (method, pe, n_elements).
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub cases: Vec<CaseRecord>,
}

impl SweepResult {
    pub fn find(&self, method: MethodKind, pe: f64, n_elements: usize) -> Option<&CaseRecord> {
        self.cases
            .iter()
            .find(|c| c.method == method && c.pe == pe && c.n_elements == n_elements)
    }

    /// Restriction to a single (pe, n_elements) pair, e.g. for an overlay
    /// plot.
    pub fn subset(&self, pe: f64, n_elements: usize) -> SweepResult {
        SweepResult {
            config: SweepConfig {
                pe_values: vec![pe],
                element_counts: vec![n_elements],
                ..self.config.clone()
            },
            cases: self
                .cases
                .iter()
                .filter(|c| c.pe == pe && c.n_elements == n_elements)
                .cloned()
                .collect(),
        }
    }
}

/// Assemble, constrain, solve, and score a single case. A singular solve
/// is data, not a crash: the record carries the flag and no metrics.
pub fn run_case(
    method: MethodKind,
    pe: f64,
    n_elements: usize,
    domain: (f64, f64),
    rule: &QuadratureRule,
) -> Result<CaseRecord, FemvarError> {
    let (a, b) = domain;
    let mesh = Mesh1D::new(a, b, n_elements)?;
    let oracle = ExactSolution::new(pe, a, b)?;
    let exact = mesh
        .nodes()
        .iter()
        .map(|&x| oracle.evaluate(x))
        .collect::<Result<Vec<f64>, _>>()?;
    let tau = stabilization_tau(pe, mesh.element_length())?;

    let system = apply_dirichlet(assemble(method, pe, &mesh, rule), 0.0, 1.0);
    let report = lu_solve(&system);

    let error = report
        .solution
        .as_deref()
        .and_then(|solution| error_report(solution, &exact));
    Ok(CaseRecord {
        method,
        pe,
        n_elements,
        tau,
        rcond: report.rcond,
        singular: report.singular,
        nodes: mesh.nodes().to_vec(),
        exact,
        solution: report.solution,
        error,
    })
}

/// Run every (method, pe, n_elements) combination of the config. Cases are
/// independent pure computations; records come back keyed and ordered, so
/// two runs of the same config are identical.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult, FemvarError> {
    let config = config.clone().validated()?;
    let rule = QuadratureRule::gauss_legendre(config.quad_order)?;
    let mut cases = Vec::with_capacity(
        config.methods.len() * config.pe_values.len() * config.element_counts.len(),
    );
    for &method in &config.methods {
        for &pe in &config.pe_values {
            for &n in &config.element_counts {
                cases.push(run_case(method, pe, n, config.domain, &rule)?);
            }
        }
    }
    Ok(SweepResult { config, cases })
}
