use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong while building meshes, evaluating the
/// closed-form solution, assembling, or writing outputs.
///
/// A singular linear system is deliberately *not* an error: it is a result
/// the study reports (see [`crate::solver::SolveReport`]).
#[derive(Debug, Error)]
pub enum FemvarError {
    #[error("domain right end must exceed left end (got a = {a}, b = {b})")]
    InvalidDomain { a: f64, b: f64 },

    #[error("mesh needs at least 2 elements so an interior unknown exists (got {0})")]
    TooFewElements(usize),

    #[error("reference coordinate {0} lies outside [0, 1]")]
    ReferenceCoordOutOfRange(f64),

    #[error("unsupported quadrature order {0} (supported: 1..=5)")]
    UnsupportedQuadratureOrder(usize),

    #[error("x = {x} lies outside the domain [{a}, {b}]")]
    CoordinateOutOfDomain { x: f64, a: f64, b: f64 },

    #[error("Peclet number must be nonnegative (got {0})")]
    NegativePeclet(f64),

    #[error("pe * (b - a) = {0} exceeds 700; exp(pe * (b - a)) would overflow f64")]
    PecletOverflow(f64),

    #[error("element length must be positive (got {0})")]
    NonPositiveElementLength(f64),

    #[error("node {node} is a boundary node; collocation rows exist at interior nodes only")]
    CollocationAtBoundary { node: usize },

    #[error("node {node} out of range for a mesh with {n_nodes} nodes")]
    NodeOutOfRange { node: usize, n_nodes: usize },

    #[error("invalid sweep configuration: {0}")]
    InvalidSweepConfig(String),

    #[error("nothing to plot: the selection contains no drawable case")]
    EmptyPlotSelection,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl FemvarError {
    /// Attach path context to an I/O failure.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        FemvarError::Io {
            path: path.into(),
            source,
        }
    }
}
