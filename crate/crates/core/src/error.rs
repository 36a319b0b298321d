use alloc::string::String;
use core::fmt;

use crate::graph::ValidationReport;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Vertex index outside `0..num_vertices`.
    UnknownVertex(usize),
    /// A generator or operation parameter is outside its valid range.
    InvalidParameter(String),
    /// Vector length or matrix shape does not match the graph.
    DimensionMismatch { expected: usize, found: usize },
    /// The graph violates one of the structural invariants.
    InvalidGraph(ValidationReport),
    /// An iterative solver hit its iteration cap.
    NotConverged { iterations: usize, residual: f64 },
    /// The Neumann series did not reach its tail tolerance before the order cap.
    SeriesNotConverged { order: usize, spectral_radius: f64, tail_bound: f64 },
    /// A batch operation was asked for more vertices than its cap allows.
    SizeCapExceeded { vertices: usize, cap: usize },
    /// Closed form requested at a parameter where it degenerates.
    Degenerate(String),
    /// A ± word stepped below level 0 of a Bratteli diagram.
    LevelUnderflow { position: usize },
    /// Consecutive vertices of a word are not joined by an edge.
    NotAdjacent { from: usize, to: usize },
    /// A function expected to be harmonic on the interior is not.
    NotHarmonic { residual: f64 },
    /// The truncation has no frontier vertices.
    NoFrontier,
    /// Division by a zero Green's function entry.
    ZeroDenominator,
    /// The operation does not apply to this input.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidGraph(report) => write!(f, "invalid graph: {report}"),
            Error::NotConverged { iterations, residual } => write!(
                f,
                "solver did not converge after {iterations} iterations (relative residual {residual:e})"
            ),
            Error::SeriesNotConverged { order, spectral_radius, tail_bound } => write!(
                f,
                "Neumann series not converged at order {order} (spectral radius {spectral_radius}, tail bound {tail_bound:e})"
            ),
            Error::SizeCapExceeded { vertices, cap } => write!(
                f,
                "{vertices} vertices exceed the cap of {cap}; use pairwise queries instead"
            ),
            Error::Degenerate(msg) => write!(f, "degenerate: {msg}"),
            Error::LevelUnderflow { position } => {
                write!(f, "word steps below level 0 at position {position}")
            }
            Error::NotAdjacent { from, to } => write!(f, "vertices {from} and {to} are not adjacent"),
            Error::NotHarmonic { residual } => {
                write!(f, "function is not harmonic on the interior (residual {residual:e})")
            }
            Error::NoFrontier => write!(f, "truncation has no frontier"),
            Error::ZeroDenominator => write!(f, "zero Green's function denominator"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
