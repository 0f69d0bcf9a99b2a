use thiserror::Error;

/// Errors produced by mesh loading, geometry queries and the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what} index {index} out of range ({len} available)")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("mesh has no vertices")]
    EmptyMesh,

    #[error("tet {index} is degenerate (normalized volume {volume:e})")]
    DegenerateTet { index: usize, volume: f64 },

    #[error("cylinder midpoint coincides with the head mean; plane normal is undefined")]
    DegenerateNormal,

    #[error("invalid cylinder: {0}")]
    InvalidCylinder(String),

    #[error("cylinder rejected: length {length} m < l_min {l_min} m")]
    RejectedCylinder { length: f64, l_min: f64 },

    #[error("matrix is numerically zero")]
    NumericallyZero,

    #[error("surface is not closed and consistently oriented ({bad_edges} bad edges)")]
    OpenSurface { bad_edges: usize },

    #[error("system matrix is not positive definite (pivot at vertex {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("vertex {vertex} has zero mass")]
    ZeroMass { vertex: usize },

    #[error("solver diverged at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("no correspondences found for {iterations} consecutive outer iterations")]
    NoCorrespondences { iterations: usize },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
