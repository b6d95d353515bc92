use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension out of range: {0} (supported 1..={max})", max = crate::linalg::MAX_DIM - 2)]
    DimensionOutOfRange(usize),

    #[error("skeleton order k={k} out of range for a polytope of dimension {dim}")]
    SkeletonOutOfRange { k: usize, dim: usize },

    #[error("face is not a proper face of the polytope")]
    NotProperFace,

    #[error("degenerate polytope: {0}")]
    DegeneratePolytope(String),

    #[error("polytope does not fit inside the ball: {0}")]
    PolytopeOutsideBall(String),

    #[error("node budget exceeded: estimated {estimated} nodes > cap {cap}")]
    NodeBudgetExceeded { estimated: usize, cap: usize },

    #[error("point set is affinely degenerate (rank {rank} < {needed})")]
    AffinelyDegenerate { rank: usize, needed: usize },

    #[error("subgradient cell at node {node} is unbounded")]
    UnboundedCell { node: usize },

    #[error("node {node} is not an interior node")]
    NotInteriorNode { node: usize },

    #[error("measure atom at {loc:?} does not coincide with any node")]
    AtomOffNode { loc: Vec<f64> },

    #[error("total target mass {mass:.6} exceeds the subgradient capacity {capacity:.6} of the boundary data")]
    MassExceedsCapacity { mass: f64, capacity: f64 },

    #[error("solver did not converge: {sweeps} sweeps, max update {max_update:.3e}, residual {residual:.3e}")]
    NonConvergence {
        sweeps: usize,
        max_update: f64,
        residual: f64,
    },

    #[error("quadrature / series check failed: {0}")]
    NumericsCheckFailed(String),

    #[error("barrier precondition violated: {0}")]
    BarrierPrecondition(String),

    #[error("barrier calibration found no admissible (C, rho) on the search grid for n={n}, k={k}")]
    CalibrationFailed { n: usize, k: usize },

    #[error("point lies outside the barrier slab")]
    OutsideSlab,

    #[error("finite-difference stencil exits the domain of the field")]
    StencilExitsDomain,

    #[error("no admissible epsilon0 above {min:.1e}: {0}", min = crate::tol::EPSILON0_FLOOR)]
    NoAdmissibleEpsilon0(String),

    #[error("construction requires ambient dimension n >= 3, got {0}")]
    ConstructionDimension(usize),

    #[error("dual cloud does not cover the slope range (uncovered extent {extent:.4})")]
    DualCloudTooSmall { extent: f64 },

    #[error("target domain does not contain the subgradient image: {0}")]
    ContainmentFailed(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("verdict failure: {0}")]
    Verdict(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
