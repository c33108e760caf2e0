use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("reversal is not a fixed-point-free involution (dart {0})")]
    NotAnInvolution(usize),
    #[error("{0} is not a permutation of the darts")]
    NotAPermutation(&'static str),
    #[error("half-rhombus angle {angle} on edge {edge} is outside (0, π/2)")]
    ThetaOutOfRange { edge: usize, angle: String },
    #[error("map data does not describe a connected oriented surface: {0}")]
    NonOrientableOrInconsistent(String),
    #[error("transition from dart {0} backtracks along its reversal")]
    BacktrackTransition(usize),
    #[error("darts {0} and {1} are not consecutive")]
    NotConsecutive(usize, usize),
    #[error("walk is not closed")]
    OpenWalk,
    #[error("size limit exceeded: {0}")]
    SizeOverflow(String),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("face sign equations unsolvable")]
    UnsolvableSigns,
    #[error("winding product is not ±1; the cocycle is not a spin structure")]
    NotPlusMinusOne,
    #[error("intersection form is degenerate (rank {rank} of {dim})")]
    DegenerateForm { rank: usize, dim: usize },
    #[error("Gauss sum {sum} is not ±2^g")]
    GaussSumNotPM2g { sum: i64 },
    #[error("sampled determinant is not the square of a polynomial (residual {residual:e})")]
    NotASquare { residual: f64 },
    #[error("input too large for exhaustive enumeration: {0}")]
    TooLarge(String),
    #[error("genus {0} is too high for this identity")]
    GenusTooHigh(u32),
    #[error("genus {0} is too low for this probe")]
    GenusTooLow(u32),
    #[error("all sampled denominators vanished")]
    DivisionNearZero,
    #[error("operation requires real edge weights")]
    ComplexWeights,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
