use thiserror::Error;

/// Errors surfaced by the exact lattice kernel and the layers on top of it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("mixed radicands: coordinates over Q(sqrt {left}) combined with Q(sqrt {right})")]
    MixedRadicand { left: u64, right: u64 },

    #[error("degenerate lattice (zero discriminant)")]
    DegenerateLattice,

    #[error("lattice is not definite")]
    NotDefinite,

    #[error("sublattice restriction is not negative definite")]
    NotNegativeDefinite,

    #[error("degenerate Hodge configuration")]
    DegenerateHodge,

    #[error("zero vector not allowed here")]
    ZeroVector,

    #[error("input vectors are linearly dependent")]
    DependentVectors,

    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),

    #[error("invalid wall numerics: {0}")]
    InvalidNumerics(String),

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("isotropic cone generator is unsupported")]
    IsotropicGenerator,

    #[error("lattice does not have hyperbolic signature (1, rank-1)")]
    NotHyperbolic,

    #[error("reference class lies on a wall")]
    ReferenceOnWall,

    #[error("reference class is not positive: q(omega) <= 0")]
    NonPositiveReference,

    #[error("not a positive three-space")]
    NotPositiveThreeSpace,

    #[error("expected exactly three generators, got {0}")]
    NotThreeGenerators(usize),

    #[error("not a hyperbolic summand: {0}")]
    InvalidSummand(String),

    #[error("period point lies outside the required domain: {0}")]
    OutsideDomain(String),

    #[error("orientation determinant vanishes (inconsistent input)")]
    ZeroOrientation,

    #[error("v is orthogonal to the period")]
    OrthogonalPeriod,

    #[error("U(n) summand is not orthogonal to the polarizing sublattice")]
    SummandNotOrthogonal,

    #[error("Fujiki constant unknown for this deformation type")]
    UnknownFujikiConstant,

    #[error("division by zero scalar")]
    DivisionByZero,
}

pub type Result<T> = std::result::Result<T, Error>;
