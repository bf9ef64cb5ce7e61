use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cone is not pointed: it contains a line")]
    NotPointed,

    #[error("cone generators do not span R^{dim}")]
    DegenerateCone { dim: usize },

    #[error("{what} is not supported in dimension {dim}")]
    UnsupportedDim { what: &'static str, dim: usize },

    #[error("{what} requires a polyhedral cone")]
    UnsupportedCone { what: &'static str },

    #[error("vector has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector cannot be normalized (zero or non-finite entries)")]
    ZeroVector,

    #[error("direction is not a unit vector: |v| = {norm}")]
    NotUnit { norm: f64 },

    #[error("direction lies outside the open spherical domain")]
    OutsideDomain,

    #[error("direction lies outside Ω of the cone")]
    OutsideOmega,

    #[error("facet normal {index} is not in the interior of the polar cone")]
    InvalidDirection { index: usize },

    #[error("value {index} must be strictly positive, got {value}")]
    NonPositive { index: usize, value: f64 },

    #[error("directions {first} and {second} coincide")]
    DuplicateDirection { first: usize, second: usize },

    #[error("at least one facet is required")]
    NoFacets,

    #[error("support function is unbounded in this direction")]
    Unbounded,

    #[error("p-co-sum requires both sets to share the same normal directions")]
    MismatchedNormals,

    #[error("exponent p = {p} is not allowed here")]
    InvalidP { p: f64 },

    #[error("truncation at height {t} does not meet the set")]
    EmptyTruncation { t: f64 },

    #[error("measure restricted to the inner region has zero mass")]
    ZeroMass,

    #[error("support profile must be strictly negative (sample {index} is {value})")]
    NonNegativityViolation { index: usize, value: f64 },

    #[error("at least {needed} samples are required, got {found}")]
    TooFewSamples { needed: usize, found: usize },

    #[error("atom {index} is too close to the boundary of the domain (angle {angle})")]
    AtomTooClose { index: usize, angle: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
