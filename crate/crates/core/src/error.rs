use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("not a rational number: {0:?}")]
    Rational(String),
    #[error("malformed monomial code: {0:?}")]
    Monomial(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Errors from the truncated polynomial ring and characteristic-class calculus.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RingError {
    #[error("operands live on different varieties")]
    VarietyMismatch,
    #[error("constant term must be 1, found {0}")]
    ConstantTerm(String),
    #[error("operation needs a hypersurface, got a K3 surface")]
    NotHypersurface,
    #[error("invalid variety data: {0}")]
    InvalidVariety(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MukaiError {
    #[error("class is not exceptional: <v,v> = {0}, expected 1")]
    NotExceptional(String),
    #[error("primitive part has dimension {got}, expected {expected}")]
    PrimDimension { expected: usize, got: usize },
    #[error("primitive form is degenerate")]
    DegeneratePrim,
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("quadratic space is degenerate")]
    Degenerate,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("generator {0} is not an isometry of the form")]
    NotIsometry(usize),
    #[error("group not verifiably finite: closure exceeded {0} elements")]
    NotFinite(usize),
    #[error("restriction of the form to the fixed space is degenerate")]
    DegenerateFixedSpace,
    #[error("vectors have different or vanishing norms: q(x) = {qx}, q(y) = {qy}")]
    NormMismatch { qx: String, qy: String },
    #[error("vector is not fixed by the group")]
    NotFixed,
    #[error("map does not commute with the group action")]
    NotEquivariant,
    #[error("map does not pull back the target form to the source form")]
    NotAnIsometry,
    #[error("subspace is not contained in the fixed space")]
    NotInFixedSpace,
    #[error("unsupported: degenerate complement")]
    DegenerateComplement,
    #[error("matrix is singular")]
    Singular,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorrError {
    #[error("expected classes on X^{expected}, got X^{got}")]
    Arity { expected: u8, got: u8 },
    #[error("malformed projection: {0}")]
    Projection(String),
    #[error("exponent {0} exceeds the bookkeeping range")]
    Overflow(u32),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealizationError {
    #[error("realized classes live on different factor lists")]
    FactorMismatch,
    #[error("operation needs classes on {expected} factors, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("MCK shadow violated: remainder has a nonzero primitive component at {0}")]
    MckShadowViolated(String),
    #[error("middle-dimensional classes need an even-dimensional factor")]
    OddDimension,
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Corr(#[from] CorrError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertError {
    #[error("algebraic basis invalid: {0}")]
    AlgebraicBasis(String),
    #[error("not Witt-equivalent transcendental shadows: ranks {0} and {1}")]
    RankMismatch(usize, usize),
    #[error("transcendental map is not an isometry")]
    TranscendentalNotIsometric,
    #[error("transcendental map is not equivariant")]
    TranscendentalNotEquivariant,
    #[error("group actions on the two sides are incompatible: {0}")]
    GroupMismatch(String),
    #[error("algebraic parts are not matched: {0}")]
    AlgebraicMismatch(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}
