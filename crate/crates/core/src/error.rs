use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample count {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("period must be positive and finite, got {0}")]
    NonPositivePeriod(f64),

    #[error("unsupported dimension {0}, expected 1 or 2")]
    UnsupportedDimension(usize),

    #[error("vector has {got} components but the grid has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("exponent must be positive (or infinite), got {0}")]
    InvalidExponent(f64),

    #[error("smoothness must be finite, got {0}")]
    InvalidSmoothness(f64),

    #[error("direction {0:?} is not a unit vector")]
    NotUnitVector(Vec<f64>),

    #[error("modulation frequency {0:?} is not on the frequency lattice")]
    OffLattice(Vec<f64>),

    #[error("top annulus edge 2^{} = {top} exceeds the Nyquist frequency {nyquist}", .jmax + 1)]
    BandAboveNyquist { jmax: usize, top: f64, nyquist: f64 },

    #[error("plateau margin eps0 must lie in (0, 1/2), got {0}")]
    InvalidMargin(f64),

    #[error("band index {j} outside 0..={jmax}")]
    BandOutOfRange { j: usize, jmax: usize },

    #[error("Triebel-Lizorkin norm with p = inf must go through tl_norm_infq")]
    InfiniteP,

    #[error(
        "translation sequence does not fit: {jmax} x {spacing} plus guard {guard} must stay below half period {half}"
    )]
    SequenceDoesNotFit {
        jmax: usize,
        spacing: f64,
        guard: f64,
        half: f64,
    },

    #[error("translation spacing must be positive, got {0}")]
    InvalidSpacing(f64),

    #[error("translation sequence covers bands 1..={have} but the family needs 1..={need}")]
    IncompatibleJmax { have: usize, need: usize },

    #[error("unsupported derivative order {0}, expected 0 or 1")]
    UnsupportedOrder(usize),

    #[error("growth scan needs at least 64 samples, got {0}")]
    TooFewSamples(usize),

    #[error("denominator of the ratio is zero")]
    ZeroDenominator,

    #[error("input component {0} is not real and nonnegative")]
    NegativeComponent(usize),

    #[error("{case} requires {requirement}, got p = {p}, q = {q}")]
    CaseMismatch {
        case: &'static str,
        requirement: &'static str,
        p: f64,
        q: f64,
    },

    #[error("bump radius {mu0} too large: 2*mu0 must stay below L/4 = {limit}")]
    RadiusTooLarge { mu0: f64, limit: f64 },

    #[error("atom {j} support B(-u_j, 2 mu0) leaves the guarded region")]
    SupportViolation { j: usize },

    #[error("truncation J = {atoms} exceeds Jmax - 2 = {limit}")]
    TooManyAtoms { atoms: usize, limit: usize },

    #[error("weight sequence violates |a_j| <= 2^|j-k| |a_k| at j = {j}, k = {k}")]
    WeightRatio { j: usize, k: usize },

    #[error("invalid config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
