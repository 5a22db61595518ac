use num_complex::Complex64;
use thiserror::Error;

/// Errors surfaced by the library. Variants are grouped roughly by module;
/// callers that only care about "configuration vs numerical" can match on
/// [`ArcError::is_config`].
#[derive(Debug, Error)]
pub enum ArcError {
    #[error("alpha = {0} out of range (need {min} < alpha < pi - {min})", min = crate::arc::ALPHA_MARGIN)]
    AlphaOutOfRange(f64),

    #[error("theta = {theta} outside the open arc ({lo}, {hi})")]
    ThetaOutsideArc { theta: f64, lo: f64, hi: f64 },

    #[error("theta = {0} within {1:e} of an arc endpoint")]
    EndpointBand(f64, f64),

    #[error("omega = {0} outside [0, pi]")]
    OmegaOutOfRange(f64),

    #[error("disk map evaluated at a pole: v = {0}")]
    DiskMapPole(Complex64),

    #[error(
        "branch selection ambiguous: z = {0} lies on (or within the exclusion band of) the arc"
    )]
    BranchAmbiguous(Complex64),

    #[error("quadrature rule needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("quadrature rule has {got} nodes, need at least {need} for degree {degree}")]
    InsufficientResolution {
        got: usize,
        need: usize,
        degree: usize,
    },

    #[error("grid: {0}")]
    Grid(String),

    #[error("p = {0} unsupported (need p >= 1.05)")]
    UnsupportedExponent(f64),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("magnitude overflow at degree {n}: log10 |chi^n| ~ {log10_mag:.1}; use the log-magnitude path")]
    Overflow { n: usize, log10_mag: f64 },

    #[error("principal-value refinement stalled: delta = {delta:e} > tol = {tol:e}")]
    PvNotConverged { delta: f64, tol: f64 },

    #[error("degree {0} exceeds the configured maximum {1}")]
    DegreeTooLarge(usize, usize),

    #[error("weight sample {got} below the declared lower bound {declared}")]
    WeightBelowLower { got: f64, declared: f64 },

    #[error("weight difference quotient {got} exceeds the declared Lipschitz constant {declared}")]
    LipschitzExceeded { got: f64, declared: f64 },

    #[error("Gram condition estimate {0:.3e} exceeds 1e12 at degree {1}")]
    IllConditioned(f64, usize),

    #[error("exponent constraints violated: {0}")]
    BoundednessParams(String),

    #[error("function family member {0} has zero norm")]
    ZeroNorm(usize),
}

impl ArcError {
    /// True for errors caused by bad arguments/configuration (as opposed to
    /// numerical breakdown at runtime).
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            ArcError::AlphaOutOfRange(_)
                | ArcError::ThetaOutsideArc { .. }
                | ArcError::EndpointBand(..)
                | ArcError::OmegaOutOfRange(_)
                | ArcError::TooFewNodes(_)
                | ArcError::InsufficientResolution { .. }
                | ArcError::Grid(_)
                | ArcError::UnsupportedExponent(_)
                | ArcError::DegreeTooLarge(..)
                | ArcError::BoundednessParams(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, ArcError>;
