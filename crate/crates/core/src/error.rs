use thiserror::Error;

/// Errors raised anywhere in the integration pipeline.
///
/// Variants that can be cured by working over a bigger field carry the
/// "enlarge K" hint in their message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field specification: {0}")]
    InvalidField(String),
    #[error("division by an element indistinguishable from zero (known to O(pi^{0}))")]
    DivisionByZero(i64),
    #[error("square root of an element of odd valuation; enlarge K")]
    OddValuation,
    #[error("square root of a non-square residue; enlarge K")]
    NonSquareResidue,
    #[error("logarithm of zero")]
    ZeroArgument,
    #[error("factors are not coprime modulo the uniformizer")]
    NotCoprimeModP,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("series does not have constant term one")]
    BadConstantTerm,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("point is not on the curve: {0}")]
    NotOnCurve(String),
    #[error("the two points of a third-kind divisor coincide")]
    EqualPoints,
    #[error("curve is not elliptic (degree 3 model required)")]
    NotElliptic,
    #[error("point is 2-torsion")]
    TwoTorsionPoint,
    #[error("needs a larger field: {0}; enlarge K")]
    NeedsLargerField(String),
    #[error("point lies on the annulus of edge {0}")]
    OnBoundary(usize),
    #[error("cannot decide location at working precision: {0}")]
    AmbiguousAtPrecision(String),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("singular linear system")]
    SingularSystem,
    #[error("path is broken between consecutive edges {0} and {1}")]
    BrokenPath(usize, usize),
    #[error("truncation order {0} exceeds the hard cap {1}")]
    BudgetExceeded(usize, usize),
    #[error("endpoint lies in the residue disc of a pole of the integrand")]
    PoleAtEndpoint,
    #[error("model at vertex {vertex} has degree {degree}: {message}")]
    BackendUnavailable {
        vertex: String,
        degree: usize,
        message: String,
    },
    #[error("points P, -P, R, -R must be pairwise distinct")]
    DegenerateInputPoints,
    #[error("integrals along two paths disagree")]
    PathDependentMismatch,
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Module name that raised this kind of error, used for CLI diagnostics.
    pub fn module(&self) -> &'static str {
        use Error::*;
        match self {
            InvalidField(_) | DivisionByZero(_) | OddValuation | NonSquareResidue
            | ZeroArgument => "padic",
            NotCoprimeModP | PrecisionExhausted(_) | BadConstantTerm => "polyring",
            InvalidCurve(_) | NotOnCurve(_) | EqualPoints | NotElliptic | TwoTorsionPoint => {
                "curve"
            }
            NeedsLargerField(_) | OnBoundary(_) | AmbiguousAtPrecision(_) | DisconnectedGraph => {
                "covering"
            }
            SingularSystem | BrokenPath(..) => "tropical",
            BudgetExceeded(..) | PoleAtEndpoint | BackendUnavailable { .. } => "wideopen",
            DegenerateInputPoints | PathDependentMismatch => "vologodsky",
            Invalid(_) => "input",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
