use thiserror::Error;

/// Errors surfaced by the numerical modules.
///
/// Variant names double as the stable error names printed by the CLI; see
/// [`Error::name`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("point outside the domain box: {0}")]
    Domain(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular Jacobian (sigma_min / sigma_max = {ratio:e})")]
    SingularJacobian { ratio: f64 },
    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },
    #[error("continuation seed is not on the curve (residual {residual:e})")]
    SeedNotOnCurve { residual: f64 },
    #[error("Jacobian at the continuation seed is rank deficient")]
    RankDeficientSeed,
    #[error("family is not a Morse family of functions at the base point (rank {rank} < {expected})")]
    NotMorseFamily { rank: usize, expected: usize },
    #[error("point is not on the big critical set (residual {residual:e})")]
    NotOnSigmaStar { residual: f64 },
    #[error("no independent column subset found for a chart of the critical set")]
    ChartFailure,
    #[error("graph-like family produced {count} delta points")]
    DeltaNonEmptyForGraphLike { count: usize },
    #[error("degenerate first fundamental form (det = {det:e})")]
    DegenerateMetric { det: f64 },
    #[error("characteristic left the domain at t = {t}")]
    BlowUp { t: f64 },
    #[error("unknown normal form {0}; expected 1..=6")]
    UnknownGerm(usize),
    #[error("germ is not singular at the origin: {0}")]
    NotSingularGerm(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::UndeclaredVariable(_) => "UndeclaredVariable",
            Error::Domain(_) => "DomainError",
            Error::NonFinite(_) => "NonFinite",
            Error::Dimension(_) => "DimensionMismatch",
            Error::SingularJacobian { .. } => "SingularJacobian",
            Error::MaxIterations { .. } => "MaxIterations",
            Error::SeedNotOnCurve { .. } => "SeedNotOnCurve",
            Error::RankDeficientSeed => "RankDeficientSeed",
            Error::NotMorseFamily { .. } => "NotMorseFamily",
            Error::NotOnSigmaStar { .. } => "NotOnSigmaStar",
            Error::ChartFailure => "ChartFailure",
            Error::DeltaNonEmptyForGraphLike { .. } => "DeltaNonEmptyForGraphLike",
            Error::DegenerateMetric { .. } => "DegenerateMetric",
            Error::BlowUp { .. } => "BlowUp",
            Error::UnknownGerm(_) => "UnknownGerm",
            Error::NotSingularGerm(_) => "NotSingularGerm",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
