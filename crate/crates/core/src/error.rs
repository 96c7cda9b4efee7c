use thiserror::Error;

/// Errors raised by the series, operator, model and coupling layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("series has zero constant term and cannot be inverted")]
    NotAUnit,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("recurrence cannot be solved forward: leading polynomial vanishes at n = {n}")]
    NonsolvableRecurrence { n: usize },

    #[error("no recurrence with m = {m}, order = {order} fits the data{}", hint(.min_terms))]
    NoFit {
        m: usize,
        order: usize,
        min_terms: Option<usize>,
    },

    #[error("recurrence fit with m = {m}, order = {order} is ambiguous (solution space dimension {dim})")]
    AmbiguousFit { m: usize, order: usize, dim: usize },

    #[error("model error: {0}")]
    Model(String),

    #[error("operator is not Picard-Fuchs at z = 0 (leading coefficient vanishes)")]
    NotPicardFuchs,

    #[error("instanton expansion is only defined for 3-folds, got dimension {0}")]
    UnsupportedDimension(usize),

    #[error("inconsistent system at multi-index {index:?}: {detail}")]
    InconsistentSystem { index: Vec<u32>, detail: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn hint(min_terms: &Option<usize>) -> String {
    match min_terms {
        Some(n) => format!(" (at least {n} coefficients are required)"),
        None => String::new(),
    }
}

impl Error {
    /// True for malformed input (config schema, Calabi-Yau condition, parse
    /// failures) as opposed to a failure of the computation itself.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Model(_) | Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
