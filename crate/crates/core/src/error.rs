use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The propagator scale must stay positive.
    #[error("omega must be positive, got {0}")]
    NonPositiveOmega(String),

    /// An integrand outside the closure the rules are defined on.
    #[error("no rule for {0}")]
    RuleDomain(String),

    /// The bare measure `∫dτ` (all powers zero) is divergent.
    #[error("bare measure term with coefficient {0} is divergent")]
    BareMeasure(String),

    #[error("precondition violated in {op}: {detail}")]
    Precondition { op: &'static str, detail: String },

    #[error("odd number of legs ({0}) cannot be fully contracted")]
    OddLegCount(usize),

    #[error("perturbative order {0} is not supported (expected 1 or 2)")]
    UnsupportedOrder(u32),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
