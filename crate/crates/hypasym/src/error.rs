use thiserror::Error;

/// Everything that can go wrong while evaluating, reducing or expanding.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    Pole(String),
    #[error("argument lies on the branch cut [1, inf)")]
    BranchCut,
    #[error("degenerate connection parameters: {0}")]
    Degenerate(String),
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("series did not converge within {0} terms")]
    NoConvergence(usize),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("rule {rule} not applicable: {reason}")]
    RuleNotApplicable { rule: String, reason: String },
    #[error("series order mismatch: have {have}, need {need}")]
    OrderMismatch { have: usize, need: usize },
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("no chain found for direction {0}")]
    NoChain(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
