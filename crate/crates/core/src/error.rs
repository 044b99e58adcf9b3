use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpinCorrError {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix failed a structural check (hermiticity, trace, positivity).
    #[error("validation error: {0}")]
    Validation(String),

    /// A sweep or grid specification is malformed.
    #[error("spec error: {0}")]
    Spec(String),

    /// A temperature curve could not be assigned a behavior type.
    #[error("classification error: {0}")]
    Classification(String),

    /// Analytic and numerical paths disagree beyond tolerance.
    #[error("internal consistency error: {0}")]
    Inconsistency(String),
}
