use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("invalid product form: {0}")]
    InvalidProductForm(String),

    #[error("degree {degree} exceeds the configured maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("coefficient ratio b1/b0 = {ratio} lies outside (1, 3)")]
    RatioOutOfRange { ratio: f64 },

    #[error("θ-equation has {count} sign changes on (0, π/2) for ratio {ratio}")]
    NonUniqueTheta { ratio: f64, count: usize },

    #[error("polynomial is negative: p({theta}) = {value}")]
    NonnegativityFailure { theta: f64, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("pole of cot at x = {x}, y = {y}")]
    Pole { x: f64, y: f64 },

    #[error("capacity exceeded: {needed} terms required, limit is {limit}")]
    Capacity { needed: u64, limit: u64 },

    #[error("no feasible starting point among {starts} starts")]
    NoFeasiblePoint { starts: usize },

    #[error("invalid optimizer settings: {0}")]
    InvalidSettings(String),
}
