use alloc::string::String;
use core::fmt;

/// Errors raised by the numeric and arithmetic layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// Independent evaluation routes disagree beyond the precision budget.
    PrecisionExhausted(String),
    /// The arithmetic hypotheses of a derivation are not met.
    Hypothesis(String),
    /// A derived value failed its numeric audit.
    Consistency(String),
    NegativeRadicand,
    DivisionByZero,
    /// No integer relation survived re-verification.
    NotFound(String),
    /// A bounded search window contained no admissible witness.
    SearchExhausted(String),
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(s) => write!(f, "domain error: {s}"),
            Error::PrecisionExhausted(s) => write!(f, "precision exhausted: {s}"),
            Error::Hypothesis(s) => write!(f, "hypothesis not satisfied: {s}"),
            Error::Consistency(s) => write!(f, "consistency check failed: {s}"),
            Error::NegativeRadicand => f.write_str("square root of a negative value"),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::NotFound(s) => write!(f, "no relation found: {s}"),
            Error::SearchExhausted(s) => write!(f, "search window exhausted: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
        }
    }
}

impl core::error::Error for Error {}

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(alloc::format!($($arg)*)) };
}
pub(crate) use domain;
