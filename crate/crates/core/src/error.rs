use std::fmt;

use thiserror::Error;

use crate::domain::Domain;

/// All failure modes of the calculus. Decision procedures are total on the
/// shipped grammar; errors either signal bad inputs (`DomainMismatch`,
/// `ValidationError`, ...) or an honest refusal to guess (`Undecidable`,
/// `NotClosed`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: expected {expected}, got {got}")]
    DomainMismatch { expected: String, got: String },

    /// A (map, constructor) or (operation, constructor) pair without a
    /// closure rule. Must not occur for set algebra on the shipped grammar.
    #[error("no closure rule: {0}")]
    NotClosed(String),

    /// Membership question outside of the shipped decision rules.
    #[error("undecidable: {0}")]
    Undecidable(String),

    #[error("ordinal out of supported range: {0}")]
    OrdinalOutOfRange(String),

    #[error("no metadata recorded for this ideal expression")]
    NoMetadata,

    #[error("epsilon must be positive")]
    NonpositiveEpsilon,

    /// A refinement cell of two simple sequences is not expressible in the
    /// set grammar.
    #[error("refinement cell not expressible: {0}")]
    RefinementNotClosed(String),

    #[error("membership verdict lacks the witness needed here")]
    WitnessUnavailable,

    /// An operation that consumes a prior membership verdict was called
    /// without one.
    #[error("a membership verdict is required before this operation")]
    MembershipRequired,

    #[error("natural-number overflow in {0}")]
    Overflow(&'static str),

    #[error("constructor invariant violated: {0}")]
    ValidationError(String),

    #[error("parse error at {line}:{col}: {message}")]
    ParseError {
        line: usize,
        col: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain_mismatch(expected: &Domain, got: &Domain) -> Self {
        Error::DomainMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }

    /// A membership query that escapes the carrier of a restricted ideal is
    /// a domain violation: the restriction's domain is the restricting set.
    pub fn outside_restriction(within: impl fmt::Display, got: impl fmt::Display) -> Self {
        Error::DomainMismatch {
            expected: format!("subset of {within}"),
            got: got.to_string(),
        }
    }
}
