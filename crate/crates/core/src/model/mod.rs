//! Core value types shared by every other module.

mod iri;
mod literal;
mod time;
mod triple;

pub use iri::Iri;
pub use literal::{Datatype, Literal};
pub use time::{DayRange, Precision, TimeInterval, TimePoint, Validity};
pub use triple::{Provenance, TemporalTriple, Term};
pub(crate) use triple::escape_into as triple_escape;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid IRI {text:?}: {reason}")]
    InvalidIri { text: String, reason: String },
    #[error("invalid date: {field} {message}")]
    InvalidDate { field: &'static str, message: String },
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("invalid {datatype} literal {lexical:?}: {reason}")]
    InvalidLiteral {
        lexical: String,
        datatype: &'static str,
        reason: String,
    },
    #[error("invalid provenance: {0}")]
    InvalidProvenance(String),
}
