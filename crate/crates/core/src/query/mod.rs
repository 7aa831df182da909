//! Triple-pattern queries with temporal constraints, and the canned
//! analytics built on the reasoner.

mod analytics;
mod ast;
mod eval;
mod parser;

pub use analytics::{
    format_ratio, gender_tally, institution_cooperation, interdisciplinary_works, mobility_by_gender,
    supervision_gender_matrix, supervisor_gender_rate, Cooperation, GenderKey, GenderMatrix, GenderTally,
    MobilityReport, MobilityStats, RateEntry, SupervisorRates, TallyRole, WorkFilter,
};
pub use ast::{Clause, QueryAst, QueryTerm, TimeSpec};
pub use eval::{eval_query, ResultTable};
pub use parser::parse_query;

use thiserror::Error;

use crate::store::StoreError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("line {line}, column {column}: expected {}, found {found}", .expected.join(" or "))]
    Parse {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
    #[error("unknown property {0}")]
    UnknownProperty(String),
    #[error("selected variable ?{0} does not occur in any clause")]
    UnboundSelectVariable(String),
    #[error("invalid term {0}")]
    InvalidTerm(String),
    #[error(transparent)]
    Store(#[from] StoreError),
}

impl QueryError {
    /// Stable name of the error kind, for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            QueryError::Parse { .. } => "ParseError",
            QueryError::UnknownPrefix(_) => "UnknownPrefix",
            QueryError::UnknownProperty(_) => "UnknownProperty",
            QueryError::UnboundSelectVariable(_) => "UnboundSelectVariable",
            QueryError::InvalidTerm(_) => "InvalidTerm",
            QueryError::Store(_) => "StoreError",
        }
    }
}
