use thiserror::Error;

use crate::ingest::{IngestError, RecordError};
use crate::io::{DescribeError, DotError, QuadError};
use crate::model::ModelError;
use crate::query::QueryError;
use crate::reason::ReasonError;
use crate::store::StoreError;
use crate::vocab::VocabError;

/// Any error the crate produces.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Vocab(#[from] VocabError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Record(#[from] RecordError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Reason(#[from] ReasonError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Dot(#[from] DotError),
    #[error(transparent)]
    Describe(#[from] DescribeError),
}
