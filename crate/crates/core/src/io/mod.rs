//! Serialization: canonical temporal quads, Graphviz DOT, and entity
//! descriptions for dereferencing.

mod describe;
mod dot;
mod quads;

pub use describe::{describe_entity, DescribeError, Description};
pub use dot::{export_dot, DotError};
pub use quads::{
    context_iri, export_quads, export_quads_with, import_quads, import_quads_with, quads_for, QuadDocument,
    QuadError,
};
