//! Temporal knowledge graph for Master's theses and PhD dissertations.
//!
//! Flat catalog records are deconstructed into persons, corporate bodies,
//! works, places and genders, linked by time-scoped statements that carry
//! their provenance. The graph answers academic-network questions: who
//! supervised whom, how an institution was structured at a point in time,
//! how people moved between universities, and how gender is distributed
//! across all of it.
//!
//! Module map:
//!
//! * [`model`]: identifiers, time points and intervals, literals, triples.
//! * [`vocab`]: the fixed ontology of entity kinds and properties.
//! * [`store`]: the indexed, coalescing triple store.
//! * [`ingest`]: the line-oriented record format and its deconstruction.
//! * [`reason`]: hierarchy closure, succession chains, membership, mobility.
//! * [`query`]: the triple-pattern query language and canned analytics.
//! * [`io`]: canonical quad files, DOT export, entity descriptions.

pub mod error;
pub mod ingest;
pub mod io;
pub mod model;
pub mod names;
pub mod par;
pub mod query;
pub mod reason;
pub mod store;
pub mod synthetic;
pub mod vocab;

pub use error::Error;

/// The bundled sample batch: University X and University Y, their
/// subdivisions, persons A to D and the three theses linking them.
pub const FIXTURE: &str = include_str!("../fixtures/academic_network.rec");

pub use model::{
    DayRange, Datatype, Iri, Literal, ModelError, Provenance, TemporalTriple, Term, TimeInterval,
    TimePoint, Validity,
};
pub use names::Namespaces;
pub use par::Execution;
pub use store::{Inference, InsertEffect, Matched, Pattern, Store, StoreError, TimeConstraint};
pub use vocab::{EntityKind, FradCategory, Prop, PropertyDef, Vocabulary};
