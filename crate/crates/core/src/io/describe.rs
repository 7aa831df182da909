//! Entity description documents: what a dereferenced identifier returns.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::quads::{quads_for, QuadDocument};
use crate::model::{Iri, TemporalTriple, Term};
use crate::par::Execution;
use crate::store::{Matched, Pattern, Store};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescribeError {
    #[error("{0} does not occur in the store")]
    NotFound(Iri),
}

/// Every statement touching `focus`, inverse-derived ones included, plus
/// the current label of each neighbour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Description {
    pub focus: Iri,
    pub triples: Vec<Matched>,
    pub neighbor_labels: BTreeMap<Iri, TemporalTriple>,
}

impl Description {
    /// All statements of the description (neighbour labels included) as a
    /// canonical quad document.
    pub fn to_quads(&self, store: &Store, base: &Iri) -> QuadDocument {
        let all = self
            .triples
            .iter()
            .map(|m| &m.triple)
            .chain(self.neighbor_labels.values());
        quads_for(all, store.vocab(), base, Execution::Sequential)
    }
}

pub fn describe_entity(store: &Store, focus: &Iri) -> Result<Description, DescribeError> {
    if !store.mentions(focus) {
        return Err(DescribeError::NotFound(focus.clone()));
    }
    let mut seen: BTreeSet<Matched> = BTreeSet::new();
    for pattern in [
        Pattern::any().subject(focus).with_inverses(),
        Pattern::any().object(focus.clone()).with_inverses(),
    ] {
        seen.extend(store.match_pattern(&pattern).expect("no property bound"));
    }
    let mut neighbor_labels = BTreeMap::new();
    for m in &seen {
        let t = &m.triple;
        let other = if t.subject == *focus {
            match &t.object {
                Term::Iri(o) => o,
                Term::Literal(_) => continue,
            }
        } else {
            &t.subject
        };
        if other == focus || neighbor_labels.contains_key(other) {
            continue;
        }
        if let Some(label) = store.current_label(other) {
            neighbor_labels.insert(other.clone(), label.clone());
        }
    }
    Ok(Description {
        focus: focus.clone(),
        triples: seen.into_iter().collect(),
        neighbor_labels,
    })
}
