//! Compact and expand identifiers for human-facing text.
//!
//! Minted entities print relative to the base (`person/pA`), vocabulary
//! terms as `etd:` compact names, and anything else as `<iri>`.

use crate::model::{Datatype, Iri, ModelError, Term};
use crate::vocab::{EntityKind, Vocabulary, PREFIX};

pub const DEFAULT_BASE: &str = "http://example.org/etd";

#[derive(Debug, Clone)]
pub struct Namespaces {
    base: Iri,
    vocab: Iri,
}

impl Namespaces {
    pub fn new(base: Iri, vocab: &Vocabulary) -> Self {
        Namespaces {
            base,
            vocab: vocab.namespace().clone(),
        }
    }

    pub fn base(&self) -> &Iri {
        &self.base
    }

    fn base_prefix(&self) -> String {
        format!("{}/", self.base.as_str().trim_end_matches('/'))
    }

    pub fn compact(&self, iri: &Iri) -> String {
        let text = iri.as_str();
        if let Some(local) = text.strip_prefix(self.vocab.as_str()) {
            return format!("{PREFIX}:{local}");
        }
        if let Some(rel) = text.strip_prefix(&self.base_prefix()) {
            if let Some((seg, rest)) = rel.split_once('/') {
                if EntityKind::from_segment(seg).is_some() && !rest.is_empty() {
                    return rel.to_string();
                }
            }
        }
        format!("<{text}>")
    }

    pub fn compact_term(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => self.compact(iri),
            Term::Literal(lit) => {
                let mut out = String::from("\"");
                crate::model::triple_escape(lit.lexical(), &mut out);
                out.push('"');
                match (lit.language(), lit.datatype()) {
                    (Some(lang), _) => {
                        out.push('@');
                        out.push_str(lang);
                    }
                    (None, Datatype::String) => {}
                    (None, dt) => {
                        out.push_str("^^");
                        out.push_str(dt.name());
                    }
                }
                out
            }
        }
    }

    /// Resolves `kind/localId` against the base, or parses an absolute IRI.
    pub fn expand(&self, text: &str) -> Result<Iri, ModelError> {
        if text.contains("://") {
            Iri::parse(text)
        } else {
            self.base.join(text)
        }
    }

    /// Local id (last path segment) of a minted IRI, when it is one.
    pub fn local_id(&self, iri: &Iri) -> Option<(EntityKind, String)> {
        let rel = iri.as_str().strip_prefix(&self.base_prefix())?;
        let (seg, rest) = rel.split_once('/')?;
        let kind = EntityKind::from_segment(seg)?;
        if rest.is_empty() || rest.contains('/') {
            return None;
        }
        Some((kind, rest.to_string()))
    }
}
