use std::cmp::Ordering;
use std::fmt;

use super::{Iri, Literal, ModelError, TimePoint, Validity};

/// Object position of a statement.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            Term::Iri(_) => None,
        }
    }

    /// N-Triples rendering: `<iri>`, `"lex"`, `"lex"@lang` or `"lex"^^<dt>`.
    pub fn to_ntriples(&self) -> String {
        match self {
            Term::Iri(iri) => format!("<{iri}>"),
            Term::Literal(lit) => {
                let mut out = String::with_capacity(lit.lexical().len() + 2);
                out.push('"');
                escape_into(lit.lexical(), &mut out);
                out.push('"');
                match (lit.language(), lit.datatype()) {
                    (Some(lang), _) => {
                        out.push('@');
                        out.push_str(lang);
                    }
                    (None, super::Datatype::String) => {}
                    (None, dt) => {
                        out.push_str("^^<");
                        out.push_str(dt.xsd_iri());
                        out.push('>');
                    }
                }
                out
            }
        }
    }
}

/// N-Triples string escaping: the five ECHARs, `\uXXXX` for other controls.
pub(crate) fn escape_into(text: &str, out: &mut String) {
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
}

impl Ord for Term {
    /// Order of the serialized forms.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Iri(a), Term::Iri(b)) => a.cmp(b),
            _ => self.to_ntriples().cmp(&other.to_ntriples()),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "{iri:?}"),
            Term::Literal(lit) => write!(f, "{lit:?}"),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

/// Where a statement came from and who vouches for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Provenance {
    source_record_id: String,
    authority: Iri,
    asserted_at: Option<TimePoint>,
}

impl Provenance {
    pub fn new(
        source_record_id: &str,
        authority: Iri,
        asserted_at: Option<TimePoint>,
    ) -> Result<Self, ModelError> {
        if source_record_id.trim().is_empty() {
            return Err(ModelError::InvalidProvenance("empty source record id".into()));
        }
        Ok(Provenance {
            source_record_id: source_record_id.to_string(),
            authority,
            asserted_at,
        })
    }

    pub fn source_record_id(&self) -> &str {
        &self.source_record_id
    }

    pub fn authority(&self) -> &Iri {
        &self.authority
    }

    pub fn asserted_at(&self) -> Option<TimePoint> {
        self.asserted_at
    }
}

/// `subject property object` qualified by validity and provenance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TemporalTriple {
    pub subject: Iri,
    pub property: Iri,
    pub object: Term,
    pub validity: Validity,
    pub provenance: Provenance,
}

impl TemporalTriple {
    pub fn new(
        subject: Iri,
        property: Iri,
        object: impl Into<Term>,
        validity: Validity,
        provenance: Provenance,
    ) -> Self {
        TemporalTriple {
            subject,
            property,
            object: object.into(),
            validity,
            provenance,
        }
    }

    fn start_key(&self) -> i64 {
        match self.validity {
            Validity::Always => i64::MIN,
            Validity::During(iv) => iv.day_range().first,
        }
    }
}

impl Ord for TemporalTriple {
    /// Canonical order: subject, property, object, validity start day,
    /// source record id, then the remaining fields for totality.
    fn cmp(&self, other: &Self) -> Ordering {
        self.subject
            .cmp(&other.subject)
            .then_with(|| self.property.cmp(&other.property))
            .then_with(|| self.object.cmp(&other.object))
            .then_with(|| self.start_key().cmp(&other.start_key()))
            .then_with(|| {
                self.provenance
                    .source_record_id
                    .cmp(&other.provenance.source_record_id)
            })
            .then_with(|| self.validity.cmp(&other.validity))
            .then_with(|| self.provenance.cmp(&other.provenance))
    }
}

impl PartialOrd for TemporalTriple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Datatype;

    #[test]
    fn literal_escaping() {
        let lit = Literal::string("a\"b\\c\nd\te\r\u{1}");
        assert_eq!(Term::from(lit).to_ntriples(), r#""a\"b\\c\nd\te\r\u0001""#);
        let year = Literal::new("1963", Datatype::Year, None).unwrap();
        assert_eq!(
            Term::from(year).to_ntriples(),
            "\"1963\"^^<http://www.w3.org/2001/XMLSchema#gYear>"
        );
    }

    #[test]
    fn empty_source_rejected() {
        let auth = Iri::parse("http://example.org/lib").unwrap();
        assert!(Provenance::new(" ", auth, None).is_err());
    }
}
