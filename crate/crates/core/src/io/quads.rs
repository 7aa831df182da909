//! Temporal N-Quads (`.tnq`).
//!
//! Each statement is a quad whose graph name is a context IRI derived from
//! its validity and provenance. Every context carries its own metadata as
//! quads in that same graph:
//!
//! ```text
//! <s> <p> <o> <ctx> .
//! <ctx> <etd:validFrom> "1996"^^xsd:gYear <ctx> .
//! <ctx> <etd:validTo> "2000"^^xsd:gYear <ctx> .
//! <ctx> <etd:source> "phd1" <ctx> .
//! <ctx> <etd:authority> <http://example.org/etd> <ctx> .
//! <ctx> <etd:assertedAt> "2024-05-01"^^xsd:date <ctx> .
//! ```
//!
//! Lines are sorted bytewise and LF-terminated, so a store has exactly one
//! serialization.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::model::{
    Datatype, Iri, Literal, Precision, Provenance, TemporalTriple, Term, TimeInterval, TimePoint, Validity,
};
use crate::par::Execution;
use crate::store::{Store, StoreError};
use crate::vocab::Vocabulary;

const XSD_GYEAR_MONTH: &str = "http://www.w3.org/2001/XMLSchema#gYearMonth";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("context {0} has no metadata")]
    DanglingContext(Iri),
    #[error("context {ctx} is missing {key}")]
    IncompleteContext { ctx: Iri, key: &'static str },
    #[error("line {line}: unknown context key {key}")]
    UnknownContextKey { line: usize, key: Iri },
    #[error("line {line}: unknown property {property}")]
    UnknownProperty { line: usize, property: Iri },
    #[error("line {line}: {source}")]
    Store { line: usize, source: StoreError },
}

/// A canonical quad file: sorted lines without terminators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuadDocument {
    pub lines: Vec<String>,
}

impl QuadDocument {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

impl fmt::Display for QuadDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum CtxKey {
    ValidFrom,
    ValidTo,
    Source,
    Authority,
    AssertedAt,
}

impl CtxKey {
    const ALL: [CtxKey; 5] = [
        CtxKey::ValidFrom,
        CtxKey::ValidTo,
        CtxKey::Source,
        CtxKey::Authority,
        CtxKey::AssertedAt,
    ];

    fn local(&self) -> &'static str {
        match self {
            CtxKey::ValidFrom => "validFrom",
            CtxKey::ValidTo => "validTo",
            CtxKey::Source => "source",
            CtxKey::Authority => "authority",
            CtxKey::AssertedAt => "assertedAt",
        }
    }
}

fn point_literal(t: TimePoint) -> String {
    let dt = match t.precision() {
        Precision::Year => Datatype::Year.xsd_iri(),
        Precision::Month => XSD_GYEAR_MONTH,
        Precision::Day => Datatype::Date.xsd_iri(),
    };
    format!("\"{t}\"^^<{dt}>")
}

fn string_literal(text: &str) -> String {
    Term::Literal(Literal::string(text)).to_ntriples()
}

/// Context IRI: base + `/ctx/` + 16 hex digits of SHA-256 over the
/// length-prefixed fields.
pub fn context_iri(base: &Iri, validity: &Validity, provenance: &Provenance) -> Iri {
    let from = validity.start().map(|t| t.to_string()).unwrap_or_default();
    let to = validity.end().map(|t| t.to_string()).unwrap_or_default();
    let asserted = provenance.asserted_at().map(|t| t.to_string()).unwrap_or_default();
    let mut hasher = Sha256::new();
    for field in [
        from.as_str(),
        to.as_str(),
        provenance.source_record_id(),
        provenance.authority().as_str(),
        asserted.as_str(),
    ] {
        hasher.update((field.len() as u64).to_be_bytes());
        hasher.update(field.as_bytes());
    }
    let digest = hex::encode(hasher.finalize());
    base.join(&format!("ctx/{}", &digest[..16]))
        .expect("hex suffix keeps the IRI valid")
}

fn metadata_lines(vocab: &Vocabulary, ctx: &Iri, validity: &Validity, provenance: &Provenance) -> Vec<String> {
    let g = format!("<{ctx}>");
    let key = |k: CtxKey| format!("<{}>", vocab.term(k.local()));
    let mut out = Vec::with_capacity(5);
    if let Some(from) = validity.start() {
        out.push(format!("{g} {} {} {g} .", key(CtxKey::ValidFrom), point_literal(from)));
    }
    if let Some(to) = validity.end() {
        out.push(format!("{g} {} {} {g} .", key(CtxKey::ValidTo), point_literal(to)));
    }
    out.push(format!(
        "{g} {} {} {g} .",
        key(CtxKey::Source),
        string_literal(provenance.source_record_id())
    ));
    out.push(format!("{g} {} <{}> {g} .", key(CtxKey::Authority), provenance.authority()));
    if let Some(at) = provenance.asserted_at() {
        out.push(format!("{g} {} {} {g} .", key(CtxKey::AssertedAt), point_literal(at)));
    }
    out
}

/// Canonical quads for an arbitrary set of statements.
pub fn quads_for<'a>(
    triples: impl IntoIterator<Item = &'a TemporalTriple>,
    vocab: &Vocabulary,
    base: &Iri,
    exec: Execution,
) -> QuadDocument {
    let triples: Vec<&TemporalTriple> = triples.into_iter().collect();
    let rendered = exec.map(&triples, |t| {
        let ctx = context_iri(base, &t.validity, &t.provenance);
        let data = format!(
            "<{}> <{}> {} <{ctx}> .",
            t.subject,
            t.property,
            t.object.to_ntriples()
        );
        (data, ctx, t.validity, t.provenance.clone())
    });
    let mut lines = BTreeSet::new();
    let mut seen = BTreeSet::new();
    for (data, ctx, validity, provenance) in rendered {
        lines.insert(data);
        if seen.insert(ctx.clone()) {
            lines.extend(metadata_lines(vocab, &ctx, &validity, &provenance));
        }
    }
    QuadDocument {
        lines: lines.into_iter().collect(),
    }
}

pub fn export_quads(store: &Store, base: &Iri) -> QuadDocument {
    export_quads_with(store, base, Execution::default())
}

pub fn export_quads_with(store: &Store, base: &Iri, exec: Execution) -> QuadDocument {
    let triples: Vec<&TemporalTriple> = store.iter().collect();
    quads_for(triples, store.vocab(), base, exec)
}

/// Lexical form and datatype IRI of a literal object, as written.
type RawLiteral = Option<(String, Option<Iri>)>;

/// One parsed line: four terms, the last always an IRI.
struct Quad {
    subject: Iri,
    predicate: Iri,
    object: Term,
    graph: Iri,
}

struct LineParser<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> LineParser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, QuadError> {
        Err(QuadError::Parse {
            line: self.line,
            message: format!("column {}: {}", self.pos + 1, message.into()),
        })
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_space(&mut self) {
        let trimmed = self.rest().trim_start_matches([' ', '\t']);
        self.pos = self.text.len() - trimmed.len();
    }

    fn iri(&mut self) -> Result<Iri, QuadError> {
        self.skip_space();
        if !self.rest().starts_with('<') {
            return self.err("expected <iri>");
        }
        let Some(end) = self.rest().find('>') else {
            return self.err("unterminated IRI");
        };
        let body = &self.rest()[1..end];
        let iri = match Iri::parse(body) {
            Ok(iri) => iri,
            Err(e) => return self.err(e.to_string()),
        };
        if iri.as_str() != body {
            return self.err("IRI is not in canonical form");
        }
        self.pos += end + 1;
        Ok(iri)
    }

    fn string(&mut self) -> Result<String, QuadError> {
        let mut out = String::new();
        let mut chars = self.rest().char_indices().skip(1);
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                '\\' => match chars.next() {
                    Some((_, '\\')) => out.push('\\'),
                    Some((_, '"')) => out.push('"'),
                    Some((_, 'n')) => out.push('\n'),
                    Some((_, 'r')) => out.push('\r'),
                    Some((_, 't')) => out.push('\t'),
                    Some((_, 'u')) => {
                        let hex: String = (0..4).filter_map(|_| chars.next().map(|(_, c)| c)).collect();
                        match u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32) {
                            Some(c) if hex.len() == 4 => out.push(c),
                            _ => return self.err("bad \\u escape"),
                        }
                    }
                    _ => return self.err("bad escape"),
                },
                c => out.push(c),
            }
        }
        self.err("unterminated string")
    }

    /// Literal with its raw datatype IRI (if any) and language tag.
    fn literal(&mut self) -> Result<(String, Option<Iri>, Option<String>), QuadError> {
        let lexical = self.string()?;
        if let Some(rest) = self.rest().strip_prefix('@') {
            let tag: String = rest.chars().take_while(|c| c.is_ascii_alphanumeric() || *c == '-').collect();
            self.pos += 1 + tag.len();
            return Ok((lexical, None, Some(tag)));
        }
        if self.rest().starts_with("^^") {
            self.pos += 2;
            let dt = self.iri()?;
            return Ok((lexical, Some(dt), None));
        }
        Ok((lexical, None, None))
    }

    fn quad(&mut self) -> Result<(Quad, RawLiteral), QuadError> {
        let subject = self.iri()?;
        let predicate = self.iri()?;
        self.skip_space();
        let mut raw_literal = None;
        let object = if self.rest().starts_with('"') {
            let (lexical, dt, lang) = self.literal()?;
            let datatype = match &dt {
                None => Some(Datatype::String),
                Some(iri) => Datatype::from_xsd_iri(iri.as_str()),
            };
            raw_literal = Some((lexical.clone(), dt));
            match datatype {
                Some(datatype) => match Literal::new(&lexical, datatype, lang.as_deref()) {
                    Ok(lit) => Term::Literal(lit),
                    Err(e) => return self.err(e.to_string()),
                },
                // metadata time points may use gYearMonth; checked later
                None => Term::Literal(Literal::string(&lexical)),
            }
        } else {
            Term::Iri(self.iri()?)
        };
        let graph = self.iri()?;
        self.skip_space();
        if self.rest() != "." {
            return self.err("expected final \".\"");
        }
        Ok((
            Quad {
                subject,
                predicate,
                object,
                graph,
            },
            raw_literal,
        ))
    }
}

#[derive(Default)]
struct CtxFields {
    from: Option<TimePoint>,
    to: Option<TimePoint>,
    source: Option<String>,
    authority: Option<Iri>,
    asserted_at: Option<TimePoint>,
}

pub fn import_quads(text: &str) -> Result<Store, QuadError> {
    import_quads_with(text, Arc::new(Vocabulary::default()))
}

/// Rebuilds a store from a quad document; statements are checked against
/// `vocab` as they are inserted.
pub fn import_quads_with(text: &str, vocab: Arc<Vocabulary>) -> Result<Store, QuadError> {
    let keys: HashMap<Iri, CtxKey> = CtxKey::ALL.iter().map(|k| (vocab.term(k.local()), *k)).collect();
    let mut contexts: BTreeMap<Iri, CtxFields> = BTreeMap::new();
    let mut data: Vec<(usize, Quad, RawLiteral)> = Vec::new();

    let body = text.strip_suffix('\n').unwrap_or(text);
    if !body.is_empty() {
        for (idx, raw) in body.split('\n').enumerate() {
            let line = idx + 1;
            let mut p = LineParser { text: raw, pos: 0, line };
            let (quad, raw_literal) = p.quad()?;
            if quad.subject != quad.graph {
                data.push((line, quad, raw_literal));
                continue;
            }
            let key = *keys.get(&quad.predicate).ok_or_else(|| QuadError::UnknownContextKey {
                line,
                key: quad.predicate.clone(),
            })?;
            let bad = |message: String| QuadError::Parse { line, message };
            let fields = contexts.entry(quad.graph.clone()).or_default();
            let time = || -> Result<TimePoint, QuadError> {
                let (lexical, dt) = raw_literal.clone().ok_or_else(|| bad("expected a time literal".into()))?;
                let t: TimePoint = lexical.parse().map_err(|e| bad(format!("{e}")))?;
                let expected = match t.precision() {
                    Precision::Year => Datatype::Year.xsd_iri(),
                    Precision::Month => XSD_GYEAR_MONTH,
                    Precision::Day => Datatype::Date.xsd_iri(),
                };
                if dt.as_ref().map(Iri::as_str) != Some(expected) {
                    return Err(bad(format!("time literal {lexical:?} must be typed <{expected}>")));
                }
                Ok(t)
            };
            let duplicate = || bad(format!("context key {} repeated", key.local()));
            match key {
                CtxKey::ValidFrom => {
                    if fields.from.replace(time()?).is_some() {
                        return Err(duplicate());
                    }
                }
                CtxKey::ValidTo => {
                    if fields.to.replace(time()?).is_some() {
                        return Err(duplicate());
                    }
                }
                CtxKey::AssertedAt => {
                    if fields.asserted_at.replace(time()?).is_some() {
                        return Err(duplicate());
                    }
                }
                CtxKey::Source => {
                    let lexical = match (&quad.object, &raw_literal) {
                        (Term::Literal(l), Some((_, None))) if l.language().is_none() => l.lexical().to_string(),
                        _ => return Err(bad("source must be a plain string".into())),
                    };
                    if fields.source.replace(lexical).is_some() {
                        return Err(duplicate());
                    }
                }
                CtxKey::Authority => {
                    let Term::Iri(iri) = &quad.object else {
                        return Err(bad("authority must be an IRI".into()));
                    };
                    if fields.authority.replace(iri.clone()).is_some() {
                        return Err(duplicate());
                    }
                }
            }
        }
    }

    let mut resolved: HashMap<Iri, (Validity, Provenance)> = HashMap::new();
    for (ctx, f) in contexts {
        let source = f.source.ok_or_else(|| QuadError::IncompleteContext {
            ctx: ctx.clone(),
            key: "source",
        })?;
        let authority = f.authority.ok_or_else(|| QuadError::IncompleteContext {
            ctx: ctx.clone(),
            key: "authority",
        })?;
        let validity = if f.from.is_none() && f.to.is_none() {
            Validity::Always
        } else {
            let iv = TimeInterval::new(f.from, f.to).map_err(|e| QuadError::Parse {
                line: 0,
                message: format!("context {ctx}: {e}"),
            })?;
            Validity::during(iv)
        };
        let provenance = Provenance::new(&source, authority, f.asserted_at).map_err(|e| QuadError::Parse {
            line: 0,
            message: format!("context {ctx}: {e}"),
        })?;
        resolved.insert(ctx, (validity, provenance));
    }

    let mut store = Store::new(vocab.clone());
    for (line, q, raw_literal) in data {
        if vocab.get(&q.predicate).is_none() {
            return Err(QuadError::UnknownProperty {
                line,
                property: q.predicate,
            });
        }
        if let Some((_, Some(dt))) = &raw_literal {
            if Datatype::from_xsd_iri(dt.as_str()).is_none() {
                return Err(QuadError::Parse {
                    line,
                    message: format!("unsupported literal datatype <{dt}>"),
                });
            }
        }
        let (validity, provenance) = resolved
            .get(&q.graph)
            .cloned()
            .ok_or_else(|| QuadError::DanglingContext(q.graph.clone()))?;
        let triple = TemporalTriple::new(q.subject, q.predicate, q.object, validity, provenance);
        store
            .restore(triple)
            .map_err(|source| QuadError::Store { line, source })?;
    }
    Ok(store)
}
