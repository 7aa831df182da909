//! Deconstruction of flat records into entities and temporal statements.
//!
//! Every person, corporate body and work gets an identifier minted from
//! the batch base and its record id; cross-record references resolve by
//! `(kind, id)` only, never by name. A batch is all-or-nothing: if any
//! record fails, no statement is produced.

mod record;

pub use record::{parse_records, print_records, Field, Record, RecordError, RecordKind};

use std::collections::HashMap;
use std::fmt;

use percent_encoding::{utf8_percent_encode, AsciiSet, CONTROLS};
use thiserror::Error;

use crate::model::{Iri, Literal, ModelError, Provenance, TemporalTriple, Term, TimeInterval, TimePoint, Validity};
use crate::store::{InsertEffect, Store};
use crate::vocab::{CorporateBodySubkind, EntityKind, Prop, WorkSubkind};

/// Characters escaped in a minted path segment.
const SEGMENT: &AsciiSet = &CONTROLS
    .add(b' ')
    .add(b'"')
    .add(b'#')
    .add(b'%')
    .add(b'/')
    .add(b'<')
    .add(b'>')
    .add(b'?')
    .add(b'[')
    .add(b'\\')
    .add(b']')
    .add(b'^')
    .add(b'`')
    .add(b'{')
    .add(b'|')
    .add(b'}');

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("invalid local id {0:?}")]
    InvalidLocalId(String),
    #[error("{kind} cannot be minted locally")]
    NotMintable { kind: EntityKind },
    #[error("no {kind} with id {local_id:?}")]
    NotFound { kind: EntityKind, local_id: String },
    #[error("batch rejected with {} error(s)", .0.errors.len())]
    Rejected(Box<IngestReport>),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `base/segment/encoded-local-id`. Deterministic.
pub fn mint_iri(base: &Iri, kind: EntityKind, local_id: &str) -> Result<Iri, IngestError> {
    if local_id.trim().is_empty() {
        return Err(IngestError::InvalidLocalId(local_id.to_string()));
    }
    let segment = kind.segment().ok_or(IngestError::NotMintable { kind })?;
    let encoded = utf8_percent_encode(local_id, SEGMENT).to_string();
    Ok(base.join(&format!("{segment}/{encoded}"))?)
}

/// Looks an entity up by minted identifier. Labels play no part.
pub fn resolve_entity(store: &Store, kind: EntityKind, local_id: &str, base: &Iri) -> Result<Iri, IngestError> {
    let iri = mint_iri(base, kind, local_id)?;
    match store.kind_of(&iri) {
        Some(k) if k == kind => Ok(iri),
        _ => Err(IngestError::NotFound {
            kind,
            local_id: local_id.to_string(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub local_id: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}: {}", self.line, self.local_id, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub records_parsed: usize,
    pub triples_emitted: usize,
    pub warnings: Vec<Diagnostic>,
    pub errors: Vec<Diagnostic>,
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "records\t{}", self.records_parsed)?;
        writeln!(f, "triples\t{}", self.triples_emitted)?;
        writeln!(f, "warnings\t{}", self.warnings.len())?;
        writeln!(f, "errors\t{}", self.errors.len())?;
        for w in &self.warnings {
            writeln!(f, "warning\t{w}")?;
        }
        for e in &self.errors {
            writeln!(f, "error\t{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct IngestOptions {
    pub base: Iri,
    pub authority: Iri,
    /// Recorded as the assertion date of every statement in the batch.
    pub batch_date: TimePoint,
}

impl IngestOptions {
    /// Batch date defaults to today.
    pub fn new(base: Iri, authority: Iri) -> Self {
        use chrono::Datelike;
        let today = chrono::Local::now().date_naive();
        let batch_date = TimePoint::ymd(today.year(), today.month(), today.day()).expect("today is a valid date");
        IngestOptions {
            base,
            authority,
            batch_date,
        }
    }

    pub fn with_batch_date(mut self, date: TimePoint) -> Self {
        self.batch_date = date;
        self
    }
}

/// Builds a fresh store from a batch.
pub fn records_to_graph(records: &[Record], opts: &IngestOptions) -> Result<(Store, IngestReport), IngestError> {
    let mut store = Store::default();
    let report = ingest_into(&mut store, records, opts)?;
    Ok((store, report))
}

/// Adds a batch to an existing store. On error the store is untouched.
pub fn ingest_into(store: &mut Store, records: &[Record], opts: &IngestOptions) -> Result<IngestReport, IngestError> {
    let mut work = store.clone();
    let mut report = IngestReport {
        records_parsed: records.len(),
        ..Default::default()
    };

    let mut batch: HashMap<(RecordKind, &str), Iri> = HashMap::new();
    for r in records {
        let entity = match r.kind {
            RecordKind::Person => EntityKind::Person,
            RecordKind::Body => EntityKind::CorporateBody,
            RecordKind::Work => EntityKind::Work,
        };
        let diag = |message: String| Diagnostic {
            local_id: r.local_id.clone(),
            line: r.line,
            message,
        };
        if let Err(e) = r.validate() {
            report.errors.push(diag(e.to_string()));
            continue;
        }
        match mint_iri(&opts.base, entity, &r.local_id) {
            Ok(iri) => {
                if batch.insert((r.kind, r.local_id.as_str()), iri).is_some() {
                    report.errors.push(diag(format!("duplicate {} id", r.kind)));
                }
            }
            Err(e) => report.errors.push(diag(e.to_string())),
        }
    }

    let mut emitted: Vec<(TemporalTriple, &Record, usize)> = Vec::new();
    {
        let mut ctx = Deconstruct {
            store: &work,
            opts,
            batch: &batch,
            out: &mut emitted,
            errors: &mut report.errors,
        };
        for r in records {
            ctx.record(r);
        }
    }

    // Kind assertions first so that every later statement is kind-checked.
    let kind_iri = work.vocab().iri(Prop::Kind).clone();
    emitted.sort_by_key(|(t, _, _)| t.property != kind_iri);
    for (triple, record, line) in emitted {
        match work.insert(triple) {
            Ok(InsertEffect::Inserted | InsertEffect::Coalesced(_) | InsertEffect::Duplicate) => {
                report.triples_emitted += 1;
            }
            Err(e) => report.errors.push(Diagnostic {
                local_id: record.local_id.clone(),
                line,
                message: e.to_string(),
            }),
        }
    }

    if !report.errors.is_empty() {
        report.triples_emitted = 0;
        return Err(IngestError::Rejected(Box::new(report)));
    }
    report.warnings = grantor_warnings(&work, records, &batch, &opts.base);
    *store = work;
    Ok(report)
}

/// Degree grantors that are universities with subdivisions.
fn grantor_warnings(
    store: &Store,
    records: &[Record],
    batch: &HashMap<(RecordKind, &str), Iri>,
    base: &Iri,
) -> Vec<Diagnostic> {
    let university = store.vocab().body_class(CorporateBodySubkind::University);
    let mut out = Vec::new();
    for r in records.iter().filter(|r| r.kind == RecordKind::Work) {
        for f in r.all("grantor") {
            let Some(body) = batch
                .get(&(RecordKind::Body, f.value.as_str()))
                .cloned()
                .or_else(|| resolve_entity(store, EntityKind::CorporateBody, &f.value, base).ok())
            else {
                continue;
            };
            let is_university = store
                .values(&body, Prop::BodyKind)
                .iter()
                .any(|t| t.object.as_iri() == Some(&university));
            if is_university && !store.values(&body, Prop::HasSubdivision).is_empty() {
                out.push(Diagnostic {
                    local_id: r.local_id.clone(),
                    line: f.line,
                    message: format!("degree granted by university {:?} which has subdivisions", f.value),
                });
            }
        }
    }
    out
}

struct Deconstruct<'a, 'r> {
    store: &'a Store,
    opts: &'a IngestOptions,
    batch: &'a HashMap<(RecordKind, &'r str), Iri>,
    out: &'a mut Vec<(TemporalTriple, &'r Record, usize)>,
    errors: &'a mut Vec<Diagnostic>,
}

impl<'a, 'r> Deconstruct<'a, 'r> {
    fn fail(&mut self, record: &Record, line: usize, message: String) {
        self.errors.push(Diagnostic {
            local_id: record.local_id.clone(),
            line,
            message,
        });
    }

    /// Batch record or existing store entity of the given kind.
    fn reference(&mut self, record: &Record, field: &Field, kind: RecordKind) -> Option<Iri> {
        if let Some(iri) = self.batch.get(&(kind, field.value.as_str())) {
            return Some(iri.clone());
        }
        let entity = match kind {
            RecordKind::Person => EntityKind::Person,
            RecordKind::Body => EntityKind::CorporateBody,
            RecordKind::Work => EntityKind::Work,
        };
        match resolve_entity(self.store, entity, &field.value, &self.opts.base) {
            Ok(iri) => Some(iri),
            Err(_) => {
                self.fail(
                    record,
                    field.line,
                    format!("dangling reference: no {kind} {:?} in batch or store", field.value),
                );
                None
            }
        }
    }

    fn emit(&mut self, record: &'r Record, line: usize, s: &Iri, p: Prop, o: impl Into<Term>, validity: Validity) {
        let provenance = match Provenance::new(&record.local_id, self.opts.authority.clone(), Some(self.opts.batch_date)) {
            Ok(p) => p,
            Err(e) => return self.fail(record, line, e.to_string()),
        };
        let property = self.store.vocab().iri(p).clone();
        self.out.push((
            TemporalTriple::new(s.clone(), property, o, validity, provenance),
            record,
            line,
        ));
    }

    fn emit_kind(&mut self, record: &'r Record, line: usize, s: &Iri, kind: EntityKind) {
        let class = self.store.vocab().kind_class(kind);
        self.emit(record, line, s, Prop::Kind, class, Validity::Always);
    }

    /// Splits `value@qualifier` when the suffix looks like a date or interval.
    fn qualified(value: &str) -> (&str, Option<&str>) {
        match value.rsplit_once('@') {
            Some((head, tail))
                if !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit() || b == b'-' || b == b'.') =>
            {
                (head, Some(tail))
            }
            _ => (value, None),
        }
    }

    fn interval(&mut self, record: &Record, field: &Field, text: &str) -> Option<TimeInterval> {
        match text.parse::<TimeInterval>() {
            Ok(iv) => Some(iv),
            Err(e) => {
                self.fail(record, field.line, format!("{}: {e}", field.key));
                None
            }
        }
    }

    fn optional_validity(&mut self, record: &Record, field: &Field, qualifier: Option<&str>) -> Option<Validity> {
        match qualifier {
            None => Some(Validity::Always),
            Some(q) => self.interval(record, field, q).map(Validity::during),
        }
    }

    /// `BODYID@interval` with the interval mandatory.
    fn required_span(&mut self, record: &Record, field: &Field) -> Option<(String, Validity)> {
        let (target, qualifier) = Self::qualified(&field.value);
        let Some(q) = qualifier else {
            self.fail(record, field.line, format!("{} requires an @interval", field.key));
            return None;
        };
        let iv = self.interval(record, field, q)?;
        Some((target.to_string(), Validity::during(iv)))
    }

    fn external(&mut self, record: &Record, field: &Field) -> Option<Iri> {
        match Iri::parse(&field.value) {
            Ok(iri) => Some(iri),
            Err(e) => {
                self.fail(record, field.line, e.to_string());
                None
            }
        }
    }

    fn with_value(field: &Field, value: &str) -> Field {
        Field {
            key: field.key.clone(),
            value: value.to_string(),
            line: field.line,
        }
    }

    fn record(&mut self, r: &'r Record) {
        let Some(me) = self.batch.get(&(r.kind, r.local_id.as_str())).cloned() else {
            return;
        };
        match r.kind {
            RecordKind::Person => self.person(r, &me),
            RecordKind::Body => self.body(r, &me),
            RecordKind::Work => self.work(r, &me),
        }
    }

    fn common(&mut self, r: &'r Record, me: &Iri, f: &'r Field) -> bool {
        match f.key.as_str() {
            "same-as" | "related-to" => {
                if let Some(ext) = self.external(r, f) {
                    let prop = if f.key == "same-as" { Prop::SameAs } else { Prop::RelatedTo };
                    self.emit_kind(r, f.line, &ext, EntityKind::ExternalResource);
                    self.emit(r, f.line, me, prop, ext, Validity::Always);
                }
                true
            }
            "name" => {
                let (name, q) = Self::qualified(&f.value);
                if let Some(v) = self.optional_validity(r, f, q) {
                    self.emit(r, f.line, me, Prop::Label, Literal::string(name), v);
                }
                true
            }
            _ => false,
        }
    }

    fn person(&mut self, r: &'r Record, me: &Iri) {
        self.emit_kind(r, r.line, me, EntityKind::Person);
        for f in &r.fields {
            if self.common(r, me, f) {
                continue;
            }
            match f.key.as_str() {
                "gender" => {
                    let (value, q) = Self::qualified(&f.value);
                    let Some(v) = self.optional_validity(r, f, q) else { continue };
                    match mint_iri(&self.opts.base, EntityKind::Gender, value) {
                        Ok(g) => {
                            self.emit_kind(r, f.line, &g, EntityKind::Gender);
                            self.emit(r, f.line, me, Prop::HasGender, g, v);
                        }
                        Err(e) => self.fail(r, f.line, e.to_string()),
                    }
                }
                "student-of" | "professor-at" => {
                    let Some((target, v)) = self.required_span(r, f) else { continue };
                    let target_field = Self::with_value(f, &target);
                    let Some(body) = self.reference(r, &target_field, RecordKind::Body) else { continue };
                    let prop = if f.key == "student-of" { Prop::IsStudentOf } else { Prop::IsProfessorAt };
                    self.emit(r, f.line, me, prop, body, v);
                }
                "birth-place" => match mint_iri(&self.opts.base, EntityKind::Place, &f.value) {
                    Ok(place) => {
                        self.emit_kind(r, f.line, &place, EntityKind::Place);
                        self.emit(r, f.line, me, Prop::BirthPlace, place, Validity::Always);
                    }
                    Err(e) => self.fail(r, f.line, e.to_string()),
                },
                _ => {}
            }
        }
    }

    fn body(&mut self, r: &'r Record, me: &Iri) {
        self.emit_kind(r, r.line, me, EntityKind::CorporateBody);
        for f in &r.fields {
            if self.common(r, me, f) {
                continue;
            }
            match f.key.as_str() {
                "body-kind" => match CorporateBodySubkind::from_keyword(&f.value) {
                    Some(k) => {
                        let class = self.store.vocab().body_class(k);
                        self.emit(r, f.line, me, Prop::BodyKind, class, Validity::Always);
                    }
                    None => self.fail(r, f.line, format!("body-kind {:?} is not university, school, faculty or other", f.value)),
                },
                "established" => match Literal::new(&f.value, crate::model::Datatype::Year, None) {
                    Ok(year) => self.emit(r, f.line, me, Prop::EstablishedIn, year, Validity::Always),
                    Err(e) => self.fail(r, f.line, e.to_string()),
                },
                "subdivision-of" => {
                    let Some((target, v)) = self.required_span(r, f) else { continue };
                    let target_field = Self::with_value(f, &target);
                    let Some(parent) = self.reference(r, &target_field, RecordKind::Body) else { continue };
                    self.emit(r, f.line, &parent, Prop::HasSubdivision, me.clone(), v);
                }
                "changed-to" => {
                    let Some((target, v)) = self.required_span(r, f) else { continue };
                    if !v.interval().is_some_and(|iv| iv.is_instant()) {
                        self.fail(r, f.line, "changed-to takes a single date, not an interval".into());
                        continue;
                    }
                    let target_field = Self::with_value(f, &target);
                    let Some(next) = self.reference(r, &target_field, RecordKind::Body) else { continue };
                    self.emit(r, f.line, me, Prop::ChangedTo, next, v);
                }
                _ => {}
            }
        }
    }

    fn work(&mut self, r: &'r Record, me: &Iri) {
        self.emit_kind(r, r.line, me, EntityKind::Work);
        let study = r.get("study").and_then(|f| {
            let iv = self.interval(r, f, &f.value)?;
            if iv.is_unbounded() {
                self.fail(r, f.line, "study period needs at least one bound".into());
                return None;
            }
            Some(Validity::during(iv))
        });
        for f in &r.fields {
            if self.common(r, me, f) {
                continue;
            }
            match f.key.as_str() {
                "title" => self.emit(r, f.line, me, Prop::Label, Literal::string(&f.value), Validity::Always),
                "work-kind" => match WorkSubkind::from_keyword(&f.value) {
                    Some(k) => {
                        let class = self.store.vocab().work_class(k);
                        self.emit(r, f.line, me, Prop::WorkKind, class, Validity::Always);
                    }
                    None => self.fail(r, f.line, format!("work-kind {:?} is not master or phd", f.value)),
                },
                "dissertant" => {
                    let Some(person) = self.reference(r, f, RecordKind::Person) else { continue };
                    if let Some(v) = study {
                        self.emit(r, f.line, me, Prop::CreatedBy, person, v);
                    }
                }
                "advisor" | "committee" => {
                    let Some(person) = self.reference(r, f, RecordKind::Person) else { continue };
                    let prop = if f.key == "advisor" { Prop::AdvisedBy } else { Prop::CommitteeMember };
                    self.emit(r, f.line, me, prop, person, Validity::Always);
                }
                "grantor" => {
                    let Some(body) = self.reference(r, f, RecordKind::Body) else { continue };
                    self.emit(r, f.line, me, Prop::DegreeGrantedBy, body, Validity::Always);
                }
                _ => {}
            }
        }
    }
}

/// Text of a record file, parsed and deconstructed in one step.
pub fn ingest_text(text: &str, opts: &IngestOptions) -> Result<(Store, IngestReport), crate::Error> {
    let records = parse_records(text)?;
    Ok(records_to_graph(&records, opts)?)
}
