//! Indexed, canonical set of temporal triples.
//!
//! Statements that agree on subject, property, object and provenance are
//! kept coalesced: inserting one whose validity overlaps or abuts an
//! existing one merges the two. Statements from different sources are never
//! merged. Inverse statements are not stored; [`Inference::Inverse`]
//! synthesizes them at match time.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::model::{Iri, Provenance, TemporalTriple, Term, TimeInterval, TimePoint, Validity};
use crate::par::Execution;
use crate::vocab::{Class, Domain, EntityKind, Prop, PropertyDef, Range, Temporality, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("unknown property {0}")]
    UnknownProperty(Iri),
    #[error("kind mismatch on {entity} for {property}: expected {expected}, found {found}")]
    KindMismatch {
        entity: Iri,
        property: String,
        expected: String,
        found: String,
    },
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertEffect {
    Inserted,
    /// Merged with one or more stored statements into this validity.
    Coalesced(Validity),
    /// Already covered by a stored statement.
    Duplicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeConstraint {
    At(TimePoint),
    /// Valid throughout the interval.
    During(TimeInterval),
    Overlaps(TimeInterval),
}

impl TimeConstraint {
    pub fn admits(&self, validity: &Validity) -> bool {
        match self {
            TimeConstraint::At(t) => validity.contains(t),
            TimeConstraint::During(iv) => validity.covers(iv),
            TimeConstraint::Overlaps(iv) => validity.overlaps(iv),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Inference {
    #[default]
    None,
    Inverse,
}

/// Triple pattern; `None` positions are wildcards.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Pattern {
    pub subject: Option<Iri>,
    pub property: Option<Iri>,
    pub object: Option<Term>,
    pub time: Option<TimeConstraint>,
    pub inference: Inference,
}

impl Pattern {
    pub fn any() -> Self {
        Pattern::default()
    }

    pub fn subject(mut self, s: &Iri) -> Self {
        self.subject = Some(s.clone());
        self
    }

    pub fn property(mut self, p: &Iri) -> Self {
        self.property = Some(p.clone());
        self
    }

    pub fn object(mut self, o: impl Into<Term>) -> Self {
        self.object = Some(o.into());
        self
    }

    pub fn at(mut self, t: TimePoint) -> Self {
        self.time = Some(TimeConstraint::At(t));
        self
    }

    pub fn time(mut self, c: Option<TimeConstraint>) -> Self {
        self.time = c;
        self
    }

    pub fn with_inverses(mut self) -> Self {
        self.inference = Inference::Inverse;
        self
    }

    fn accepts(&self, t: &TemporalTriple) -> bool {
        self.subject.as_ref().is_none_or(|s| *s == t.subject)
            && self.property.as_ref().is_none_or(|p| *p == t.property)
            && self.object.as_ref().is_none_or(|o| *o == t.object)
            && self.time.as_ref().is_none_or(|c| c.admits(&t.validity))
    }
}

/// A match result; `derived` marks statements synthesized from a stored
/// statement through a declared inverse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Matched {
    pub triple: TemporalTriple,
    pub derived: bool,
}

type StatementKey = (Iri, Iri, Term, Provenance);

#[derive(Debug, Clone)]
pub struct Store {
    vocab: Arc<Vocabulary>,
    slots: Vec<Option<TemporalTriple>>,
    free: Vec<usize>,
    by_subject: HashMap<Iri, BTreeSet<usize>>,
    by_property: HashMap<Iri, BTreeSet<usize>>,
    by_object: HashMap<Term, BTreeSet<usize>>,
    by_statement: HashMap<StatementKey, Vec<usize>>,
    kinds: HashMap<Iri, EntityKind>,
    len: usize,
}

impl Default for Store {
    fn default() -> Self {
        Store::new(Arc::new(Vocabulary::default()))
    }
}

impl PartialEq for Store {
    /// Triple-set equality.
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.triples() == other.triples()
    }
}

impl Store {
    pub fn new(vocab: Arc<Vocabulary>) -> Self {
        Store {
            vocab,
            slots: Vec::new(),
            free: Vec::new(),
            by_subject: HashMap::new(),
            by_property: HashMap::new(),
            by_object: HashMap::new(),
            by_statement: HashMap::new(),
            kinds: HashMap::new(),
            len: 0,
        }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn vocab_handle(&self) -> Arc<Vocabulary> {
        Arc::clone(&self.vocab)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn kind_of(&self, entity: &Iri) -> Option<EntityKind> {
        self.kinds.get(entity).copied()
    }

    /// All triples in canonical order.
    pub fn triples(&self) -> Vec<TemporalTriple> {
        let mut out: Vec<TemporalTriple> = self.slots.iter().flatten().cloned().collect();
        out.sort();
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = &TemporalTriple> {
        self.slots.iter().flatten()
    }

    /// Whether the IRI occurs anywhere in the store.
    pub fn mentions(&self, iri: &Iri) -> bool {
        self.kinds.contains_key(iri)
            || self.by_subject.contains_key(iri)
            || self.by_object.contains_key(&Term::Iri(iri.clone()))
    }

    pub fn insert(&mut self, triple: TemporalTriple) -> Result<InsertEffect, StoreError> {
        self.insert_checked(triple, true)
    }

    /// Inserts a statement read back from a serialization, without the
    /// temporality check. Coalescing can widen a statement beyond what its
    /// property accepts on assertion (adjacent instants into a span, an
    /// interval into `Always`), and a serialized store must load as it was.
    pub(crate) fn restore(&mut self, triple: TemporalTriple) -> Result<InsertEffect, StoreError> {
        self.insert_checked(triple, false)
    }

    fn insert_checked(&mut self, triple: TemporalTriple, strict: bool) -> Result<InsertEffect, StoreError> {
        let def = self
            .vocab
            .get(&triple.property)
            .ok_or_else(|| StoreError::UnknownProperty(triple.property.clone()))?
            .clone();
        if strict {
            self.check_temporality(&def, &triple)?;
        }
        let asserted_kind = self.check_kinds(&def, &triple)?;

        let key: StatementKey = (
            triple.subject.clone(),
            triple.property.clone(),
            triple.object.clone(),
            triple.provenance.clone(),
        );
        let existing = self.by_statement.get(&key).cloned().unwrap_or_default();

        let mut merged = triple.validity;
        let mut absorbed = Vec::new();
        for &slot in &existing {
            let stored = self.slots[slot].as_ref().expect("indexed slot is live");
            if stored.validity.covers_validity(&triple.validity) {
                return Ok(InsertEffect::Duplicate);
            }
        }
        // Merging can bridge several stored intervals; repeat until stable.
        let mut pending: Vec<usize> = existing;
        loop {
            let before = absorbed.len();
            pending.retain(|&slot| {
                let stored = self.slots[slot].as_ref().expect("indexed slot is live");
                match merged.merge(&stored.validity) {
                    Some(m) => {
                        merged = m;
                        absorbed.push(slot);
                        false
                    }
                    None => true,
                }
            });
            if absorbed.len() == before {
                break;
            }
        }

        if let Some(kind) = asserted_kind {
            self.kinds.insert(triple.subject.clone(), kind);
        }
        for slot in &absorbed {
            self.remove_slot(*slot);
        }
        let coalesced = !absorbed.is_empty();
        self.add(TemporalTriple {
            validity: merged,
            ..triple
        });
        Ok(if coalesced {
            InsertEffect::Coalesced(merged)
        } else {
            InsertEffect::Inserted
        })
    }

    fn check_temporality(&self, def: &PropertyDef, t: &TemporalTriple) -> Result<(), StoreError> {
        match (def.temporality, &t.validity) {
            (Temporality::Interval, Validity::Always) => Err(StoreError::InvalidTriple(format!(
                "{} requires a validity interval",
                def.curie
            ))),
            (Temporality::Instant, v) if !v.interval().is_some_and(|iv| iv.is_instant()) => {
                Err(StoreError::InvalidTriple(format!("{} requires an instant", def.curie)))
            }
            _ => Ok(()),
        }
    }

    /// Validates domain and range; returns the kind being asserted when the
    /// triple is an `etd:kind` statement.
    fn check_kinds(&self, def: &PropertyDef, t: &TemporalTriple) -> Result<Option<EntityKind>, StoreError> {
        let mismatch = |entity: &Iri, expected: String, found: String| StoreError::KindMismatch {
            entity: entity.clone(),
            property: def.curie.clone(),
            expected,
            found,
        };
        if let Domain::Kind(expected) = def.domain {
            if let Some(found) = self.kind_of(&t.subject) {
                if found != expected {
                    return Err(mismatch(&t.subject, expected.to_string(), found.to_string()));
                }
            }
        }
        match def.range {
            Range::Literal(dt) => match &t.object {
                Term::Literal(lit) if lit.datatype() == dt => Ok(None),
                other => Err(StoreError::InvalidTriple(format!(
                    "{} expects a {dt} literal, got {other:?}",
                    def.curie
                ))),
            },
            Range::Entity(expected) => {
                let Term::Iri(obj) = &t.object else {
                    return Err(StoreError::InvalidTriple(format!("{} expects an entity", def.curie)));
                };
                match self.kind_of(obj) {
                    Some(found) if found != expected => {
                        Err(mismatch(obj, expected.to_string(), found.to_string()))
                    }
                    _ => Ok(None),
                }
            }
            Range::Class => {
                let class = t.object.as_iri().and_then(|iri| self.vocab.class(iri));
                match (def.prop, class) {
                    (Prop::Kind, Some(Class::Kind(kind))) => {
                        self.check_kind_assertion(&t.subject, kind)?;
                        Ok(Some(kind))
                    }
                    (Prop::BodyKind, Some(Class::Body(_))) | (Prop::WorkKind, Some(Class::Work(_))) => Ok(None),
                    _ => Err(StoreError::InvalidTriple(format!(
                        "{} expects a matching class, got {:?}",
                        def.curie, t.object
                    ))),
                }
            }
        }
    }

    /// A new kind must agree with any existing kind and with every stored
    /// statement that already touches the entity.
    fn check_kind_assertion(&self, entity: &Iri, kind: EntityKind) -> Result<(), StoreError> {
        let conflict = |property: &str, found: String| StoreError::KindMismatch {
            entity: entity.clone(),
            property: property.to_string(),
            expected: kind.to_string(),
            found,
        };
        if let Some(existing) = self.kind_of(entity) {
            if existing != kind {
                return Err(conflict("etd:kind", existing.to_string()));
            }
            return Ok(());
        }
        for slot in self.by_subject.get(entity).into_iter().flatten() {
            let t = self.slots[*slot].as_ref().unwrap();
            let def = self.vocab.get(&t.property).unwrap();
            if let Domain::Kind(required) = def.domain {
                if required != kind {
                    return Err(conflict(&def.curie, format!("subject of {}", def.curie)));
                }
            }
        }
        for slot in self.by_object.get(&Term::Iri(entity.clone())).into_iter().flatten() {
            let t = self.slots[*slot].as_ref().unwrap();
            let def = self.vocab.get(&t.property).unwrap();
            if let Range::Entity(required) = def.range {
                if required != kind {
                    return Err(conflict(&def.curie, format!("object of {}", def.curie)));
                }
            }
        }
        Ok(())
    }

    fn add(&mut self, triple: TemporalTriple) {
        let slot = match self.free.pop() {
            Some(slot) => slot,
            None => {
                self.slots.push(None);
                self.slots.len() - 1
            }
        };
        self.by_subject.entry(triple.subject.clone()).or_default().insert(slot);
        self.by_property.entry(triple.property.clone()).or_default().insert(slot);
        self.by_object.entry(triple.object.clone()).or_default().insert(slot);
        self.by_statement
            .entry((
                triple.subject.clone(),
                triple.property.clone(),
                triple.object.clone(),
                triple.provenance.clone(),
            ))
            .or_default()
            .push(slot);
        self.slots[slot] = Some(triple);
        self.len += 1;
    }

    fn remove_slot(&mut self, slot: usize) {
        let Some(t) = self.slots[slot].take() else { return };
        fn unindex<K: std::hash::Hash + Eq>(map: &mut HashMap<K, BTreeSet<usize>>, key: &K, slot: usize) {
            if let Some(set) = map.get_mut(key) {
                set.remove(&slot);
                if set.is_empty() {
                    map.remove(key);
                }
            }
        }
        unindex(&mut self.by_subject, &t.subject, slot);
        unindex(&mut self.by_property, &t.property, slot);
        unindex(&mut self.by_object, &t.object, slot);
        let key = (t.subject, t.property, t.object, t.provenance);
        if let Some(v) = self.by_statement.get_mut(&key) {
            v.retain(|&s| s != slot);
            if v.is_empty() {
                self.by_statement.remove(&key);
            }
        }
        self.free.push(slot);
        self.len -= 1;
    }

    /// Slots of stored triples possibly matching the bound positions, using
    /// the most selective index.
    fn candidates(&self, s: Option<&Iri>, p: Option<&Iri>, o: Option<&Term>) -> Vec<usize> {
        let empty = BTreeSet::new();
        let sets = [
            s.map(|s| self.by_subject.get(s).unwrap_or(&empty)),
            p.map(|p| self.by_property.get(p).unwrap_or(&empty)),
            o.map(|o| self.by_object.get(o).unwrap_or(&empty)),
        ];
        let best = sets.into_iter().flatten().min_by_key(|set| set.len());
        match best {
            Some(set) => set.iter().copied().collect(),
            None => (0..self.slots.len()).filter(|&i| self.slots[i].is_some()).collect(),
        }
    }

    pub fn match_pattern(&self, pattern: &Pattern) -> Result<Vec<Matched>, StoreError> {
        if let Some(p) = &pattern.property {
            if self.vocab.get(p).is_none() {
                return Err(StoreError::UnknownProperty(p.clone()));
            }
        }
        let mut out: Vec<Matched> = self
            .candidates(pattern.subject.as_ref(), pattern.property.as_ref(), pattern.object.as_ref())
            .into_iter()
            .filter_map(|slot| self.slots[slot].as_ref())
            .filter(|t| pattern.accepts(t))
            .map(|t| Matched {
                triple: t.clone(),
                derived: false,
            })
            .collect();

        if pattern.inference == Inference::Inverse {
            // A flipped statement (o, q, s) matches the pattern iff the stored
            // (s, inverse(q), o) has s = pattern.object and o = pattern.subject.
            let stored_property = match &pattern.property {
                Some(p) => match self.vocab.inverse_of(p).expect("checked above") {
                    Some(inv) => Some(Some(inv.clone())),
                    None => None,
                },
                None => Some(None),
            };
            if let Some(stored_property) = stored_property {
                let stored_subject = match &pattern.object {
                    Some(Term::Iri(iri)) => Some(iri.clone()),
                    Some(Term::Literal(_)) => return Ok(finish(out)),
                    None => None,
                };
                let stored_object = pattern.subject.clone().map(Term::Iri);
                for slot in self.candidates(stored_subject.as_ref(), stored_property.as_ref(), stored_object.as_ref()) {
                    let Some(t) = self.slots[slot].as_ref() else { continue };
                    if let Some(flipped) = self.flip(t) {
                        if pattern.accepts(&flipped) {
                            out.push(Matched {
                                triple: flipped,
                                derived: true,
                            });
                        }
                    }
                }
            }
        }
        Ok(finish(out))
    }

    /// The inverse statement of `t`, if its property declares one.
    pub fn flip(&self, t: &TemporalTriple) -> Option<TemporalTriple> {
        let inverse = self.vocab.get(&t.property)?.inverse.clone()?;
        let object = t.object.as_iri()?.clone();
        Some(TemporalTriple {
            subject: object,
            property: inverse,
            object: Term::Iri(t.subject.clone()),
            validity: t.validity,
            provenance: t.provenance.clone(),
        })
    }

    pub fn snapshot_at(&self, t: TimePoint) -> Vec<TemporalTriple> {
        self.snapshot_at_with(t, Execution::default())
    }

    /// Every statement valid at `t`, `Always` statements included, in
    /// canonical order.
    pub fn snapshot_at_with(&self, t: TimePoint, exec: Execution) -> Vec<TemporalTriple> {
        let live: Vec<&TemporalTriple> = self.slots.iter().flatten().collect();
        let range = t.day_range();
        let mut out: Vec<TemporalTriple> = exec
            .filter(&live, |x| x.validity.day_range().contains(&range))
            .into_iter()
            .cloned()
            .collect();
        exec.sort(&mut out);
        out
    }

    pub fn entities_of_kind(&self, kind: EntityKind) -> Vec<Iri> {
        let mut out: Vec<Iri> = self
            .kinds
            .iter()
            .filter(|(_, k)| **k == kind)
            .map(|(iri, _)| iri.clone())
            .collect();
        out.sort();
        out
    }

    /// Stored statements with `subject` and well-known property `prop`, in
    /// canonical order.
    pub fn values(&self, subject: &Iri, prop: Prop) -> Vec<&TemporalTriple> {
        let property = self.vocab.iri(prop);
        let mut out: Vec<&TemporalTriple> = self
            .candidates(Some(subject), Some(property), None)
            .into_iter()
            .filter_map(|slot| self.slots[slot].as_ref())
            .filter(|t| t.subject == *subject && t.property == *property)
            .collect();
        out.sort();
        out
    }

    /// Stored statements using well-known property `prop`, in canonical order.
    pub fn with_property(&self, prop: Prop) -> Vec<&TemporalTriple> {
        let mut out: Vec<&TemporalTriple> = self
            .by_property
            .get(self.vocab.iri(prop))
            .into_iter()
            .flatten()
            .filter_map(|&slot| self.slots[slot].as_ref())
            .collect();
        out.sort();
        out
    }

    /// The label in force most recently: latest start, open end preferred,
    /// then lexical order.
    pub fn current_label(&self, entity: &Iri) -> Option<&TemporalTriple> {
        self.values(entity, Prop::Label).into_iter().min_by(|a, b| {
            let start = |t: &TemporalTriple| t.validity.day_range().first;
            let end = |t: &TemporalTriple| t.validity.day_range().last;
            start(b)
                .cmp(&start(a))
                .then_with(|| end(b).cmp(&end(a)))
                .then_with(|| a.cmp(b))
        })
    }
}

fn finish(mut out: Vec<Matched>) -> Vec<Matched> {
    out.sort();
    // A derived statement identical to a stored one adds nothing.
    out.dedup_by(|later, earlier| later.triple == earlier.triple);
    out
}

impl Validity {
    fn covers_validity(&self, other: &Validity) -> bool {
        self.day_range().contains(&other.day_range())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Literal;

    struct Fx {
        store: Store,
        prov: Provenance,
    }

    fn iri(s: &str) -> Iri {
        Iri::parse(&format!("http://example.org/etd/{s}")).unwrap()
    }

    fn during(s: &str) -> Validity {
        Validity::during(s.parse().unwrap())
    }

    impl Fx {
        fn new() -> Self {
            let prov = Provenance::new("rec", iri("lib"), None).unwrap();
            Fx {
                store: Store::default(),
                prov,
            }
        }

        fn t(&self, s: &str, p: Prop, o: impl Into<Term>, v: Validity) -> TemporalTriple {
            TemporalTriple::new(iri(s), self.store.vocab().iri(p).clone(), o, v, self.prov.clone())
        }

        fn kind(&mut self, s: &str, k: EntityKind) {
            let class = self.store.vocab().kind_class(k);
            let t = self.t(s, Prop::Kind, class, Validity::Always);
            self.store.insert(t).unwrap();
        }
    }

    #[test]
    fn insert_effects() {
        let mut fx = Fx::new();
        fx.kind("body/facB", EntityKind::CorporateBody);
        let est = fx.t("body/facB", Prop::EstablishedIn, Literal::year(1963).unwrap(), Validity::Always);
        assert_eq!(fx.store.insert(est.clone()).unwrap(), InsertEffect::Inserted);
        assert_eq!(fx.store.insert(est).unwrap(), InsertEffect::Duplicate);

        fx.kind("person/pA", EntityKind::Person);
        fx.kind("body/uy", EntityKind::CorporateBody);
        let a = fx.t("person/pA", Prop::IsProfessorAt, iri("body/uy"), during("2006..2008"));
        let b = fx.t("person/pA", Prop::IsProfessorAt, iri("body/uy"), during("2008..2010"));
        assert_eq!(fx.store.insert(a).unwrap(), InsertEffect::Inserted);
        assert_eq!(
            fx.store.insert(b).unwrap(),
            InsertEffect::Coalesced(during("2006..2010"))
        );
        assert_eq!(fx.store.values(&iri("person/pA"), Prop::IsProfessorAt).len(), 1);
    }

    #[test]
    fn bridging_insert_merges_both_sides() {
        let mut fx = Fx::new();
        for v in ["1990..1991", "1994..1995"] {
            let t = fx.t("person/p", Prop::IsStudentOf, iri("body/b"), during(v));
            fx.store.insert(t).unwrap();
        }
        assert_eq!(fx.store.len(), 2);
        let bridge = fx.t("person/p", Prop::IsStudentOf, iri("body/b"), during("1992..1993"));
        assert_eq!(
            fx.store.insert(bridge).unwrap(),
            InsertEffect::Coalesced(during("1990..1995"))
        );
        assert_eq!(fx.store.len(), 1);
    }

    #[test]
    fn different_provenance_not_coalesced() {
        let mut fx = Fx::new();
        let a = fx.t("person/p", Prop::IsStudentOf, iri("body/b"), during("1990..1991"));
        let mut b = a.clone();
        b.provenance = Provenance::new("other", iri("lib"), None).unwrap();
        fx.store.insert(a).unwrap();
        assert_eq!(fx.store.insert(b).unwrap(), InsertEffect::Inserted);
        assert_eq!(fx.store.len(), 2);
    }

    #[test]
    fn validation_errors() {
        let mut fx = Fx::new();
        let bogus = TemporalTriple::new(
            iri("x"),
            Iri::parse("http://example.org/etd/vocab#nonsense").unwrap(),
            iri("y"),
            Validity::Always,
            fx.prov.clone(),
        );
        assert!(matches!(fx.store.insert(bogus), Err(StoreError::UnknownProperty(_))));

        let always = fx.t("person/p", Prop::IsProfessorAt, iri("body/b"), Validity::Always);
        assert!(matches!(fx.store.insert(always), Err(StoreError::InvalidTriple(_))));

        let span = fx.t("body/a", Prop::ChangedTo, iri("body/b"), during("1990..1991"));
        assert!(matches!(fx.store.insert(span), Err(StoreError::InvalidTriple(_))));

        fx.kind("work/w", EntityKind::Work);
        let wrong = fx.t("work/w", Prop::IsStudentOf, iri("body/b"), during("1990..1991"));
        assert!(matches!(fx.store.insert(wrong), Err(StoreError::KindMismatch { .. })));

        let lit = fx.t("body/b", Prop::EstablishedIn, Literal::string("1963"), Validity::Always);
        assert!(matches!(fx.store.insert(lit), Err(StoreError::InvalidTriple(_))));
    }

    #[test]
    fn late_kind_assertion_is_checked() {
        let mut fx = Fx::new();
        let t = fx.t("person/p", Prop::IsStudentOf, iri("body/b"), during("1990..1991"));
        fx.store.insert(t).unwrap();
        let class = fx.store.vocab().kind_class(EntityKind::Work);
        let bad = fx.t("body/b", Prop::Kind, class, Validity::Always);
        assert!(matches!(fx.store.insert(bad), Err(StoreError::KindMismatch { .. })));
        fx.kind("body/b", EntityKind::CorporateBody);
        let class = fx.store.vocab().kind_class(EntityKind::Place);
        let clash = fx.t("body/b", Prop::Kind, class, Validity::Always);
        assert!(matches!(fx.store.insert(clash), Err(StoreError::KindMismatch { .. })));
    }

    #[test]
    fn inverse_synthesis() {
        let mut fx = Fx::new();
        let t = fx.t("body/schoolA", Prop::HasSubdivision, iri("body/facB"), during("1963.."));
        fx.store.insert(t.clone()).unwrap();
        let v = fx.store.vocab().clone();
        let pat = Pattern::any()
            .subject(&iri("body/facB"))
            .property(v.iri(Prop::IsSubdivisionOf));
        assert!(fx.store.match_pattern(&pat).unwrap().is_empty());
        let hits = fx.store.match_pattern(&pat.with_inverses()).unwrap();
        assert_eq!(hits.len(), 1);
        assert!(hits[0].derived);
        assert_eq!(hits[0].triple.object, Term::Iri(iri("body/schoolA")));
        assert_eq!(fx.store.flip(&hits[0].triple).unwrap(), t);

        // wildcard property also yields the flipped statement
        let all = fx
            .store
            .match_pattern(&Pattern::any().subject(&iri("body/facB")).with_inverses())
            .unwrap();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn unknown_pattern_property() {
        let fx = Fx::new();
        let pat = Pattern::any().property(&iri("nope"));
        assert!(matches!(fx.store.match_pattern(&pat), Err(StoreError::UnknownProperty(_))));
    }

    #[test]
    fn snapshot_of_empty_store() {
        assert!(Store::default().snapshot_at(TimePoint::year(2000).unwrap()).is_empty());
    }
}
