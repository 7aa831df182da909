//! The fixed ETD ontology.
//!
//! Entity kinds, corporate-body and work subkinds, and every property the
//! graph may carry, each tagged with its FRAD relationship category, its
//! temporal behaviour, its inverse, and the MARC 21 / UNIMARC relator codes
//! where the cataloguing tradition already defines one.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::model::{Datatype, Iri};

pub const DEFAULT_NAMESPACE: &str = "http://example.org/etd/vocab#";
pub const PREFIX: &str = "etd";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabError {
    #[error("unknown property {0}")]
    UnknownProperty(String),
    #[error("invalid namespace: {0}")]
    InvalidNamespace(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityKind {
    Person,
    CorporateBody,
    Work,
    Place,
    Gender,
    ExternalResource,
}

impl EntityKind {
    pub const ALL: [EntityKind; 6] = [
        EntityKind::Person,
        EntityKind::CorporateBody,
        EntityKind::Work,
        EntityKind::Place,
        EntityKind::Gender,
        EntityKind::ExternalResource,
    ];

    pub fn class_name(&self) -> &'static str {
        match self {
            EntityKind::Person => "Person",
            EntityKind::CorporateBody => "CorporateBody",
            EntityKind::Work => "Work",
            EntityKind::Place => "Place",
            EntityKind::Gender => "Gender",
            EntityKind::ExternalResource => "ExternalResource",
        }
    }

    /// Path segment used when minting identifiers; external resources are
    /// never minted locally.
    pub fn segment(&self) -> Option<&'static str> {
        match self {
            EntityKind::Person => Some("person"),
            EntityKind::CorporateBody => Some("body"),
            EntityKind::Work => Some("work"),
            EntityKind::Place => Some("place"),
            EntityKind::Gender => Some("gender"),
            EntityKind::ExternalResource => None,
        }
    }

    pub fn from_segment(segment: &str) -> Option<Self> {
        EntityKind::ALL.into_iter().find(|k| k.segment() == Some(segment))
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.class_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CorporateBodySubkind {
    University,
    School,
    Faculty,
    Other,
}

impl CorporateBodySubkind {
    pub const ALL: [CorporateBodySubkind; 4] = [
        CorporateBodySubkind::University,
        CorporateBodySubkind::School,
        CorporateBodySubkind::Faculty,
        CorporateBodySubkind::Other,
    ];

    pub fn class_name(&self) -> &'static str {
        match self {
            CorporateBodySubkind::University => "University",
            CorporateBodySubkind::School => "School",
            CorporateBodySubkind::Faculty => "Faculty",
            CorporateBodySubkind::Other => "OtherBody",
        }
    }

    /// Keyword used in record files.
    pub fn keyword(&self) -> &'static str {
        match self {
            CorporateBodySubkind::University => "university",
            CorporateBodySubkind::School => "school",
            CorporateBodySubkind::Faculty => "faculty",
            CorporateBodySubkind::Other => "other",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WorkSubkind {
    MasterThesis,
    PhDDissertation,
}

impl WorkSubkind {
    pub const ALL: [WorkSubkind; 2] = [WorkSubkind::MasterThesis, WorkSubkind::PhDDissertation];

    pub fn class_name(&self) -> &'static str {
        match self {
            WorkSubkind::MasterThesis => "MasterThesis",
            WorkSubkind::PhDDissertation => "PhDDissertation",
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            WorkSubkind::MasterThesis => "master",
            WorkSubkind::PhDDissertation => "phd",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FradCategory {
    Sequential,
    Hierarchical,
    Membership,
    Creation,
    Contribution,
    Attribute,
    Linking,
}

/// How a property relates to time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Temporality {
    /// Never time-qualified in practice (kinds, relator assertions).
    Atemporal,
    /// May carry an interval; `Always` is accepted (labels, gender).
    Optional,
    /// Must carry an interval.
    Interval,
    /// Must carry an instant `[t]`.
    Instant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Any,
    Kind(EntityKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Range {
    Entity(EntityKind),
    /// A vocabulary class: entity kind, body subkind or work subkind.
    Class,
    Literal(Datatype),
}

/// Every property the graph knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop {
    Kind,
    BodyKind,
    WorkKind,
    Label,
    IsStudentOf,
    IsProfessorAt,
    HasSubdivision,
    IsSubdivisionOf,
    ChangedTo,
    ChangedFrom,
    CreatedBy,
    Created,
    AdvisedBy,
    Advised,
    DegreeGrantedBy,
    GrantedDegreeFor,
    CommitteeMember,
    CommitteeMemberOf,
    HasGender,
    EstablishedIn,
    BirthPlace,
    SameAs,
    RelatedTo,
}

impl Prop {
    pub const ALL: [Prop; 23] = [
        Prop::Kind,
        Prop::BodyKind,
        Prop::WorkKind,
        Prop::Label,
        Prop::IsStudentOf,
        Prop::IsProfessorAt,
        Prop::HasSubdivision,
        Prop::IsSubdivisionOf,
        Prop::ChangedTo,
        Prop::ChangedFrom,
        Prop::CreatedBy,
        Prop::Created,
        Prop::AdvisedBy,
        Prop::Advised,
        Prop::DegreeGrantedBy,
        Prop::GrantedDegreeFor,
        Prop::CommitteeMember,
        Prop::CommitteeMemberOf,
        Prop::HasGender,
        Prop::EstablishedIn,
        Prop::BirthPlace,
        Prop::SameAs,
        Prop::RelatedTo,
    ];

    pub fn local_name(&self) -> &'static str {
        match self {
            Prop::Kind => "kind",
            Prop::BodyKind => "bodyKind",
            Prop::WorkKind => "workKind",
            Prop::Label => "label",
            Prop::IsStudentOf => "isStudentOf",
            Prop::IsProfessorAt => "isProfessorAt",
            Prop::HasSubdivision => "hasSubdivision",
            Prop::IsSubdivisionOf => "isSubdivisionOf",
            Prop::ChangedTo => "changedTo",
            Prop::ChangedFrom => "changedFrom",
            Prop::CreatedBy => "createdBy",
            Prop::Created => "created",
            Prop::AdvisedBy => "advisedBy",
            Prop::Advised => "advised",
            Prop::DegreeGrantedBy => "degreeGrantedBy",
            Prop::GrantedDegreeFor => "grantedDegreeFor",
            Prop::CommitteeMember => "committeeMember",
            Prop::CommitteeMemberOf => "committeeMemberOf",
            Prop::HasGender => "hasGender",
            Prop::EstablishedIn => "establishedIn",
            Prop::BirthPlace => "birthPlace",
            Prop::SameAs => "sameAs",
            Prop::RelatedTo => "relatedTo",
        }
    }

    fn spec(self) -> PropSpec {
        use EntityKind::*;
        use FradCategory as F;
        use Temporality as T;
        let ent = |k| Range::Entity(k);
        let on = Domain::Kind;
        let (domain, range, temporality, inverse, category, unimarc, marc) = match self {
            Prop::Kind => (Domain::Any, Range::Class, T::Atemporal, None, F::Attribute, None, None),
            Prop::BodyKind => (on(CorporateBody), Range::Class, T::Atemporal, None, F::Attribute, None, None),
            Prop::WorkKind => (on(Work), Range::Class, T::Atemporal, None, F::Attribute, None, None),
            Prop::Label => (Domain::Any, Range::Literal(Datatype::String), T::Optional, None, F::Attribute, None, None),
            Prop::IsStudentOf => (on(Person), ent(CorporateBody), T::Interval, None, F::Membership, None, None),
            Prop::IsProfessorAt => (on(Person), ent(CorporateBody), T::Interval, None, F::Membership, None, None),
            Prop::HasSubdivision => (on(CorporateBody), ent(CorporateBody), T::Interval, Some(Prop::IsSubdivisionOf), F::Hierarchical, None, None),
            Prop::IsSubdivisionOf => (on(CorporateBody), ent(CorporateBody), T::Interval, Some(Prop::HasSubdivision), F::Hierarchical, None, None),
            Prop::ChangedTo => (on(CorporateBody), ent(CorporateBody), T::Instant, Some(Prop::ChangedFrom), F::Sequential, None, None),
            Prop::ChangedFrom => (on(CorporateBody), ent(CorporateBody), T::Instant, Some(Prop::ChangedTo), F::Sequential, None, None),
            Prop::CreatedBy => (on(Work), ent(Person), T::Interval, Some(Prop::Created), F::Creation, None, Some("dis")),
            Prop::Created => (on(Person), ent(Work), T::Interval, Some(Prop::CreatedBy), F::Creation, None, None),
            Prop::AdvisedBy => (on(Work), ent(Person), T::Atemporal, Some(Prop::Advised), F::Contribution, Some("727"), Some("ths")),
            Prop::Advised => (on(Person), ent(Work), T::Atemporal, Some(Prop::AdvisedBy), F::Contribution, None, None),
            Prop::DegreeGrantedBy => (on(Work), ent(CorporateBody), T::Atemporal, Some(Prop::GrantedDegreeFor), F::Contribution, Some("295"), Some("dgg")),
            Prop::GrantedDegreeFor => (on(CorporateBody), ent(Work), T::Atemporal, Some(Prop::DegreeGrantedBy), F::Contribution, None, None),
            Prop::CommitteeMember => (on(Work), ent(Person), T::Atemporal, Some(Prop::CommitteeMemberOf), F::Contribution, None, None),
            Prop::CommitteeMemberOf => (on(Person), ent(Work), T::Atemporal, Some(Prop::CommitteeMember), F::Contribution, None, None),
            Prop::HasGender => (on(Person), ent(Gender), T::Optional, None, F::Attribute, None, None),
            Prop::EstablishedIn => (on(CorporateBody), Range::Literal(Datatype::Year), T::Atemporal, None, F::Attribute, None, None),
            Prop::BirthPlace => (on(Person), ent(Place), T::Atemporal, None, F::Attribute, None, None),
            Prop::SameAs => (Domain::Any, ent(ExternalResource), T::Atemporal, None, F::Linking, None, None),
            Prop::RelatedTo => (Domain::Any, ent(ExternalResource), T::Atemporal, None, F::Linking, None, None),
        };
        PropSpec {
            domain,
            range,
            temporality,
            inverse,
            category,
            unimarc,
            marc,
        }
    }
}

struct PropSpec {
    domain: Domain,
    range: Range,
    temporality: Temporality,
    inverse: Option<Prop>,
    category: FradCategory,
    unimarc: Option<&'static str>,
    marc: Option<&'static str>,
}

/// One ontology entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDef {
    pub prop: Prop,
    pub id: Iri,
    pub curie: String,
    pub domain: Domain,
    pub range: Range,
    pub temporality: Temporality,
    pub inverse: Option<Iri>,
    pub frad_category: FradCategory,
    pub relator_unimarc: Option<&'static str>,
    pub relator_marc21: Option<&'static str>,
}

impl PropertyDef {
    pub fn temporal_expected(&self) -> bool {
        self.temporality != Temporality::Atemporal
    }
}

/// What a vocabulary class IRI denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Kind(EntityKind),
    Body(CorporateBodySubkind),
    Work(WorkSubkind),
}

/// The ontology under a namespace. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    namespace: Iri,
    defs: Vec<PropertyDef>,
    by_iri: HashMap<Iri, usize>,
    classes: HashMap<Iri, Class>,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary::new(DEFAULT_NAMESPACE).expect("default namespace is valid")
    }
}

impl Vocabulary {
    pub fn new(namespace: &str) -> Result<Self, VocabError> {
        let ns = Iri::parse(namespace).map_err(|e| VocabError::InvalidNamespace(e.to_string()))?;
        let term = |local: &str| {
            ns.append(local)
                .map_err(|e| VocabError::InvalidNamespace(e.to_string()))
        };
        let mut defs = Vec::with_capacity(Prop::ALL.len());
        for prop in Prop::ALL {
            let spec = prop.spec();
            defs.push(PropertyDef {
                prop,
                id: term(prop.local_name())?,
                curie: format!("{PREFIX}:{}", prop.local_name()),
                domain: spec.domain,
                range: spec.range,
                temporality: spec.temporality,
                inverse: spec.inverse.map(|inv| term(inv.local_name())).transpose()?,
                frad_category: spec.category,
                relator_unimarc: spec.unimarc,
                relator_marc21: spec.marc,
            });
        }
        let by_iri = defs.iter().enumerate().map(|(i, d)| (d.id.clone(), i)).collect();

        let mut classes = HashMap::new();
        for k in EntityKind::ALL {
            classes.insert(term(k.class_name())?, Class::Kind(k));
        }
        for k in CorporateBodySubkind::ALL {
            classes.insert(term(k.class_name())?, Class::Body(k));
        }
        for k in WorkSubkind::ALL {
            classes.insert(term(k.class_name())?, Class::Work(k));
        }

        Ok(Vocabulary {
            namespace: ns,
            defs,
            by_iri,
            classes,
        })
    }

    pub fn namespace(&self) -> &Iri {
        &self.namespace
    }

    pub fn table(&self) -> &[PropertyDef] {
        &self.defs
    }

    pub fn def(&self, prop: Prop) -> &PropertyDef {
        &self.defs[prop as usize]
    }

    pub fn iri(&self, prop: Prop) -> &Iri {
        &self.def(prop).id
    }

    pub fn get(&self, id: &Iri) -> Option<&PropertyDef> {
        self.by_iri.get(id).map(|&i| &self.defs[i])
    }

    pub fn property(&self, id: &Iri) -> Result<&PropertyDef, VocabError> {
        self.get(id)
            .ok_or_else(|| VocabError::UnknownProperty(id.to_string()))
    }

    pub fn prop_of(&self, id: &Iri) -> Option<Prop> {
        self.get(id).map(|d| d.prop)
    }

    /// Looks a property up by `etd:` compact name.
    pub fn lookup(&self, curie: &str) -> Result<&PropertyDef, VocabError> {
        let unknown = || VocabError::UnknownProperty(curie.to_string());
        let local = curie
            .strip_prefix(PREFIX)
            .and_then(|rest| rest.strip_prefix(':'))
            .ok_or_else(unknown)?;
        Prop::ALL
            .into_iter()
            .find(|p| p.local_name() == local)
            .map(|p| self.def(p))
            .ok_or_else(unknown)
    }

    pub fn inverse_of(&self, id: &Iri) -> Result<Option<&Iri>, VocabError> {
        Ok(self.property(id)?.inverse.as_ref())
    }

    pub fn kind_class(&self, kind: EntityKind) -> Iri {
        self.namespace.append(kind.class_name()).expect("valid class")
    }

    pub fn body_class(&self, kind: CorporateBodySubkind) -> Iri {
        self.namespace.append(kind.class_name()).expect("valid class")
    }

    pub fn work_class(&self, kind: WorkSubkind) -> Iri {
        self.namespace.append(kind.class_name()).expect("valid class")
    }

    pub fn class(&self, iri: &Iri) -> Option<Class> {
        self.classes.get(iri).copied()
    }

    /// Vocabulary term for a local name that is not a property (quad
    /// context keys and similar).
    pub fn term(&self, local: &str) -> Iri {
        self.namespace.append(local).expect("valid local name")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relator_codes() {
        let v = Vocabulary::default();
        let dgg = v.lookup("etd:degreeGrantedBy").unwrap();
        assert_eq!(dgg.relator_unimarc, Some("295"));
        assert_eq!(dgg.relator_marc21, Some("dgg"));
        let ths = v.lookup("etd:advisedBy").unwrap();
        assert_eq!(ths.relator_unimarc, Some("727"));
        assert_eq!(ths.relator_marc21, Some("ths"));
        let dis = v.lookup("etd:createdBy").unwrap();
        assert_eq!(dis.relator_marc21, Some("dis"));
        assert_eq!(dis.relator_unimarc, None);

        let coded: Vec<_> = v
            .table()
            .iter()
            .filter(|d| d.relator_marc21.is_some() || d.relator_unimarc.is_some())
            .map(|d| d.prop)
            .collect();
        assert_eq!(coded, vec![Prop::CreatedBy, Prop::AdvisedBy, Prop::DegreeGrantedBy]);
    }

    #[test]
    fn categories() {
        let v = Vocabulary::default();
        let sub = v.lookup("etd:hasSubdivision").unwrap();
        assert_eq!(sub.frad_category, FradCategory::Hierarchical);
        assert_eq!(sub.inverse.as_ref(), Some(v.iri(Prop::IsSubdivisionOf)));
        assert_eq!(v.lookup("etd:isProfessorAt").unwrap().frad_category, FradCategory::Membership);
        let changed = v.lookup("etd:changedTo").unwrap();
        assert!(changed.temporal_expected());
        assert_eq!(changed.temporality, Temporality::Instant);
        assert_eq!(changed.frad_category, FradCategory::Sequential);
    }

    #[test]
    fn unknown_property() {
        let v = Vocabulary::default();
        assert!(matches!(v.lookup("etd:nonsense"), Err(VocabError::UnknownProperty(_))));
        assert!(v.lookup("foaf:name").is_err());
        let bogus = Iri::parse("http://example.org/etd/vocab#nonsense").unwrap();
        assert!(v.inverse_of(&bogus).is_err());
    }

    #[test]
    fn inverse_examples() {
        let v = Vocabulary::default();
        assert_eq!(v.inverse_of(v.iri(Prop::CreatedBy)).unwrap(), Some(v.iri(Prop::Created)));
        assert_eq!(v.inverse_of(v.iri(Prop::HasGender)).unwrap(), None);
        let inv = v.inverse_of(v.iri(Prop::HasSubdivision)).unwrap().unwrap().clone();
        assert_eq!(v.inverse_of(&inv).unwrap(), Some(v.iri(Prop::HasSubdivision)));
    }

    #[test]
    fn inverse_pairs_swap_domain_and_range() {
        let v = Vocabulary::default();
        for def in v.table() {
            let Some(inv) = &def.inverse else { continue };
            let other = v.property(inv).unwrap();
            assert_eq!(other.inverse.as_ref(), Some(&def.id), "{}", def.curie);
            let as_domain = |r: Range| match r {
                Range::Entity(k) => Domain::Kind(k),
                other => panic!("inverse with non-entity range {other:?}"),
            };
            assert_eq!(as_domain(def.range), other.domain, "{}", def.curie);
            assert_eq!(as_domain(other.range), def.domain, "{}", def.curie);
            assert_eq!(def.frad_category, other.frad_category);
        }
    }

    #[test]
    fn namespace_override() {
        let v = Vocabulary::new("https://library.example.edu/ns#").unwrap();
        assert_eq!(v.iri(Prop::Label).as_str(), "https://library.example.edu/ns#label");
        assert_eq!(v.lookup("etd:label").unwrap().prop, Prop::Label);
        assert!(Vocabulary::new("not an iri").is_err());
    }

    #[test]
    fn classes_resolve() {
        let v = Vocabulary::default();
        assert_eq!(v.class(&v.kind_class(EntityKind::Gender)), Some(Class::Kind(EntityKind::Gender)));
        assert_eq!(
            v.class(&v.work_class(WorkSubkind::PhDDissertation)),
            Some(Class::Work(WorkSubkind::PhDDissertation))
        );
        assert_eq!(v.class(v.iri(Prop::Label)), None);
    }
}
