//! Read-only inference over a store: hierarchy closure at a point in time,
//! succession chains, time-scoped membership, mobility between
//! institutions, and structural timelines.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::model::{Iri, TemporalTriple, TimeInterval, TimePoint, Validity};
use crate::par::Execution;
use crate::store::{Pattern, Store, StoreError};
use crate::vocab::{EntityKind, Prop};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonError {
    #[error("subdivision cycle: {}", join(.0))]
    HierarchyCycle(Vec<Iri>),
    #[error("succession cycle: {}", join(.0))]
    SequenceCycle(Vec<Iri>),
    #[error("{body} changed into more than one body: {}", join(.successors))]
    AmbiguousSuccession { body: Iri, successors: Vec<Iri> },
    #[error("{0} is not a corporate body")]
    NotABody(Iri),
    #[error("{0} is not a person")]
    NotAPerson(Iri),
    #[error(transparent)]
    Store(#[from] StoreError),
}

fn join(iris: &[Iri]) -> String {
    iris.iter().map(Iri::as_str).collect::<Vec<_>>().join(" -> ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Student,
    Professor,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Student => "student",
            Role::Professor => "professor",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoleFilter {
    Student,
    Professor,
    Any,
}

impl RoleFilter {
    fn props(&self) -> &'static [Prop] {
        match self {
            RoleFilter::Student => &[Prop::IsStudentOf],
            RoleFilter::Professor => &[Prop::IsProfessorAt],
            RoleFilter::Any => &[Prop::IsStudentOf, Prop::IsProfessorAt],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MobilityEvent {
    pub person: Iri,
    pub from_institution: Iri,
    pub to_institution: Iri,
    pub from_role: Role,
    pub to_role: Role,
    pub departure: TimePoint,
    pub arrival: TimePoint,
    pub gap_years: i32,
}

/// Consecutive affiliations at different institutions that overlap in
/// time. No mobility event is derived for them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcurrentAffiliation {
    pub person: Iri,
    pub first: Iri,
    pub second: Iri,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MobilityTrace {
    pub events: Vec<MobilityEvent>,
    pub concurrent: Vec<ConcurrentAffiliation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
/// Declaration order is the order of events on the same day: a body
/// changes or loses a subdivision before its successors are established.
pub enum StructureEventKind {
    ChangedTo,
    SubdivisionRemoved,
    Renamed,
    Established,
    SubdivisionAdded,
}

impl fmt::Display for StructureEventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureEventKind::Established => "established",
            StructureEventKind::SubdivisionAdded => "subdivision-added",
            StructureEventKind::Renamed => "renamed",
            StructureEventKind::ChangedTo => "changed-to",
            StructureEventKind::SubdivisionRemoved => "subdivision-removed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureEvent {
    pub body: Iri,
    pub kind: StructureEventKind,
    pub when: TimePoint,
    pub counterpart: Option<Iri>,
}

fn require_kind(store: &Store, iri: &Iri, kind: EntityKind) -> Result<(), ReasonError> {
    if store.kind_of(iri) == Some(kind) {
        return Ok(());
    }
    Err(match kind {
        EntityKind::Person => ReasonError::NotAPerson(iri.clone()),
        _ => ReasonError::NotABody(iri.clone()),
    })
}

/// IRI objects of `(subject, prop, ?)` with inverses, optionally at `t`.
fn neighbours(store: &Store, subject: &Iri, prop: Prop, t: Option<TimePoint>) -> Result<Vec<Iri>, StoreError> {
    let mut pattern = Pattern::any()
        .subject(subject)
        .property(store.vocab().iri(prop))
        .with_inverses();
    if let Some(t) = t {
        pattern = pattern.at(t);
    }
    let found: BTreeSet<Iri> = store
        .match_pattern(&pattern)?
        .into_iter()
        .filter_map(|m| m.triple.object.as_iri().cloned())
        .collect();
    Ok(found.into_iter().collect())
}

fn parents_at(store: &Store, body: &Iri, t: TimePoint) -> Result<Vec<Iri>, StoreError> {
    neighbours(store, body, Prop::IsSubdivisionOf, Some(t))
}

fn children_at(store: &Store, body: &Iri, t: TimePoint) -> Result<Vec<Iri>, StoreError> {
    neighbours(store, body, Prop::HasSubdivision, Some(t))
}

/// Bodies `body` is a (transitive) subdivision of at `t`, nearest first.
///
/// Ties at equal distance are ordered by IRI. A cycle among the edges valid
/// at `t` is an error.
pub fn ancestors_at(store: &Store, body: &Iri, t: TimePoint) -> Result<Vec<Iri>, ReasonError> {
    Ok(ancestor_layers(store, body, t)?.into_iter().flatten().collect())
}

/// Ancestors grouped by distance from `body`.
fn ancestor_layers(store: &Store, body: &Iri, t: TimePoint) -> Result<Vec<Vec<Iri>>, ReasonError> {
    require_kind(store, body, EntityKind::CorporateBody)?;
    detect_cycle(store, body, t)?;

    let mut seen = BTreeSet::from([body.clone()]);
    let mut layers = Vec::new();
    let mut frontier = vec![body.clone()];
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for node in &frontier {
            for parent in parents_at(store, node, t)? {
                if seen.insert(parent.clone()) {
                    next.insert(parent);
                }
            }
        }
        frontier = next.into_iter().collect();
        if !frontier.is_empty() {
            layers.push(frontier.clone());
        }
    }
    Ok(layers)
}

/// Depth-first search for a back edge reachable from `start`.
fn detect_cycle(store: &Store, start: &Iri, t: TimePoint) -> Result<(), ReasonError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: HashMap<Iri, Mark> = HashMap::new();
    let mut path: Vec<Iri> = Vec::new();
    let mut stack: Vec<(Iri, Vec<Iri>)> = vec![(start.clone(), parents_at(store, start, t)?)];
    marks.insert(start.clone(), Mark::Open);
    path.push(start.clone());
    while let Some((_, pending)) = stack.last_mut() {
        match pending.pop() {
            Some(next) => match marks.get(&next) {
                Some(Mark::Open) => {
                    let from = path.iter().position(|n| *n == next).unwrap();
                    let mut cycle = path[from..].to_vec();
                    cycle.push(next);
                    return Err(ReasonError::HierarchyCycle(cycle));
                }
                Some(Mark::Done) => {}
                None => {
                    marks.insert(next.clone(), Mark::Open);
                    path.push(next.clone());
                    let parents = parents_at(store, &next, t)?;
                    stack.push((next, parents));
                }
            },
            None => {
                let (node, _) = stack.pop().unwrap();
                marks.insert(node, Mark::Done);
                path.pop();
            }
        }
    }
    Ok(())
}

/// Top-level institution of `body` at `t`: the farthest ancestor without
/// parents (smallest IRI among equals), or the body itself.
pub fn institution_at(store: &Store, body: &Iri, t: TimePoint) -> Result<Iri, ReasonError> {
    for layer in ancestor_layers(store, body, t)?.iter().rev() {
        for candidate in layer {
            if parents_at(store, candidate, t)?.is_empty() {
                return Ok(candidate.clone());
            }
        }
    }
    Ok(body.clone())
}

/// Maximal chain of `etd:changedTo` successors starting at `body`.
pub fn successor_chain(store: &Store, body: &Iri) -> Result<Vec<Iri>, ReasonError> {
    require_kind(store, body, EntityKind::CorporateBody)?;
    let mut chain = vec![body.clone()];
    let mut current = body.clone();
    loop {
        let next = neighbours(store, &current, Prop::ChangedTo, None)?;
        match next.as_slice() {
            [] => return Ok(chain),
            [one] => {
                if chain.contains(one) {
                    chain.push(one.clone());
                    return Err(ReasonError::SequenceCycle(chain));
                }
                chain.push(one.clone());
                current = one.clone();
            }
            many => {
                return Err(ReasonError::AmbiguousSuccession {
                    body: current,
                    successors: many.to_vec(),
                })
            }
        }
    }
}

/// Predecessors through `etd:changedFrom`, nearest first. Branching
/// predecessors (merges) are all followed.
fn predecessors(store: &Store, body: &Iri) -> Result<Vec<Iri>, ReasonError> {
    let mut seen = BTreeSet::from([body.clone()]);
    let mut out = Vec::new();
    let mut queue = VecDeque::from([body.clone()]);
    while let Some(b) = queue.pop_front() {
        for p in neighbours(store, &b, Prop::ChangedFrom, None)? {
            if seen.insert(p.clone()) {
                out.push(p.clone());
                queue.push_back(p);
            }
        }
    }
    Ok(out)
}

/// Subdivision subtree of `body` at `t`, `body` included.
pub fn subtree_at(store: &Store, body: &Iri, t: TimePoint) -> Result<BTreeSet<Iri>, ReasonError> {
    let mut seen = BTreeSet::from([body.clone()]);
    let mut queue = VecDeque::from([body.clone()]);
    while let Some(b) = queue.pop_front() {
        for c in children_at(store, &b, t)? {
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    Ok(seen)
}

/// Persons affiliated with `body` at `t` in the given role, sorted.
pub fn members_at(
    store: &Store,
    body: &Iri,
    t: TimePoint,
    role: RoleFilter,
    include_subdivisions: bool,
    follow_successors: bool,
) -> Result<Vec<Iri>, ReasonError> {
    require_kind(store, body, EntityKind::CorporateBody)?;
    let mut roots = vec![body.clone()];
    if follow_successors {
        roots.extend(successor_chain(store, body)?.into_iter().skip(1));
        roots.extend(predecessors(store, body)?);
    }
    let mut bodies = BTreeSet::new();
    for r in roots {
        if include_subdivisions {
            bodies.extend(subtree_at(store, &r, t)?);
        } else {
            bodies.insert(r);
        }
    }

    let mut members = BTreeSet::new();
    for b in &bodies {
        for prop in role.props() {
            let pattern = Pattern::any()
                .property(store.vocab().iri(*prop))
                .object(b.clone())
                .at(t);
            for m in store.match_pattern(&pattern)? {
                members.insert(m.triple.subject);
            }
        }
    }
    Ok(members.into_iter().collect())
}

struct Affiliation {
    institution: Iri,
    role: Role,
    start: Option<TimePoint>,
    /// Effective end: for students, extended to the latest study-period end
    /// of a work granted by the same institution.
    end: Option<TimePoint>,
}

fn point_for_lifting(validity: &Validity) -> TimePoint {
    validity
        .start()
        .or_else(|| validity.end())
        .unwrap_or_else(|| TimePoint::year(1).expect("valid year"))
}

/// Later of two optional ends, `None` meaning still open.
fn later_end(a: Option<TimePoint>, b: Option<TimePoint>) -> Option<TimePoint> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.last_day() > a.last_day() { b } else { a }),
        _ => None,
    }
}

fn affiliations(store: &Store, person: &Iri) -> Result<Vec<Affiliation>, ReasonError> {
    // (institution, study end) of works the person wrote
    let mut studies: Vec<(Iri, TimePoint)> = Vec::new();
    let created = Pattern::any()
        .subject(person)
        .property(store.vocab().iri(Prop::Created))
        .with_inverses();
    for m in store.match_pattern(&created)? {
        let (Some(work), Some(end)) = (m.triple.object.as_iri(), m.triple.validity.end()) else { continue };
        for grantor in store.values(work, Prop::DegreeGrantedBy) {
            if let Some(body) = grantor.object.as_iri() {
                studies.push((institution_at(store, body, end)?, end));
            }
        }
    }

    let mut out = Vec::new();
    for (prop, role) in [(Prop::IsStudentOf, Role::Student), (Prop::IsProfessorAt, Role::Professor)] {
        for t in store.values(person, prop) {
            let Some(body) = t.object.as_iri() else { continue };
            let institution = institution_at(store, body, point_for_lifting(&t.validity))?;
            let mut end = t.validity.end();
            if role == Role::Student {
                for (inst, study_end) in &studies {
                    if *inst == institution {
                        end = match end {
                            None => Some(*study_end),
                            Some(e) => later_end(Some(e), Some(*study_end)),
                        };
                    }
                }
            }
            out.push(Affiliation {
                institution,
                role,
                start: t.validity.start(),
                end,
            });
        }
    }
    out.sort_by(|a, b| {
        let key = |x: &Affiliation| {
            (
                x.start.map_or(i64::MIN, |s| s.first_day()),
                x.end.map_or(i64::MAX, |e| e.last_day()),
            )
        };
        key(a)
            .cmp(&key(b))
            .then_with(|| a.institution.cmp(&b.institution))
            .then_with(|| a.role.cmp(&b.role))
    });
    Ok(out)
}

/// Moves between top-level institutions, with overlapping affiliations at
/// different institutions reported separately.
pub fn mobility_trace(store: &Store, person: &Iri) -> Result<MobilityTrace, ReasonError> {
    require_kind(store, person, EntityKind::Person)?;
    let affs = affiliations(store, person)?;

    // Runs of consecutive affiliations at the same institution.
    struct Stint {
        institution: Iri,
        first_role: Role,
        start: Option<TimePoint>,
        end: Option<TimePoint>,
        last_role: Role,
    }
    let mut stints: Vec<Stint> = Vec::new();
    for a in affs {
        match stints.last_mut() {
            Some(s) if s.institution == a.institution => {
                let extended = later_end(s.end, a.end);
                if extended != s.end || a.end.is_none() {
                    s.last_role = a.role;
                }
                s.end = extended;
            }
            _ => stints.push(Stint {
                institution: a.institution,
                first_role: a.role,
                start: a.start,
                end: a.end,
                last_role: a.role,
            }),
        }
    }

    let mut trace = MobilityTrace::default();
    for pair in stints.windows(2) {
        let (from, to) = (&pair[0], &pair[1]);
        let departed = match (from.end, to.start) {
            (Some(end), Some(start)) if end.last_day() < start.first_day() => Some((end, start)),
            _ => None,
        };
        match departed {
            Some((departure, arrival)) => trace.events.push(MobilityEvent {
                person: person.clone(),
                from_institution: from.institution.clone(),
                to_institution: to.institution.clone(),
                from_role: from.last_role,
                to_role: to.first_role,
                departure,
                arrival,
                gap_years: arrival.year_value() - departure.year_value(),
            }),
            None => trace.concurrent.push(ConcurrentAffiliation {
                person: person.clone(),
                first: from.institution.clone(),
                second: to.institution.clone(),
            }),
        }
    }
    trace
        .events
        .sort_by_key(|e| (e.departure.first_day(), e.arrival.first_day()));
    Ok(trace)
}

pub fn derive_mobility(store: &Store, person: &Iri) -> Result<Vec<MobilityEvent>, ReasonError> {
    Ok(mobility_trace(store, person)?.events)
}

/// Mobility of every person in the store, in person order.
pub fn derive_mobility_all(store: &Store, exec: Execution) -> Result<Vec<(Iri, MobilityTrace)>, ReasonError> {
    let persons = store.entities_of_kind(EntityKind::Person);
    exec.try_map(&persons, |p| Ok((p.clone(), mobility_trace(store, p)?)))
}

/// Chronological structural events for `university` and every body ever
/// in its subdivision tree (and their successors).
pub fn structure_timeline(store: &Store, university: &Iri) -> Result<Vec<StructureEvent>, ReasonError> {
    require_kind(store, university, EntityKind::CorporateBody)?;

    let mut bodies = BTreeSet::from([university.clone()]);
    let mut queue = VecDeque::from([university.clone()]);
    while let Some(b) = queue.pop_front() {
        let mut next = neighbours(store, &b, Prop::HasSubdivision, None)?;
        next.extend(neighbours(store, &b, Prop::ChangedTo, None)?);
        for n in next {
            if bodies.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }

    let mut events = Vec::new();
    let mut push = |body: &Iri, kind, when: Option<TimePoint>, counterpart: Option<&Iri>| {
        if let Some(when) = when {
            events.push(StructureEvent {
                body: body.clone(),
                kind,
                when,
                counterpart: counterpart.cloned(),
            });
        }
    };
    let edge = |t: &TemporalTriple| -> Option<Iri> { t.object.as_iri().cloned() };

    for body in &bodies {
        for t in store.values(body, Prop::EstablishedIn) {
            let when = t.object.as_literal().and_then(|l| l.as_time_point());
            push(body, StructureEventKind::Established, when, None);
        }
        let sub = Pattern::any()
            .subject(body)
            .property(store.vocab().iri(Prop::HasSubdivision))
            .with_inverses();
        for m in store.match_pattern(&sub)? {
            let child = edge(&m.triple);
            push(body, StructureEventKind::SubdivisionAdded, m.triple.validity.start(), child.as_ref());
            push(body, StructureEventKind::SubdivisionRemoved, m.triple.validity.end(), child.as_ref());
        }
        let changed = Pattern::any()
            .subject(body)
            .property(store.vocab().iri(Prop::ChangedTo))
            .with_inverses();
        for m in store.match_pattern(&changed)? {
            push(body, StructureEventKind::ChangedTo, m.triple.validity.start(), edge(&m.triple).as_ref());
        }
        let mut labels: Vec<&TemporalTriple> = store.values(body, Prop::Label);
        labels.sort_by_key(|t| t.validity.day_range().first);
        for t in labels.iter().skip(1) {
            push(body, StructureEventKind::Renamed, t.validity.start(), None);
        }
    }
    events.sort_by(|a, b| {
        a.when
            .first_day()
            .cmp(&b.when.first_day())
            .then_with(|| a.kind.cmp(&b.kind))
            .then_with(|| a.body.cmp(&b.body))
            .then_with(|| a.counterpart.cmp(&b.counterpart))
    });
    events.dedup();
    Ok(events)
}

/// Gender asserted for `person` at `t` (or the most recent one when `t` is
/// `None`). Several valid at once: latest start wins, then IRI order.
pub fn gender_at(store: &Store, person: &Iri, t: Option<TimePoint>) -> Option<Iri> {
    store
        .values(person, Prop::HasGender)
        .into_iter()
        .filter(|g| t.is_none_or(|t| g.validity.contains(&t)))
        .filter_map(|g| Some((g.validity.day_range().first, g.object.as_iri()?.clone())))
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
        .map(|(_, g)| g)
}

/// Facts about one work gathered for analytics.
#[derive(Debug, Clone)]
pub struct WorkFacts {
    pub work: Iri,
    pub kind: Option<Iri>,
    pub study: Option<TimeInterval>,
    pub dissertants: Vec<Iri>,
    pub advisors: Vec<Iri>,
    pub committee: Vec<Iri>,
    pub grantors: Vec<Iri>,
}

impl WorkFacts {
    pub fn gather(store: &Store, work: &Iri) -> Self {
        let objects = |prop| -> Vec<Iri> {
            let set: BTreeSet<Iri> = store
                .values(work, prop)
                .into_iter()
                .filter_map(|t| t.object.as_iri().cloned())
                .collect();
            set.into_iter().collect()
        };
        let created = store.values(work, Prop::CreatedBy);
        let study = created.iter().find_map(|t| t.validity.interval().copied());
        WorkFacts {
            work: work.clone(),
            kind: store
                .values(work, Prop::WorkKind)
                .first()
                .and_then(|t| t.object.as_iri().cloned()),
            study,
            dissertants: objects(Prop::CreatedBy),
            advisors: objects(Prop::AdvisedBy),
            committee: objects(Prop::CommitteeMember),
            grantors: objects(Prop::DegreeGrantedBy),
        }
    }

    /// All works, gathered with the given execution strategy.
    pub fn all(store: &Store, exec: Execution) -> Vec<WorkFacts> {
        let works = store.entities_of_kind(EntityKind::Work);
        exec.map(&works, |w| WorkFacts::gather(store, w))
    }

    /// Point used for time-dependent lookups: study end, else study start.
    pub fn reference_point(&self) -> Option<TimePoint> {
        self.study.and_then(|s| s.end().or(s.start()))
    }
}
