//! Canned aggregate questions over the academic network.
//!
//! Every analytic reads gender at a stated point in time: tallies at the
//! probe point, supervision counts at the end of the work's study period,
//! mobility at the arrival.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;

use crate::model::{Iri, TimeInterval, TimePoint};
use crate::par::Execution;
use crate::reason::{
    ancestors_at, derive_mobility_all, gender_at, institution_at, members_at, subtree_at, ConcurrentAffiliation, MobilityEvent,
    ReasonError, RoleFilter, WorkFacts,
};
use crate::store::Store;
use crate::vocab::{EntityKind, Prop, WorkSubkind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TallyRole {
    Student,
    Professor,
    Advisor,
    Committee,
    Dissertant,
}

impl TallyRole {
    pub const ALL: [TallyRole; 5] = [
        TallyRole::Student,
        TallyRole::Professor,
        TallyRole::Advisor,
        TallyRole::Committee,
        TallyRole::Dissertant,
    ];

    pub fn keyword(&self) -> &'static str {
        match self {
            TallyRole::Student => "student",
            TallyRole::Professor => "professor",
            TallyRole::Advisor => "advisor",
            TallyRole::Committee => "committee",
            TallyRole::Dissertant => "dissertant",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.keyword() == word)
    }
}

impl fmt::Display for TallyRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Which works an analytic looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WorkFilter {
    Master,
    Phd,
    #[default]
    Any,
}

impl WorkFilter {
    fn admits(&self, store: &Store, facts: &WorkFacts) -> bool {
        let wanted = match self {
            WorkFilter::Any => return true,
            WorkFilter::Master => WorkSubkind::MasterThesis,
            WorkFilter::Phd => WorkSubkind::PhDDissertation,
        };
        facts.kind.as_ref() == Some(&store.vocab().work_class(wanted))
    }
}

/// Gender of a person, or the absence of one at the time asked.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenderKey {
    Specified(Iri),
    Unspecified,
}

impl GenderKey {
    fn of(store: &Store, person: &Iri, t: Option<TimePoint>) -> Self {
        match gender_at(store, person, t) {
            Some(g) => GenderKey::Specified(g),
            None => GenderKey::Unspecified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenderTally {
    pub scope: Iri,
    pub role: TallyRole,
    pub at: TimePoint,
    pub counts: BTreeMap<Iri, usize>,
    pub unspecified: usize,
    /// The persons counted, sorted.
    pub persons: Vec<Iri>,
}

impl GenderTally {
    pub fn total(&self) -> usize {
        self.counts.values().sum::<usize>() + self.unspecified
    }
}

/// Works whose study period overlaps `iv`.
fn works_in(store: &Store, iv: &TimeInterval, filter: WorkFilter, exec: Execution) -> Vec<WorkFacts> {
    WorkFacts::all(store, exec)
        .into_iter()
        .filter(|w| w.study.is_some_and(|s| s.overlaps(iv)))
        .filter(|w| filter.admits(store, w))
        .collect()
}

fn year_of(t: TimePoint) -> TimeInterval {
    let y = TimePoint::year(t.year_value()).expect("year of a valid point");
    TimeInterval::instant(y)
}

/// Persons in a role at `scope` at `t`, counted by their gender at `t`.
///
/// Students and professors come from membership at `t`. Advisors,
/// committee members and dissertants come from works granted by the scope
/// (or its subtree at `t`) whose study period overlaps the year of `t`.
pub fn gender_tally(
    store: &Store,
    scope: &Iri,
    role: TallyRole,
    t: TimePoint,
    include_subdivisions: bool,
) -> Result<GenderTally, ReasonError> {
    if store.kind_of(scope) != Some(EntityKind::CorporateBody) {
        return Err(ReasonError::NotABody(scope.clone()));
    }
    let persons: Vec<Iri> = match role {
        TallyRole::Student => members_at(store, scope, t, RoleFilter::Student, include_subdivisions, false)?,
        TallyRole::Professor => members_at(store, scope, t, RoleFilter::Professor, include_subdivisions, false)?,
        TallyRole::Advisor | TallyRole::Committee | TallyRole::Dissertant => {
            let bodies = if include_subdivisions {
                subtree_at(store, scope, t)?
            } else {
                BTreeSet::from([scope.clone()])
            };
            let year = year_of(t);
            let mut set = BTreeSet::new();
            for w in works_in(store, &year, WorkFilter::Any, Execution::Sequential) {
                if !w.grantors.iter().any(|g| bodies.contains(g)) {
                    continue;
                }
                let people = match role {
                    TallyRole::Advisor => &w.advisors,
                    TallyRole::Committee => &w.committee,
                    _ => &w.dissertants,
                };
                set.extend(people.iter().cloned());
            }
            set.into_iter().collect()
        }
    };
    let mut counts = BTreeMap::new();
    let mut unspecified = 0;
    for p in &persons {
        match gender_at(store, p, Some(t)) {
            Some(g) => *counts.entry(g).or_insert(0) += 1,
            None => unspecified += 1,
        }
    }
    Ok(GenderTally {
        scope: scope.clone(),
        role,
        at: t,
        counts,
        unspecified,
        persons,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateEntry {
    pub supervisions: usize,
    /// Fraction of supervisions by persons of a specified gender.
    pub share: Ratio<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupervisorRates {
    pub by_gender: BTreeMap<Iri, RateEntry>,
    /// Supervisions whose advisor has no gender at the reference point.
    pub unspecified: usize,
}

impl SupervisorRates {
    pub fn total(&self) -> usize {
        self.by_gender.values().map(|e| e.supervisions).sum::<usize>() + self.unspecified
    }
}

/// Exact ratio rendered with four decimals, rounding half up.
pub fn format_ratio(r: &Ratio<u64>) -> String {
    let scaled = (r * Ratio::from_integer(10_000u64) + Ratio::new(1, 2)).floor().to_integer();
    format!("{}.{:04}", scaled / 10_000, scaled % 10_000)
}

/// `advisedBy` edges of in-scope works, as (advisor gender, dissertant
/// gender), both read at the work's reference point.
fn supervision_edges(store: &Store, iv: &TimeInterval, filter: WorkFilter, exec: Execution) -> Vec<(GenderKey, GenderKey)> {
    let works = works_in(store, iv, filter, exec);
    let per_work = exec.map(&works, |w| {
        let at = w.reference_point();
        let dissertant = w
            .dissertants
            .first()
            .map_or(GenderKey::Unspecified, |d| GenderKey::of(store, d, at));
        w.advisors
            .iter()
            .map(|a| (GenderKey::of(store, a, at), dissertant.clone()))
            .collect::<Vec<_>>()
    });
    per_work.into_iter().flatten().collect()
}

/// Supervisions per advisor gender over works of the kind whose study
/// period overlaps `iv`.
pub fn supervisor_gender_rate(store: &Store, iv: &TimeInterval, filter: WorkFilter, exec: Execution) -> SupervisorRates {
    let mut rates = SupervisorRates::default();
    let mut counts: BTreeMap<Iri, usize> = BTreeMap::new();
    for (advisor, _) in supervision_edges(store, iv, filter, exec) {
        match advisor {
            GenderKey::Specified(g) => *counts.entry(g).or_insert(0) += 1,
            GenderKey::Unspecified => rates.unspecified += 1,
        }
    }
    let specified: usize = counts.values().sum();
    for (g, n) in counts {
        rates.by_gender.insert(
            g,
            RateEntry {
                supervisions: n,
                share: Ratio::new(n as u64, specified as u64),
            },
        );
    }
    rates
}

pub type GenderMatrix = BTreeMap<GenderKey, BTreeMap<GenderKey, usize>>;

/// Advisor gender by dissertant gender, one count per `advisedBy` edge.
pub fn supervision_gender_matrix(store: &Store, iv: &TimeInterval, filter: WorkFilter, exec: Execution) -> GenderMatrix {
    let mut matrix = GenderMatrix::new();
    for (advisor, dissertant) in supervision_edges(store, iv, filter, exec) {
        *matrix.entry(advisor).or_default().entry(dissertant).or_insert(0) += 1;
    }
    matrix
}

/// Where a grantor sits at a point in time: its top-level institution and
/// the subdivision directly under it (`None` for the institution itself).
fn placement(store: &Store, body: &Iri, t: TimePoint) -> Result<(Iri, Option<Iri>), ReasonError> {
    let institution = institution_at(store, body, t)?;
    if institution == *body {
        return Ok((institution, None));
    }
    let chain = ancestors_at(store, body, t)?;
    let mut branch = body.clone();
    for a in chain {
        if a == institution {
            break;
        }
        branch = a;
    }
    Ok((institution, Some(branch)))
}

/// Works granted jointly by bodies that diverge: different institutions,
/// or different subdivisions directly under the same institution.
/// Placement is read at the study end. Sorted.
pub fn interdisciplinary_works(store: &Store, iv: &TimeInterval, exec: Execution) -> Result<Vec<Iri>, ReasonError> {
    let works: Vec<WorkFacts> = works_in(store, iv, WorkFilter::Any, exec)
        .into_iter()
        .filter(|w| w.grantors.len() >= 2)
        .collect();
    let flags = exec.try_map(&works, |w| -> Result<bool, ReasonError> {
        let Some(at) = w.reference_point() else { return Ok(false) };
        let places: Vec<(Iri, Option<Iri>)> = w
            .grantors
            .iter()
            .map(|g| placement(store, g, at))
            .collect::<Result<_, _>>()?;
        for (i, a) in places.iter().enumerate() {
            for b in &places[i + 1..] {
                let diverge = match (a, b) {
                    ((ia, _), (ib, _)) if ia != ib => true,
                    ((_, Some(x)), (_, Some(y))) => x != y,
                    _ => false,
                };
                if diverge {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    })?;
    Ok(works
        .into_iter()
        .zip(flags)
        .filter(|(_, f)| *f)
        .map(|(w, _)| w.work)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobilityStats {
    pub moves: usize,
    pub total_gap_years: i64,
}

impl MobilityStats {
    pub fn average_gap(&self) -> Ratio<i64> {
        Ratio::new(self.total_gap_years, self.moves.max(1) as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MobilityReport {
    pub by_gender: BTreeMap<GenderKey, MobilityStats>,
    /// Events counted, in (person, departure) order.
    pub events: Vec<MobilityEvent>,
    /// Overlapping affiliations at different institutions, for which no
    /// event is derived, in person order.
    pub concurrent: Vec<ConcurrentAffiliation>,
}

/// Mobility events arriving within `iv`, grouped by gender at arrival.
pub fn mobility_by_gender(store: &Store, iv: &TimeInterval, exec: Execution) -> Result<MobilityReport, ReasonError> {
    let mut report = MobilityReport::default();
    for (_, trace) in derive_mobility_all(store, exec)? {
        report.concurrent.extend(trace.concurrent);
        for e in trace.events {
            if !iv.contains(&e.arrival) {
                continue;
            }
            let key = GenderKey::of(store, &e.person, Some(e.arrival));
            let stats = report.by_gender.entry(key).or_insert(MobilityStats {
                moves: 0,
                total_gap_years: 0,
            });
            stats.moves += 1;
            stats.total_gap_years += i64::from(e.gap_years);
            report.events.push(e);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cooperation {
    pub first: Iri,
    pub second: Iri,
    pub shared_works: usize,
}

/// Institution pairs linked by a work granted by one and advised or
/// examined by a professor of the other during the study period.
/// Sorted by count descending, then by pair.
pub fn institution_cooperation(store: &Store, iv: &TimeInterval, exec: Execution) -> Result<Vec<Cooperation>, ReasonError> {
    let works = works_in(store, iv, WorkFilter::Any, exec);
    let per_work = exec.try_map(&works, |w| -> Result<BTreeSet<(Iri, Iri)>, ReasonError> {
        let mut pairs = BTreeSet::new();
        let (Some(study), Some(at)) = (w.study, w.reference_point()) else { return Ok(pairs) };
        let granting: BTreeSet<Iri> = w
            .grantors
            .iter()
            .map(|g| institution_at(store, g, at))
            .collect::<Result<_, _>>()?;
        for person in w.advisors.iter().chain(&w.committee) {
            for aff in store.values(person, Prop::IsProfessorAt) {
                if !aff.validity.overlaps(&study) {
                    continue;
                }
                let Some(body) = aff.object.as_iri() else { continue };
                let when = overlap_start(aff.validity.start(), study.start()).unwrap_or(at);
                let home = institution_at(store, body, when)?;
                for g in &granting {
                    if *g != home {
                        let pair = if *g < home { (g.clone(), home.clone()) } else { (home.clone(), g.clone()) };
                        pairs.insert(pair);
                    }
                }
            }
        }
        Ok(pairs)
    })?;
    let mut counts: BTreeMap<(Iri, Iri), usize> = BTreeMap::new();
    for pairs in per_work {
        for p in pairs {
            *counts.entry(p).or_insert(0) += 1;
        }
    }
    let mut out: Vec<Cooperation> = counts
        .into_iter()
        .map(|((first, second), shared_works)| Cooperation {
            first,
            second,
            shared_works,
        })
        .collect();
    out.sort_by(|a, b| {
        b.shared_works
            .cmp(&a.shared_works)
            .then_with(|| (&a.first, &a.second).cmp(&(&b.first, &b.second)))
    });
    Ok(out)
}

fn overlap_start(a: Option<TimePoint>, b: Option<TimePoint>) -> Option<TimePoint> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if a.first_day() >= b.first_day() { a } else { b }),
        (a, b) => a.or(b),
    }
}
