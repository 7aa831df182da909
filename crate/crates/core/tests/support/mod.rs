//! Independent oracles and shared setup for integration tests.
//!
//! The oracles deliberately avoid the library's own day arithmetic and
//! indexes: dates go through `chrono::NaiveDate` directly, intervals
//! become explicit day sets, and joins are nested scans.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{Datelike, NaiveDate};
use rand::seq::IndexedRandom;
use rand::Rng;

use etd_core::ingest::{records_to_graph, IngestOptions, Record};
use etd_core::query::{QueryAst, QueryTerm, TimeSpec};
use etd_core::synthetic::{random_interval, random_point, WINDOW};
use etd_core::{Iri, Namespaces, Store, TemporalTriple, Term, TimeInterval, TimePoint, Validity};

pub const BASE: &str = "http://example.org/etd";

pub fn base() -> Iri {
    Iri::parse(BASE).unwrap()
}

pub fn options() -> IngestOptions {
    IngestOptions::new(base(), base()).with_batch_date(TimePoint::ymd(2024, 1, 15).unwrap())
}

pub fn fixture() -> Store {
    etd_core::ingest::ingest_text(etd_core::FIXTURE, &options()).unwrap().0
}

pub fn ingest(records: &[Record]) -> Store {
    records_to_graph(records, &options()).unwrap().0
}

pub fn ns(store: &Store) -> Namespaces {
    Namespaces::new(base(), store.vocab())
}

/// `kind/localId` under the test base.
pub fn e(rel: &str) -> Iri {
    base().join(rel).unwrap()
}

pub fn year(y: i32) -> TimePoint {
    TimePoint::year(y).unwrap()
}

pub fn years(a: i32, b: i32) -> TimeInterval {
    TimeInterval::years(a, b).unwrap()
}

// ---- day arithmetic -------------------------------------------------------

/// Universe of days the oracles reason over: the generator window with a
/// margin of a few years on each side. Unbounded interval ends clamp here.
pub fn universe() -> (i64, i64) {
    (day_of(WINDOW.0 - 5, 1, 1), day_of(WINDOW.1 + 5, 12, 31))
}

fn day_of(y: i32, m: u32, d: u32) -> i64 {
    i64::from(NaiveDate::from_ymd_opt(y, m, d).unwrap().num_days_from_ce())
}

fn month_end(y: i32, m: u32) -> u32 {
    let next = if m == 12 {
        NaiveDate::from_ymd_opt(y + 1, 1, 1)
    } else {
        NaiveDate::from_ymd_opt(y, m + 1, 1)
    };
    next.unwrap().pred_opt().unwrap().day()
}

/// First and last day covered by a time point.
pub fn point_days(t: &TimePoint) -> (i64, i64) {
    let y = t.year_value();
    match (t.month_value(), t.day_value()) {
        (None, _) => (day_of(y, 1, 1), day_of(y, 12, 31)),
        (Some(m), None) => (day_of(y, m, 1), day_of(y, m, month_end(y, m))),
        (Some(m), Some(d)) => (day_of(y, m, d), day_of(y, m, d)),
    }
}

/// A set of days as sorted, disjoint, non-adjacent inclusive ranges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Days(Vec<(i64, i64)>);

impl Days {
    pub fn range(first: i64, last: i64) -> Self {
        if first > last {
            Days(Vec::new())
        } else {
            Days(vec![(first, last)])
        }
    }

    pub fn union(&self, other: &Days) -> Days {
        let mut all: Vec<(i64, i64)> = self.0.iter().chain(&other.0).copied().collect();
        all.sort();
        let mut out: Vec<(i64, i64)> = Vec::new();
        for (a, b) in all {
            match out.last_mut() {
                Some(last) if a <= last.1 + 1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Days(out)
    }

    pub fn is_subset(&self, other: &Days) -> bool {
        self.0
            .iter()
            .all(|&(a, b)| other.0.iter().any(|&(c, d)| c <= a && b <= d))
    }

    pub fn is_disjoint(&self, other: &Days) -> bool {
        self.0
            .iter()
            .all(|&(a, b)| other.0.iter().all(|&(c, d)| b < c || d < a))
    }

    pub fn is_contiguous(&self) -> bool {
        self.0.len() == 1
    }

    pub fn ranges(&self) -> &[(i64, i64)] {
        &self.0
    }
}

/// Every day in the interval, clamped to the universe.
pub fn interval_days(iv: &TimeInterval) -> Days {
    let (lo, hi) = universe();
    let first = iv.start().map_or(lo, |s| point_days(&s).0);
    let last = iv.end().map_or(hi, |e| point_days(&e).1);
    Days::range(first, last)
}

pub fn validity_days(v: &Validity) -> Days {
    match v {
        Validity::Always => interval_days(&TimeInterval::unbounded()),
        Validity::During(iv) => interval_days(iv),
    }
}

pub fn days_of_point(t: &TimePoint) -> Days {
    let (a, b) = point_days(t);
    Days::range(a, b)
}

pub fn oracle_contains(iv: &TimeInterval, t: &TimePoint) -> bool {
    days_of_point(t).is_subset(&interval_days(iv))
}

pub fn oracle_overlaps(a: &TimeInterval, b: &TimeInterval) -> bool {
    !interval_days(a).is_disjoint(&interval_days(b))
}

/// Day set of the merge, if the union of both day sets is contiguous.
pub fn oracle_merge(a: &TimeInterval, b: &TimeInterval) -> Option<Days> {
    let union = interval_days(a).union(&interval_days(b));
    union.is_contiguous().then_some(union)
}

// ---- snapshot ---------------------------------------------------------------

pub fn oracle_snapshot(store: &Store, t: &TimePoint) -> Vec<TemporalTriple> {
    let want = days_of_point(t);
    let mut out: Vec<TemporalTriple> = store
        .triples()
        .into_iter()
        .filter(|x| want.is_subset(&validity_days(&x.validity)))
        .collect();
    out.sort();
    out
}

// ---- closure ----------------------------------------------------------------

/// Ancestors of `node` at `t` by exhaustive search over subdivision
/// edges (either direction) valid at `t`, with their minimum hop distance.
pub fn oracle_ancestors(store: &Store, node: &Iri, t: &TimePoint) -> BTreeMap<Iri, usize> {
    let has_sub = store.vocab().iri(etd_core::Prop::HasSubdivision).clone();
    let sub_of = store.vocab().iri(etd_core::Prop::IsSubdivisionOf).clone();
    let want = days_of_point(t);
    let mut parents: HashMap<Iri, Vec<Iri>> = HashMap::new();
    for x in store.triples() {
        if !want.is_subset(&validity_days(&x.validity)) {
            continue;
        }
        let other = x.object.as_iri().cloned();
        if x.property == has_sub {
            parents.entry(other.unwrap()).or_default().push(x.subject.clone());
        } else if x.property == sub_of {
            parents.entry(x.subject.clone()).or_default().push(other.unwrap());
        }
    }
    let mut dist: BTreeMap<Iri, usize> = BTreeMap::new();
    let mut frontier = vec![node.clone()];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for n in frontier {
            for p in parents.get(&n).into_iter().flatten() {
                if p != node && !dist.contains_key(p) {
                    dist.insert(p.clone(), d);
                    next.push(p.clone());
                }
            }
        }
        frontier = next;
    }
    dist
}

// ---- queries ----------------------------------------------------------------

/// Stored statements plus every inverse-flipped statement.
pub fn statements_with_inverses(store: &Store) -> Vec<TemporalTriple> {
    let stored = store.triples();
    let set: BTreeSet<TemporalTriple> = stored.iter().cloned().collect();
    let mut out = stored.clone();
    for t in &stored {
        let Some(def) = store.vocab().get(&t.property) else { continue };
        let (Some(inv), Some(obj)) = (&def.inverse, t.object.as_iri()) else { continue };
        let flipped = TemporalTriple::new(
            obj.clone(),
            inv.clone(),
            Term::Iri(t.subject.clone()),
            t.validity,
            t.provenance.clone(),
        );
        if !set.contains(&flipped) {
            out.push(flipped);
        }
    }
    out
}

fn fixed_term(store: &Store, term: &QueryTerm) -> Option<Term> {
    match term {
        QueryTerm::Var(_) => None,
        QueryTerm::Iri(i) => Some(Term::Iri(i.clone())),
        QueryTerm::Literal(l) => Some(Term::Literal(l.clone())),
        QueryTerm::Curie { local, .. } => Some(Term::Iri(store.vocab().term(local))),
        QueryTerm::Relative(rel) => Some(Term::Iri(base().join(rel).unwrap())),
    }
}

fn time_ok(spec: &Option<TimeSpec>, v: &Validity) -> bool {
    match spec {
        None => true,
        Some(TimeSpec::At(t)) => days_of_point(t).is_subset(&validity_days(v)),
        Some(TimeSpec::Span(iv)) => !interval_days(iv).is_disjoint(&validity_days(v)),
    }
}

/// Nested-scan conjunctive join; distinct projected rows, sorted.
pub fn oracle_query(store: &Store, ast: &QueryAst) -> Vec<Vec<Term>> {
    let universe = statements_with_inverses(store);
    let mut bindings: Vec<BTreeMap<String, Term>> = vec![BTreeMap::new()];
    for clause in &ast.clauses {
        let mut next = Vec::new();
        for b in &bindings {
            'cand: for t in &universe {
                if !time_ok(&clause.time, &t.validity) {
                    continue;
                }
                let values = [Term::Iri(t.subject.clone()), Term::Iri(t.property.clone()), t.object.clone()];
                let mut nb = b.clone();
                for (term, value) in [&clause.subject, &clause.property, &clause.object].into_iter().zip(values) {
                    match term {
                        QueryTerm::Var(v) => match nb.get(v) {
                            Some(existing) if *existing != value => continue 'cand,
                            Some(_) => {}
                            None => {
                                nb.insert(v.clone(), value);
                            }
                        },
                        fixed => {
                            if fixed_term(store, fixed).as_ref() != Some(&value) {
                                continue 'cand;
                            }
                        }
                    }
                }
                next.push(nb);
            }
        }
        bindings = next;
    }
    let rows: BTreeSet<Vec<Term>> = bindings
        .into_iter()
        .map(|b| ast.select.iter().map(|v| b[v].clone()).collect())
        .collect();
    rows.into_iter().collect()
}

fn plain_relative(rel: &str) -> bool {
    rel.split_once('/').is_some_and(|(kind, id)| {
        !kind.is_empty()
            && kind.chars().all(|c| c.is_ascii_lowercase())
            && !id.is_empty()
            && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    })
}

const VARS: [&str; 4] = ["a", "b", "c", "d"];

fn as_query_term(rng: &mut impl Rng, store: &Store, term: &Term) -> QueryTerm {
    match term {
        Term::Literal(l) => QueryTerm::Literal(l.clone()),
        Term::Iri(iri) => {
            let text = iri.as_str();
            let vocab_ns = store.vocab().namespace().as_str();
            if let Some(local) = text.strip_prefix(vocab_ns).filter(|_| rng.random_bool(0.5)) {
                return QueryTerm::Curie {
                    prefix: "etd".into(),
                    local: local.into(),
                };
            }
            let rel = text.strip_prefix(&format!("{BASE}/"));
            match rel {
                Some(rel) if rng.random_bool(0.5) && plain_relative(rel) => QueryTerm::Relative(rel.into()),
                _ => QueryTerm::Iri(iri.clone()),
            }
        }
    }
}

/// A random query of one to three clauses, each seeded from an existing
/// (possibly flipped) statement so that answers are usually non-empty.
/// Every clause keeps at least one constant to bound the join.
pub fn random_query(rng: &mut impl Rng, store: &Store) -> QueryAst {
    let universe = statements_with_inverses(store);
    let n = rng.random_range(1..=3);
    let mut clauses = Vec::new();
    let mut used = BTreeSet::new();
    for _ in 0..n {
        let t = universe.choose(rng).unwrap();
        let values = [Term::Iri(t.subject.clone()), Term::Iri(t.property.clone()), t.object.clone()];
        let keep = rng.random_range(0..3);
        let mut terms: Vec<QueryTerm> = Vec::new();
        for (i, v) in values.iter().enumerate() {
            if i != keep && rng.random_bool(0.6) {
                let var = *VARS.choose(rng).unwrap();
                used.insert(var.to_string());
                terms.push(QueryTerm::Var(var.into()));
            } else {
                terms.push(as_query_term(rng, store, v));
            }
        }
        let time = match rng.random_range(0..4) {
            0 => Some(TimeSpec::At(random_point(rng, WINDOW))),
            1 => Some(TimeSpec::Span(random_interval(rng, WINDOW))),
            _ => None,
        };
        let object = terms.pop().unwrap();
        let property = terms.pop().unwrap();
        let subject = terms.pop().unwrap();
        clauses.push(etd_core::query::Clause {
            subject,
            property,
            object,
            time,
        });
    }
    if used.is_empty() {
        // make the first clause's subject a variable
        clauses[0].subject = QueryTerm::Var("a".into());
        used.insert("a".into());
    }
    let mut select: Vec<String> = used.into_iter().collect();
    let k = rng.random_range(1..=select.len());
    select.truncate(k);
    QueryAst { select, clauses }
}
