//! Seeded random graphs for property tests, oracles and benchmarks.

use std::sync::Arc;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::ingest::{Record, RecordKind};
use crate::model::{Iri, Literal, Provenance, TemporalTriple, Term, TimeInterval, TimePoint, Validity};
use crate::names::DEFAULT_BASE;
use crate::store::Store;
use crate::vocab::{EntityKind, Prop, Temporality, Vocabulary};

/// Year window random dates are drawn from, inclusive.
pub const WINDOW: (i32, i32) = (1960, 2009);

pub fn random_point(rng: &mut impl Rng, window: (i32, i32)) -> TimePoint {
    let year = rng.random_range(window.0..=window.1);
    match rng.random_range(0..6) {
        0 => TimePoint::new(year, Some(rng.random_range(1..=12)), None),
        1 => {
            let month = rng.random_range(1..=12);
            TimePoint::ymd(year, month, rng.random_range(1..=28))
        }
        _ => TimePoint::year(year),
    }
    .expect("generated date is valid")
}

/// Closed, half-open or (rarely) unbounded interval inside `window`.
pub fn random_interval(rng: &mut impl Rng, window: (i32, i32)) -> TimeInterval {
    loop {
        let a = random_point(rng, window);
        let b = random_point(rng, window);
        let (a, b) = if a.first_day() <= b.first_day() { (a, b) } else { (b, a) };
        let (start, end) = match rng.random_range(0..10) {
            0 => (None, Some(b)),
            1 => (Some(a), None),
            2 => (Some(a), Some(a)),
            3 if rng.random_bool(0.3) => (None, None),
            _ => (Some(a), Some(b)),
        };
        if let Ok(iv) = TimeInterval::new(start, end) {
            return iv;
        }
    }
}

fn year_span(rng: &mut impl Rng, from: i32, to: i32, max_len: i32) -> (i32, i32) {
    let a = rng.random_range(from..=to);
    let b = (a + rng.random_range(0..=max_len)).min(to);
    (a, b)
}

/// A consistent batch of person, body and work records: an acyclic
/// subdivision forest, optional successions, memberships, and works with
/// advisors, committees and grantors. `size` scales every population.
pub fn random_records(rng: &mut impl Rng, size: usize) -> Vec<Record> {
    let size = size.max(1);
    let (lo, hi) = WINDOW;
    let n_bodies = 2 + size;
    let n_persons = 2 + 2 * size;
    let n_works = 1 + 2 * size;
    let mut records = Vec::new();

    let bodies: Vec<String> = (0..n_bodies).map(|i| format!("b{i}")).collect();
    let universities = 1 + n_bodies / 4;
    let mut successor_taken = vec![false; n_bodies];
    for (i, id) in bodies.iter().enumerate() {
        let kind = if i < universities {
            "university"
        } else {
            ["school", "faculty", "other"].choose(rng).copied().unwrap()
        };
        let est = rng.random_range(lo - 40..=hi - 20);
        let mut r = Record::new(id, RecordKind::Body)
            .with("name", &format!("Body {i}"))
            .with("body-kind", kind)
            .with("established", &est.to_string());
        if i >= universities {
            let parent = rng.random_range(0..i);
            let (a, b) = year_span(rng, lo, hi, 40);
            let span = if rng.random_bool(0.5) { format!("{a}..") } else { format!("{a}..{b}") };
            r = r.with("subdivision-of", &format!("{}@{span}", bodies[parent]));
            if rng.random_bool(0.15) {
                let other = rng.random_range(0..i);
                let (a, b) = year_span(rng, lo, hi, 20);
                r = r.with("subdivision-of", &format!("{}@{a}..{b}", bodies[other]));
            }
        }
        if i + 1 < n_bodies && !successor_taken[i] && rng.random_bool(0.1) {
            let next = rng.random_range(i + 1..n_bodies);
            successor_taken[i] = true;
            let when = rng.random_range(lo..=hi);
            r = r.with("changed-to", &format!("{}@{when}", bodies[next]));
        }
        if rng.random_bool(0.2) {
            let (a, _) = year_span(rng, lo, hi, 0);
            r = r.with("name", &format!("Renamed body {i}@{a}.."));
        }
        records.push(r);
    }

    let genders = ["female", "male", "nonbinary"];
    let persons: Vec<String> = (0..n_persons).map(|i| format!("p{i}")).collect();
    for (i, id) in persons.iter().enumerate() {
        let mut r = Record::new(id, RecordKind::Person).with("name", &format!("Person {i}"));
        match rng.random_range(0..10) {
            0 => {}
            1 => {
                let change = rng.random_range(lo + 1..=hi);
                let g1 = genders.choose(rng).unwrap();
                let g2 = genders.choose(rng).unwrap();
                r = r
                    .with("gender", &format!("{g1}@..{}", change - 1))
                    .with("gender", &format!("{g2}@{change}.."));
            }
            _ => r = r.with("gender", genders[..2].choose(rng).unwrap()),
        }
        for _ in 0..rng.random_range(0..=2) {
            let body = bodies.choose(rng).unwrap();
            let (a, b) = year_span(rng, lo, hi, 8);
            r = r.with("student-of", &format!("{body}@{a}..{b}"));
        }
        for _ in 0..rng.random_range(0..=2) {
            let body = bodies.choose(rng).unwrap();
            let (a, b) = year_span(rng, lo, hi, 25);
            let span = if rng.random_bool(0.3) { format!("{a}..") } else { format!("{a}..{b}") };
            r = r.with("professor-at", &format!("{body}@{span}"));
        }
        if rng.random_bool(0.2) {
            r = r.with("birth-place", &format!("town{}", rng.random_range(0..3)));
        }
        records.push(r);
    }

    for i in 0..n_works {
        let (a, b) = year_span(rng, lo, hi, 6);
        let mut r = Record::new(&format!("w{i}"), RecordKind::Work)
            .with("title", &format!("Work {i}"))
            .with("work-kind", if rng.random_bool(0.5) { "master" } else { "phd" })
            .with("dissertant", persons.choose(rng).unwrap())
            .with("study", &format!("{a}..{b}"));
        let n = rng.random_range(0..=2);
        for p in persons.choose_multiple(rng, n) {
            r = r.with("advisor", p);
        }
        let n = rng.random_range(0..=3);
        for p in persons.choose_multiple(rng, n) {
            r = r.with("committee", p);
        }
        let n = rng.random_range(1..=2);
        for g in bodies.choose_multiple(rng, n) {
            r = r.with("grantor", g);
        }
        if rng.random_bool(0.1) {
            r = r.with("same-as", &format!("http://viaf.org/viaf/{}", rng.random_range(1000..9999)));
        }
        records.push(r);
    }
    records.shuffle(rng);
    records
}

const ODD_LABELS: &[&str] = &[
    "plain",
    "with \"quotes\"",
    "back\\slash",
    "line\nbreak",
    "tab\there",
    "carriage\rreturn",
    "Πανεπιστήμιο Κρήτης",
    "bell \u{7}",
    "",
];

/// Up to `max_triples` statements drawn directly against the vocabulary,
/// with awkward literals, several provenances and every temporality.
/// Hierarchies may contain cycles; use [`random_records`] for data the
/// reasoner must accept.
pub fn random_store(rng: &mut impl Rng, max_triples: usize) -> Store {
    let vocab = Arc::new(Vocabulary::default());
    let base = Iri::parse(DEFAULT_BASE).expect("valid base");
    let mut store = Store::new(vocab.clone());
    let pool = |kind: EntityKind, n: usize| -> Vec<Iri> {
        (0..n)
            .map(|i| {
                let seg = kind.segment().unwrap_or("external");
                base.join(&format!("{seg}/{}{i}", &seg[..1])).expect("valid IRI")
            })
            .collect()
    };
    let persons = pool(EntityKind::Person, 5);
    let bodies = pool(EntityKind::CorporateBody, 5);
    let works = pool(EntityKind::Work, 4);
    let genders = pool(EntityKind::Gender, 2);
    let places = pool(EntityKind::Place, 2);
    let external: Vec<Iri> = (0..2)
        .map(|i| Iri::parse(&format!("http://viaf.org/viaf/{i}")).unwrap())
        .collect();
    let authorities = [base.clone(), Iri::parse("https://library.example.edu/").unwrap()];
    let provenance = |rng: &mut dyn rand::RngCore| {
        let source = ["r1", "r2", "rec 3"][rng.random_range(0..3)];
        let authority = authorities[rng.random_range(0..2)].clone();
        let asserted = match rng.random_range(0..3) {
            0 => None,
            1 => Some(TimePoint::year(2020).unwrap()),
            _ => Some(TimePoint::ymd(2021, 3, 14).unwrap()),
        };
        Provenance::new(source, authority, asserted).expect("non-empty source")
    };

    let kinds: [(EntityKind, &Vec<Iri>); 6] = [
        (EntityKind::Person, &persons),
        (EntityKind::CorporateBody, &bodies),
        (EntityKind::Work, &works),
        (EntityKind::Gender, &genders),
        (EntityKind::Place, &places),
        (EntityKind::ExternalResource, &external),
    ];
    let kind_prop = vocab.iri(Prop::Kind).clone();
    for (kind, iris) in kinds {
        for iri in iris {
            if store.len() >= max_triples {
                return store;
            }
            let p = provenance(rng);
            store
                .insert(TemporalTriple::new(iri.clone(), kind_prop.clone(), vocab.kind_class(kind), Validity::Always, p))
                .expect("kind triple is valid");
        }
    }
    let of_kind = |k: EntityKind| -> &Vec<Iri> {
        kinds.iter().find(|(kind, _)| *kind == k).map(|(_, v)| *v).unwrap()
    };

    let mut attempts = 0;
    while store.len() < max_triples && attempts < max_triples * 20 {
        attempts += 1;
        let prop = *Prop::ALL[1..].choose(rng).unwrap();
        let def = vocab.def(prop).clone();
        let subject = match def.domain {
            crate::vocab::Domain::Kind(k) => of_kind(k).choose(rng).unwrap().clone(),
            crate::vocab::Domain::Any => {
                let (_, iris) = kinds[rng.random_range(0..3)];
                iris.choose(rng).unwrap().clone()
            }
        };
        let object: Term = match def.range {
            crate::vocab::Range::Entity(k) => Term::Iri(of_kind(k).choose(rng).unwrap().clone()),
            crate::vocab::Range::Literal(crate::model::Datatype::Year) => {
                Term::Literal(Literal::year(rng.random_range(1900..2000)).unwrap())
            }
            crate::vocab::Range::Literal(_) => {
                let text = ODD_LABELS.choose(rng).unwrap();
                let lang = [None, None, Some("en"), Some("el-gr")].choose(rng).copied().flatten();
                Term::Literal(Literal::new(text, crate::model::Datatype::String, lang).unwrap())
            }
            crate::vocab::Range::Class => match prop {
                Prop::BodyKind => Term::Iri(
                    vocab.body_class(*crate::vocab::CorporateBodySubkind::ALL.choose(rng).unwrap()),
                ),
                _ => Term::Iri(vocab.work_class(*crate::vocab::WorkSubkind::ALL.choose(rng).unwrap())),
            },
        };
        let validity = match def.temporality {
            Temporality::Atemporal => Validity::Always,
            Temporality::Instant => Validity::during(TimeInterval::instant(random_point(rng, WINDOW))),
            Temporality::Interval => loop {
                let v = Validity::during(random_interval(rng, WINDOW));
                if v != Validity::Always {
                    break v;
                }
            },
            Temporality::Optional => {
                if rng.random_bool(0.3) {
                    Validity::Always
                } else {
                    Validity::during(random_interval(rng, WINDOW))
                }
            }
        };
        let p = provenance(rng);
        let _ = store.insert(TemporalTriple::new(subject, def.id.clone(), object, validity, p));
    }
    store
}

/// A layered subdivision DAG over `n` bodies: each body gets up to three
/// parents among the bodies before it, each edge with a random interval.
/// Returns the store and the bodies in creation order.
pub fn random_hierarchy(rng: &mut impl Rng, n: usize) -> (Store, Vec<Iri>) {
    let vocab = Arc::new(Vocabulary::default());
    let base = Iri::parse(DEFAULT_BASE).expect("valid base");
    let mut store = Store::new(vocab.clone());
    let provenance = Provenance::new("dag", base.clone(), None).expect("non-empty source");
    let nodes: Vec<Iri> = (0..n).map(|i| base.join(&format!("body/n{i}")).unwrap()).collect();
    for node in &nodes {
        store
            .insert(TemporalTriple::new(
                node.clone(),
                vocab.iri(Prop::Kind).clone(),
                vocab.kind_class(EntityKind::CorporateBody),
                Validity::Always,
                provenance.clone(),
            ))
            .unwrap();
    }
    for j in 1..n {
        for _ in 0..rng.random_range(0..=3) {
            let i = rng.random_range(0..j);
            let iv = loop {
                let iv = random_interval(rng, WINDOW);
                if !iv.is_unbounded() {
                    break iv;
                }
            };
            store
                .insert(TemporalTriple::new(
                    nodes[i].clone(),
                    vocab.iri(Prop::HasSubdivision).clone(),
                    nodes[j].clone(),
                    Validity::during(iv),
                    provenance.clone(),
                ))
                .unwrap();
        }
    }
    (store, nodes)
}
