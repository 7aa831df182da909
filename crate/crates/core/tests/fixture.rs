//! Worked examples over the bundled academic network.

mod support;

use std::collections::BTreeSet;

use etd_core::ingest::{parse_records, Record, RecordKind};
use etd_core::query::{
    eval_query, format_ratio, gender_tally, institution_cooperation, interdisciplinary_works, mobility_by_gender,
    parse_query, supervision_gender_matrix, supervisor_gender_rate, GenderKey, TallyRole, WorkFilter,
};
use etd_core::reason::{
    ancestors_at, derive_mobility, institution_at, members_at, structure_timeline, successor_chain, ReasonError,
    Role, RoleFilter, StructureEventKind,
};
use etd_core::{EntityKind, Execution, Iri, Term};
use num_rational::Ratio;
use support::*;

const EXECS: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn set(items: &[&str]) -> BTreeSet<Iri> {
    items.iter().map(|s| e(s)).collect()
}

#[test]
fn census() {
    let store = fixture();
    let count = |k| store.entities_of_kind(k).len();
    assert_eq!(count(EntityKind::CorporateBody), 5);
    assert_eq!(count(EntityKind::Person), 4);
    assert_eq!(count(EntityKind::Work), 3);
    assert_eq!(count(EntityKind::Gender), 2);
}

#[test]
fn fixture_parses_as_twelve_records() {
    let records = parse_records(etd_core::FIXTURE).unwrap();
    assert_eq!(records.len(), 12);
    let kinds: Vec<RecordKind> = records.iter().map(|r| r.kind).collect();
    assert_eq!(kinds.iter().filter(|k| **k == RecordKind::Body).count(), 5);
}

#[test]
fn ancestors_of_faculty_b() {
    let store = fixture();
    assert_eq!(ancestors_at(&store, &e("body/facB"), year(1998)).unwrap(), vec![e("body/schoolA"), e("body/ux")]);
    assert!(ancestors_at(&store, &e("body/ux"), year(1998)).unwrap().is_empty());
    // before the school existed as a subdivision
    assert!(ancestors_at(&store, &e("body/facB"), year(1960)).unwrap().is_empty());
    assert_eq!(institution_at(&store, &e("body/facB"), year(1998)).unwrap(), e("body/ux"));
    assert_eq!(institution_at(&store, &e("body/uy"), year(1998)).unwrap(), e("body/uy"));
}

#[test]
fn ancestors_of_a_person_is_an_error() {
    let store = fixture();
    assert_eq!(
        ancestors_at(&store, &e("person/pA"), year(1998)),
        Err(ReasonError::NotABody(e("person/pA")))
    );
}

#[test]
fn members_of_university_x() {
    let store = fixture();
    let any: BTreeSet<Iri> = members_at(&store, &e("body/ux"), year(1998), RoleFilter::Any, true, false)
        .unwrap()
        .into_iter()
        .collect();
    assert_eq!(any, set(&["person/pA", "person/pB", "person/pC"]));
    let prof = members_at(&store, &e("body/facE"), year(1998), RoleFilter::Professor, false, false).unwrap();
    assert_eq!(prof, vec![e("person/pB")]);
    let direct = members_at(&store, &e("body/ux"), year(1998), RoleFilter::Any, false, false).unwrap();
    assert!(direct.is_empty());
}

#[test]
fn mobility_of_person_a_and_c() {
    let store = fixture();
    let a = derive_mobility(&store, &e("person/pA")).unwrap();
    assert_eq!(a.len(), 1);
    assert_eq!(a[0].from_institution, e("body/ux"));
    assert_eq!(a[0].to_institution, e("body/uy"));
    assert_eq!((a[0].from_role, a[0].to_role), (Role::Student, Role::Professor));
    assert_eq!(a[0].gap_years, 6);

    let c = derive_mobility(&store, &e("person/pC")).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].arrival.year_value(), a[0].arrival.year_value() + 1);
    assert_eq!(c[0].gap_years, 1);

    assert!(derive_mobility(&store, &e("person/pB")).unwrap().is_empty());
}

#[test]
fn structure_timeline_of_university_x() {
    let store = fixture();
    let events = structure_timeline(&store, &e("body/ux")).unwrap();
    assert!(events
        .iter()
        .any(|ev| ev.body == e("body/facB") && ev.kind == StructureEventKind::Established && ev.when == year(1963)));
    assert!(events
        .iter()
        .any(|ev| ev.body == e("body/ux") && ev.kind == StructureEventKind::Established && ev.when == year(1925)));
    let whens: Vec<_> = events.iter().map(|ev| ev.when).collect();
    let mut sorted = whens.clone();
    sorted.sort();
    assert_eq!(whens, sorted);
}

fn split_records() -> Vec<Record> {
    vec![
        Record::new("u", RecordKind::Body)
            .with("name", "U")
            .with("body-kind", "university"),
        Record::new("deptOld", RecordKind::Body)
            .with("name", "Old")
            .with("body-kind", "other")
            .with("established", "1970")
            .with("subdivision-of", "u@1970..2000")
            .with("changed-to", "deptNew@2001")
            .with("changed-to", "deptOther@2001"),
        Record::new("deptNew", RecordKind::Body)
            .with("name", "New")
            .with("body-kind", "other")
            .with("established", "2001")
            .with("subdivision-of", "u@2001.."),
        Record::new("deptOther", RecordKind::Body)
            .with("name", "Other")
            .with("body-kind", "other")
            .with("established", "2001")
            .with("subdivision-of", "u@2001.."),
    ]
}

#[test]
fn split_shows_change_before_establishment() {
    let mut records = split_records();
    records[1] = Record::new("deptOld", RecordKind::Body)
        .with("name", "Old")
        .with("body-kind", "other")
        .with("established", "1970")
        .with("subdivision-of", "u@1970..2000")
        .with("changed-to", "deptNew@2001");
    let store = ingest(&records);
    let events = structure_timeline(&store, &e("body/u")).unwrap();
    let at_2001: Vec<_> = events.iter().filter(|ev| ev.when.year_value() == 2001).collect();
    let changed = at_2001.iter().position(|ev| ev.kind == StructureEventKind::ChangedTo).unwrap();
    let established = at_2001
        .iter()
        .position(|ev| ev.kind == StructureEventKind::Established)
        .unwrap();
    assert!(changed < established);
    assert_eq!(at_2001[changed].counterpart, Some(e("body/deptNew")));
}

#[test]
fn changing_into_two_bodies_is_ambiguous() {
    let store = ingest(&split_records());
    assert!(matches!(
        successor_chain(&store, &e("body/deptOld")),
        Err(ReasonError::AmbiguousSuccession { .. })
    ));
}

#[test]
fn successor_chains() {
    let mut records = split_records();
    records[1] = Record::new("deptOld", RecordKind::Body)
        .with("name", "Old")
        .with("body-kind", "other")
        .with("changed-to", "deptNew@2001");
    let store = ingest(&records);
    assert_eq!(successor_chain(&store, &e("body/deptOld")).unwrap(), vec![e("body/deptOld"), e("body/deptNew")]);
    assert_eq!(successor_chain(&store, &e("body/u")).unwrap(), vec![e("body/u")]);

    records[2] = records[2].clone().with("changed-to", "deptOld@2005");
    let store = ingest(&records);
    assert!(matches!(
        successor_chain(&store, &e("body/deptOld")),
        Err(ReasonError::SequenceCycle(_))
    ));
}

#[test]
fn advisors_of_university_x_in_1998() {
    let store = fixture();
    let tally = gender_tally(&store, &e("body/ux"), TallyRole::Advisor, year(1998), true).unwrap();
    assert_eq!(tally.counts.get(&e("gender/female")), Some(&2));
    assert_eq!(tally.counts.len(), 1);
    assert_eq!(tally.unspecified, 0);
    assert_eq!(tally.total(), 2);
}

#[test]
fn phd_supervision_rate() {
    let store = fixture();
    for exec in EXECS {
        let rates = supervisor_gender_rate(&store, &years(1990, 2010), WorkFilter::Phd, exec);
        let half = Ratio::new(1, 2);
        assert_eq!(rates.by_gender[&e("gender/female")].share, half);
        assert_eq!(rates.by_gender[&e("gender/male")].share, half);
        assert_eq!(format_ratio(&rates.by_gender[&e("gender/male")].share), "0.5000");
        assert_eq!(rates.total(), 2);
    }
}

#[test]
fn supervision_matrix() {
    let store = fixture();
    for exec in EXECS {
        let m = supervision_gender_matrix(&store, &years(1990, 2005), WorkFilter::Any, exec);
        let female = GenderKey::Specified(e("gender/female"));
        let male = GenderKey::Specified(e("gender/male"));
        assert_eq!(m[&female][&male], 2);
        let total: usize = m.values().flat_map(|row| row.values()).sum();
        assert_eq!(total, 2);
    }
}

#[test]
fn fixture_has_no_interdisciplinary_work() {
    let store = fixture();
    for exec in EXECS {
        assert!(interdisciplinary_works(&store, &years(1900, 2100), exec).unwrap().is_empty());
    }
}

#[test]
fn grantors_in_different_branches_are_interdisciplinary() {
    let mut records = parse_records(etd_core::FIXTURE).unwrap();
    let phd1 = records.iter_mut().find(|r| r.local_id == "phd1").unwrap();
    *phd1 = phd1.clone().with("grantor", "facE");
    // a second faculty under the same school as facB
    records.push(
        Record::new("facG", RecordKind::Body)
            .with("name", "Faculty G")
            .with("body-kind", "faculty")
            .with("subdivision-of", "schoolA@1980.."),
    );
    let mas1 = records.iter_mut().find(|r| r.local_id == "mas1").unwrap();
    *mas1 = Record::new("mas1", RecordKind::Work)
        .with("title", "T")
        .with("work-kind", "master")
        .with("dissertant", "pA")
        .with("study", "1995..1998")
        .with("grantor", "facB")
        .with("grantor", "facG");
    let store = ingest(&records);
    for exec in EXECS {
        assert_eq!(interdisciplinary_works(&store, &years(1990, 2010), exec).unwrap(), vec![e("work/phd1")]);
    }
}

#[test]
fn mobility_by_gender_in_the_2000s() {
    let store = fixture();
    for exec in EXECS {
        let report = mobility_by_gender(&store, &years(2000, 2010), exec).unwrap();
        let male = &report.by_gender[&GenderKey::Specified(e("gender/male"))];
        assert_eq!((male.moves, male.total_gap_years), (1, 6));
        let female = &report.by_gender[&GenderKey::Specified(e("gender/female"))];
        assert_eq!(female.moves, 1);
        assert_eq!(report.events.len(), 2);
    }
}

#[test]
fn cooperation() {
    let store = fixture();
    assert!(institution_cooperation(&store, &years(1900, 2100), Execution::Sequential)
        .unwrap()
        .is_empty());

    let mut records = parse_records(etd_core::FIXTURE).unwrap();
    records.push(
        Record::new("phd2", RecordKind::Work)
            .with("title", "T")
            .with("work-kind", "phd")
            .with("dissertant", "pD")
            .with("study", "2001..2004")
            .with("advisor", "pB")
            .with("grantor", "uy"),
    );
    let store = ingest(&records);
    for exec in EXECS {
        let co = institution_cooperation(&store, &years(1900, 2100), exec).unwrap();
        assert_eq!(co.len(), 1);
        let pair: BTreeSet<Iri> = [co[0].first.clone(), co[0].second.clone()].into();
        assert_eq!(pair, set(&["body/ux", "body/uy"]));
        assert_eq!(co[0].shared_works, 1);
    }
}

fn run(store: &etd_core::Store, q: &str) -> Vec<Vec<Term>> {
    eval_query(store, &parse_query(q).unwrap(), &base()).unwrap().rows
}

#[test]
fn advised_by_person_c() {
    let store = fixture();
    let rows = run(&store, "SELECT ?w WHERE { ?w etd:advisedBy person/pC . }");
    assert_eq!(rows, vec![vec![Term::Iri(e("work/phd1"))]]);
}

#[test]
fn professors_at_university_y_in_2009() {
    let store = fixture();
    let rows = run(&store, "SELECT ?p WHERE { ?p etd:isProfessorAt body/uy @ 2009 . }");
    let got: BTreeSet<Term> = rows.into_iter().map(|mut r| r.remove(0)).collect();
    let want: BTreeSet<Term> = [Term::Iri(e("person/pA")), Term::Iri(e("person/pC"))].into();
    assert_eq!(got, want);
}

#[test]
fn joins_and_inverses() {
    let store = fixture();
    let rows = run(
        &store,
        "SELECT ?s ?w WHERE { ?s etd:isStudentOf body/facB @[1997..1999] . ?w etd:createdBy ?s . }",
    );
    assert!(rows.contains(&vec![Term::Iri(e("person/pA")), Term::Iri(e("work/phd1"))]));
    assert!(rows.contains(&vec![Term::Iri(e("person/pA")), Term::Iri(e("work/mas1"))]));
    let inverse = run(&store, "SELECT ?w WHERE { person/pC etd:advised ?w . }");
    assert_eq!(inverse, vec![vec![Term::Iri(e("work/phd1"))]]);
}

#[test]
fn fixture_queries_match_the_oracle() {
    let store = fixture();
    for q in [
        "SELECT ?w WHERE { ?w etd:advisedBy person/pC . }",
        "SELECT ?p ?b WHERE { ?p etd:isStudentOf ?b @ 1997 . }",
        "SELECT ?x WHERE { body/ux etd:hasSubdivision ?x @[1960..1965] . }",
        "SELECT ?p WHERE { ?p etd:hasGender gender/female . ?w etd:advisedBy ?p . }",
    ] {
        let ast = parse_query(q).unwrap();
        let got = eval_query(&store, &ast, &base()).unwrap().rows;
        assert_eq!(got, oracle_query(&store, &ast), "{q}");
    }
}

#[test]
fn snapshot_matches_the_oracle() {
    let store = fixture();
    for y in [1960, 1990, 1998, 2006, 2010] {
        let mut got = store.snapshot_at(year(y));
        got.sort();
        assert_eq!(got, oracle_snapshot(&store, &year(y)), "{y}");
    }
}
