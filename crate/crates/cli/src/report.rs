//! Tab-separated renderings of the analytics, one header line per table.

use std::fmt::Write as _;

use num_rational::Ratio;

use etd_core::query::{
    format_ratio, Cooperation, GenderKey, GenderMatrix, GenderTally, MobilityReport, SupervisorRates,
};
use etd_core::reason::StructureEvent;
use etd_core::{Iri, Namespaces};

fn gender(ns: &Namespaces, key: &GenderKey) -> String {
    match key {
        GenderKey::Specified(g) => ns.compact(g),
        GenderKey::Unspecified => "unspecified".into(),
    }
}

fn signed_ratio(r: &Ratio<i64>) -> String {
    let magnitude = Ratio::new(r.numer().unsigned_abs(), r.denom().unsigned_abs());
    let sign = if *r < Ratio::from_integer(0) { "-" } else { "" };
    format!("{sign}{}", format_ratio(&magnitude))
}

pub fn tally(ns: &Namespaces, t: &GenderTally) -> String {
    let mut out = String::from("gender\tcount\n");
    for (g, n) in &t.counts {
        let _ = writeln!(out, "{}\t{n}", ns.compact(g));
    }
    if t.unspecified > 0 {
        let _ = writeln!(out, "unspecified\t{}", t.unspecified);
    }
    let _ = writeln!(out, "total\t{}", t.total());
    out
}

pub fn rates(ns: &Namespaces, r: &SupervisorRates) -> String {
    let mut out = String::from("gender\tsupervisions\tshare\n");
    for (g, entry) in &r.by_gender {
        let _ = writeln!(out, "{}\t{}\t{}", ns.compact(g), entry.supervisions, format_ratio(&entry.share));
    }
    if r.unspecified > 0 {
        let _ = writeln!(out, "unspecified\t{}\t", r.unspecified);
    }
    out
}

pub fn matrix(ns: &Namespaces, m: &GenderMatrix) -> String {
    let mut out = String::from("advisor\tdissertant\tcount\n");
    for (advisor, row) in m {
        for (dissertant, n) in row {
            let _ = writeln!(out, "{}\t{}\t{n}", gender(ns, advisor), gender(ns, dissertant));
        }
    }
    out
}

pub fn works(ns: &Namespaces, works: &[Iri]) -> String {
    let mut out = format!("count\t{}\n", works.len());
    for w in works {
        let _ = writeln!(out, "work\t{}", ns.compact(w));
    }
    out
}

pub fn mobility(ns: &Namespaces, report: &MobilityReport) -> String {
    let mut out = String::from("person\tfrom\tto\tfrom_role\tto_role\tdeparture\tarrival\tgap_years\n");
    for e in &report.events {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            ns.compact(&e.person),
            ns.compact(&e.from_institution),
            ns.compact(&e.to_institution),
            e.from_role,
            e.to_role,
            e.departure,
            e.arrival,
            e.gap_years
        );
    }
    out.push_str("\ngender\tmoves\tmean_gap_years\n");
    for (g, stats) in &report.by_gender {
        let _ = writeln!(out, "{}\t{}\t{}", gender(ns, g), stats.moves, signed_ratio(&stats.average_gap()));
    }
    if !report.concurrent.is_empty() {
        out.push_str("\nperson\tconcurrent_at\tand_at\n");
        for c in &report.concurrent {
            let _ = writeln!(out, "{}\t{}\t{}", ns.compact(&c.person), ns.compact(&c.first), ns.compact(&c.second));
        }
    }
    out
}

pub fn cooperation(ns: &Namespaces, pairs: &[Cooperation]) -> String {
    let mut out = String::from("first\tsecond\tshared_works\n");
    for c in pairs {
        let _ = writeln!(out, "{}\t{}\t{}", ns.compact(&c.first), ns.compact(&c.second), c.shared_works);
    }
    out
}

pub fn structure(ns: &Namespaces, events: &[StructureEvent]) -> String {
    let mut out = String::from("when\tevent\tbody\tcounterpart\n");
    for e in events {
        let counterpart = e.counterpart.as_ref().map(|c| ns.compact(c)).unwrap_or_default();
        let _ = writeln!(out, "{}\t{}\t{}\t{counterpart}", e.when, e.kind, ns.compact(&e.body));
    }
    out
}
