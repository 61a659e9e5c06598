mod common;

use std::fs;

use paradigm_shift::ingest::{
    link_records, read_cache, read_export, write_cache, LinkStatus, ParseIssue,
};
use paradigm_shift::{build_corpus, parse_cited_ref, Error, Source, YearRange};

use common::*;

#[test]
fn citation_index_fixture() {
    let parsed = read_export(&fixture("index_three.txt"), Source::CitationIndex).unwrap();
    assert!(parsed.report.is_empty(), "{:?}", parsed.report);
    let ids: Vec<&str> = parsed.records.iter().map(|r| r.record_id.as_str()).collect();
    assert_eq!(ids, ["WOS:A1970G581400001", "WOS:A1969E448800021", "WOS:A1970H123400007"]);
    let sizes: Vec<usize> = parsed.records.iter().map(|r| r.cited_refs.len()).collect();
    assert_eq!(sizes, [2, 0, 5]);
    assert_eq!(
        parsed.records[2].title,
        "CHARACTERIZATION OF THE PRODUCTS OF RNA-DIRECTED DNA POLYMERASES IN ONCOGENIC RNA VIRUSES"
    );
    assert_eq!(parsed.records[1].pub_year, Some(1969));
    assert!(parsed.records[2]
        .cited_refs
        .contains(&parse_cited_ref("BALTIMORE D, 1970, NATURE, V226, P1209")));
}

#[test]
fn medline_fixture() {
    let parsed = read_export(&fixture("medline_two.txt"), Source::Medline).unwrap();
    assert!(parsed.report.is_empty());
    let got: Vec<(&str, &str, Option<i32>)> = parsed
        .records
        .iter()
        .map(|r| (r.record_id.as_str(), r.title.as_str(), r.pub_year))
        .collect();
    assert_eq!(
        got,
        [
            (
                "4316300",
                "Viral RNA-dependent DNA polymerase: RNA-dependent DNA polymerase in virions of RNA tumour viruses.",
                Some(1970)
            ),
            ("4316301", "RNA-dependent DNA polymerase in virions of Rous sarcoma virus.", Some(1970)),
        ]
    );
    assert!(parsed.records.iter().all(|r| r.cited_refs.is_empty()));
}

#[test]
fn parsing_is_deterministic() {
    let a = read_export(&fixture("index_three.txt"), Source::CitationIndex).unwrap();
    let b = read_export(&fixture("index_three.txt"), Source::CitationIndex).unwrap();
    assert_eq!(a, b);
}

#[test]
fn missing_file_names_the_path() {
    let err = read_export(&fixture("no_such_export.txt"), Source::Medline).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert!(err.to_string().contains("no_such_export.txt"), "{err}");
}

#[test]
fn truncated_record_is_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cut.txt");
    fs::write(&path, "FN x\nVR 1.0\nPT J\nTI A TITLE\nPY 1970\n").unwrap();
    let err = read_export(&path, Source::CitationIndex).unwrap_err();
    assert!(matches!(err, Error::MalformedRecord { line: 3, .. }), "{err}");
}

#[test]
fn missing_fields_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    fs::write(&path, "PMID- 1\nTI  - No date here\n\nPMID- 1\nDP  - 1970\nTI  - Again\n").unwrap();
    let parsed = read_export(&path, Source::Medline).unwrap();
    assert_eq!(parsed.records.len(), 1);
    assert_eq!(parsed.records[0].pub_year, None);
    assert!(parsed.report.issues.iter().any(|i| matches!(i, ParseIssue::MissingField { field, .. } if *field == "DP")));
    assert!(parsed.report.issues.iter().any(|i| matches!(i, ParseIssue::DuplicateId { .. })));
}

#[test]
fn linkage_fixture() {
    let m = read_export(&fixture("linkage_medline.txt"), Source::Medline).unwrap();
    let i = read_export(&fixture("linkage_index.txt"), Source::CitationIndex).unwrap();
    let l = link_records(&m.records, &i.records);
    assert_eq!((l.matched(), l.ambiguous(), l.unmatched()), (3, 0, 1));
    assert_eq!(l.coverage(), Some(0.75));
    assert_eq!(l.status("101"), Some(&LinkStatus::Matched("WOS:L2".into())));
    assert_eq!(l.status("103"), Some(&LinkStatus::Unmatched));
}

#[test]
fn corpus_partitions_the_fixtures() {
    let mut records = read_export(&fixture("index_three.txt"), Source::CitationIndex).unwrap().records;
    records.extend(read_export(&fixture("medline_two.txt"), Source::Medline).unwrap().records);
    let (corpus, report) = build_corpus(records.clone(), None).unwrap();
    assert_eq!(corpus.year_range(), YearRange::new(1969, 1970).unwrap());
    assert_eq!(corpus.slice(1969).unwrap().len(), 1);
    let y1970 = corpus.slice(1970).unwrap();
    assert_eq!((y1970.count_source(Source::CitationIndex), y1970.count_source(Source::Medline)), (2, 2));
    assert_eq!((report.input, report.kept), (5, 5));

    let (narrow, report) = build_corpus(records, Some(YearRange::new(1970, 1970).unwrap())).unwrap();
    assert_eq!(narrow.len(), 4);
    assert_eq!(report.out_of_range, 1);
}

#[test]
fn cache_round_trip_of_fixtures() {
    let mut records = read_export(&fixture("index_three.txt"), Source::CitationIndex).unwrap().records;
    records.extend(read_export(&fixture("medline_two.txt"), Source::Medline).unwrap().records);
    let mut bytes = Vec::new();
    write_cache(&records, &mut bytes).unwrap();
    let back = read_cache(&bytes[..]).unwrap();
    assert_eq!(back, records);
    let mut again = Vec::new();
    write_cache(&back, &mut again).unwrap();
    assert_eq!(again, bytes);
}
