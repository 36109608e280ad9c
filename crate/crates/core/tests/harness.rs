use slcoset::harness::{
    cmd_census, cmd_corollary, cmd_dump, cmd_verify, Body, RunConfig, Selector,
};
use slcoset::qseries::QPoly;
use slcoset::Rat;

#[test]
fn verify_reports_are_deterministic() {
    let mut cfg = RunConfig::with_ranks(vec![(2, 6), (3, 4)]);
    cfg.jobs = Some(2);
    let a = cmd_verify(&cfg).unwrap().to_json().unwrap();
    cfg.jobs = Some(1);
    let b = cmd_verify(&cfg).unwrap().to_json().unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"schema_version\": 1"));
    assert!(!a.contains("elapsed"));
}

#[test]
fn failure_count_matches_verdicts() {
    let report = cmd_verify(&RunConfig::with_ranks(vec![(2, 8)])).unwrap();
    let Body::Verify { cells } = &report.body else {
        panic!("wrong body")
    };
    let non_equal = cells.iter().filter(|c| !c.verdict.is_equal()).count();
    assert_eq!(report.summary.identity_failures, non_equal);
    assert_eq!(
        report.summary.failures,
        cells.iter().filter(|c| !c.passed()).count()
    );
    assert_eq!(report.summary.cells, cells.len());
    assert!(report.is_success());
}

#[test]
fn single_class_filter() {
    let mut cfg = RunConfig::with_ranks(vec![(4, 6)]);
    cfg.j = Some(0);
    cfg.k = Some(0);
    let report = cmd_verify(&cfg).unwrap();
    let Body::Verify { cells } = &report.body else {
        panic!("wrong body")
    };
    assert_eq!(cells.len(), 7);
    assert!(cells.iter().all(|c| (c.i, c.j, c.k) == (0, 0, 0)));
    assert!(report.is_success());
}

#[test]
fn census_shows_the_sector_term() {
    let mut cfg = RunConfig::with_ranks(vec![(4, 6)]);
    cfg.k = Some(0);
    let report = cmd_census(&cfg).unwrap();
    assert!(report.is_success());
    let Body::Census { censuses } = &report.body else {
        panic!("wrong body")
    };
    let at6 = censuses.iter().find(|c| c.length == 6).unwrap();
    assert_eq!(at6.sector_total, at6.path_count);
    let row = at6.sectors.iter().find(|s| s.m == [0, 1, 2]).unwrap();
    let r = Rat::from_integer;
    let expected = QPoly::from_terms([(r(6), 1i64), (r(7), 1), (r(8), 1)]);
    assert_eq!(row.observed, expected);
    assert_eq!(row.count, 3);
}

#[test]
fn empty_class_gives_empty_census() {
    let mut cfg = RunConfig::with_ranks(vec![(3, 0)]);
    cfg.k = Some(1);
    let report = cmd_census(&cfg).unwrap();
    let Body::Census { censuses } = &report.body else {
        panic!("wrong body")
    };
    assert_eq!(censuses.len(), 1);
    assert_eq!(censuses[0].path_count, 0);
    assert!(censuses[0].sectors.is_empty());
    assert!(report.is_success());
}

#[test]
fn corollary_report_passes() {
    let mut cfg = RunConfig::with_ranks(vec![(2, 0)]);
    cfg.order = Some(Rat::from_integer(6));
    let report = cmd_corollary(&cfg).unwrap();
    assert_eq!(report.summary.cells, 4);
    assert!(report.is_success());
}

#[test]
fn dumps() {
    let text = cmd_dump(4, 6, (0, 0, 0), &Selector::Iota(vec![0, 0, 1, 1, 2, 3, 2])).unwrap();
    assert!(text.contains("column heights: (8,5,5,2,2,2)"));
    assert!(text.contains("parent: (0,1,2)"));

    let parent = cmd_dump(4, 6, (0, 0, 0), &Selector::Parent(vec![0, 1, 2])).unwrap();
    assert_eq!(parent.matches("|h=").count(), 3);
    assert!(parent.contains("|h=2") && parent.contains("|h=3"));

    let ground = cmd_dump(3, 5, (0, 0, 0), &Selector::Ground).unwrap();
    assert!(ground.ends_with("(empty)\n"));

    let all = cmd_dump(3, 4, (0, 0, 0), &Selector::All).unwrap();
    assert_eq!(all.matches("## graph").count(), 3);

    assert!(cmd_dump(4, 5, (0, 0, 0), &Selector::Iota(vec![0, 0, 1, 1, 2, 3, 2])).is_err());
}
