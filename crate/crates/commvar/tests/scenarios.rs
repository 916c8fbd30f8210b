use commvar::homalg::scenario::{bundled_names, load, parse, solve, solve_bundled};
use commvar::homalg::GradedGroup;
use commvar::Error;

fn table(name: &str) -> Vec<String> {
    solve_bundled(name).unwrap().table
}

#[test]
fn bundled_tables() {
    assert_eq!(table("commuting_pairs"), ["Z", "0", "Z", "Z^2", "Z/2"]);
    assert_eq!(table("atiyah_A"), ["Z", "0", "Z", "Z^4", "Z", "0", "Z"]);
    assert_eq!(table("atiyah_bar_A"), ["Z", "0", "0", "0", "Z/4", "0", "0", "Z"]);
    assert_eq!(table("nine_manifold_check_M"), ["Z", "0", "Z", "0", "Z/4", "0", "Z/4", "Z", "0", "Z"]);
    assert_eq!(table("nine_manifold_M"), ["Z", "0", "Z", "Z^4", "Z/4", "(Z/2)^4", "Z^4+Z/4", "Z", "0", "Z"]);
    assert_eq!(table("line_bundle_E"), ["Z", "0", "0", "Z^4", "Z^4+Z/4", "0", "0", "Z"]);
}

#[test]
fn every_bundled_scenario_passes_its_checks() {
    for n in bundled_names() {
        let r = solve_bundled(n).unwrap();
        assert!(r.passed(), "{n}: {:?}", r.checks);
    }
}

fn trimmed(mut v: Vec<usize>) -> Vec<usize> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

#[test]
fn f2_dimensions_follow_from_integral_tables() {
    // atiyah_A solves for the collapsed space; its four 3-spheres are wedged on afterwards.
    assert_eq!(solve_bundled("atiyah_A").unwrap().f2.unwrap().dims, [1, 0, 1, 0, 1, 0, 1]);
    for (name, dims) in [
        ("commuting_pairs", vec![1, 0, 1, 3, 1]),
        ("atiyah_bar_A", vec![1, 0, 0, 1, 1, 0, 0, 1]),
        ("nine_manifold_check_M", vec![1, 0, 1, 1, 1, 1, 1, 1, 0, 1]),
    ] {
        let r = solve_bundled(name).unwrap();
        assert_eq!(trimmed(r.f2.unwrap().dims), dims, "{name}");
        assert_eq!(trimmed(r.solved.unwrap().f2_dims()), dims, "{name}");
    }
}

#[test]
fn editing_the_expected_table_fails_the_match() {
    let mut sc = load("atiyah_A").unwrap();
    sc.expected = Some(GradedGroup::new(vec![vec![0], vec![], vec![0], vec![0, 0, 0], vec![0], vec![], vec![0]]));
    let r = solve(&sc).unwrap();
    assert_eq!(r.checks.expected_match, Some(false));
    assert!(!r.passed());
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse("{\n  \"name\": \"x\",\n  oops\n}").unwrap_err();
    match err {
        Error::Malformed(m) => assert!(m.starts_with("line 3"), "{m}"),
        e => panic!("unexpected {e:?}"),
    }
}

#[test]
fn missing_scenario_is_reported() {
    assert!(matches!(load("/definitely/not/here.json"), Err(Error::Malformed(_))));
}

#[test]
fn scenario_files_load_by_path() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/atiyah_A.json");
    assert_eq!(solve(&load(path).unwrap()).unwrap().table, table("atiyah_A"));
}
