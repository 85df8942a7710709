mod common;

use common::*;
use hyperassoc::io::{
    read_metrics, read_triple_list, read_triples, write_metrics, write_triple_list, write_triples,
    MetricsRow, METRICS_HEADER,
};
use hyperassoc::{AssocArray, Error, Semiring, TripleList};
use proptest::prelude::*;

fn key() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9 ,.#é漢-]{1,10}"
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn array_round_trips(
        s in proptest::sample::select(Semiring::ALL.to_vec()),
        triples in proptest::collection::vec((key(), key(), 0.0f64..1e9), 0..50),
    ) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.tsv");
        let t: TripleList = triples.iter().map(|(r, c, v)| (r.as_str(), c.as_str(), *v)).collect();
        let a = AssocArray::construct(&t, s).unwrap();
        write_triples(&a, &path).unwrap();
        prop_assert_eq!(read_triples(&path, s).unwrap(), a.clone());

        write_triple_list(&t, &path).unwrap();
        prop_assert_eq!(read_triple_list(&path).unwrap(), t);
        prop_assert_eq!(read_triples(&path, s).unwrap(), a);
    }
}

#[test]
fn duplicates_collapse_with_plus() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.tsv");
    std::fs::write(&path, "a\tb\t2\na\tb\t3\nb\ta\t-1.5\n").unwrap();
    let a = read_triples(&path, Semiring::PlusTimes).unwrap();
    assert_eq!(a.get("a", "b"), Some(5.0));
    assert_eq!(a.get("b", "a"), Some(-1.5));
    let m = read_triples(&path, Semiring::MaxPlus).unwrap();
    assert_eq!(m.get("a", "b"), Some(3.0));
}

#[test]
fn output_is_sorted_tsv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.tsv");
    let a = AssocArray::from_triples(
        [("b", "x", 1.0), ("a", "y", 0.5), ("a", "x", -2.0)],
        Semiring::PlusTimes,
    )
    .unwrap();
    write_triples(&a, &path).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "a\tx\t-2\na\ty\t0.5\nb\tx\t1\n"
    );
}

#[test]
fn malformed_lines_report_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tsv");
    std::fs::write(&path, "a\tb\t1\na\tb\n").unwrap();
    match read_triples(&path, Semiring::PlusTimes) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected parse error, got {other:?}"),
    }
    std::fs::write(&path, "a\tb\tx\n").unwrap();
    assert!(matches!(
        read_triple_list(&path),
        Err(Error::Parse { line: 1, .. })
    ));
    std::fs::write(&path, "a\tb\tNaN\n").unwrap();
    assert!(read_triple_list(&path).is_err());
    std::fs::write(&path, "a\tb\t-1\n").unwrap();
    assert!(read_triples(&path, Semiring::MaxTimes).is_err());
}

#[test]
fn keys_with_tabs_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.tsv");
    let a = AssocArray::from_triples([("a\tb", "c", 1.0)], Semiring::PlusTimes).unwrap();
    assert!(matches!(write_triples(&a, &path), Err(Error::Format(_))));
    assert!(!path.exists());
}

#[test]
fn missing_file_is_an_io_error() {
    let r = read_triples("/nonexistent/dir/x.tsv", Semiring::PlusTimes);
    assert!(matches!(r, Err(Error::Io { .. })));
}

#[test]
fn metrics_round_trip_with_comment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let rows = vec![
        MetricsRow {
            batch_index: 0,
            batch_nnz: 100,
            cumulative_edges: 100,
            batch_seconds: 0.25,
            inst_rate: 400.0,
            cum_rate: 400.0,
            layer_nnz: vec![0, 100],
            cascades: vec![1, 0],
        },
        MetricsRow {
            batch_index: 1,
            batch_nnz: 100,
            cumulative_edges: 200,
            batch_seconds: 0.5,
            inst_rate: 200.0,
            cum_rate: 200.0 / 0.75,
            layer_nnz: vec![0, 180],
            cascades: vec![2, 0],
        },
    ];
    write_metrics(&rows, &path, Some("scale=4 seed=1")).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# scale=4 seed=1"));
    assert_eq!(lines.next(), Some(METRICS_HEADER));
    assert_eq!(read_metrics(&path).unwrap(), rows);
}

#[test]
fn random_arrays_survive_files() {
    use rand::{rngs::StdRng, SeedableRng};
    let dir = tempfile::tempdir().unwrap();
    let mut rng = StdRng::seed_from_u64(3);
    for (i, s) in Semiring::ALL.into_iter().enumerate() {
        let a = random_array(&mut rng, s, 12, 80);
        let path = dir.path().join(format!("{i}.tsv"));
        write_triples(&a, &path).unwrap();
        assert_eq!(dense_of(&read_triples(&path, s).unwrap()), dense_of(&a));
    }
}
