//! CSV loading, normalization, dedup and the bundled data files.

use std::path::PathBuf;

use meancut::{dedup, load_csv, minmax_normalize, parse_csv, Dataset, TruthColumn};
use proptest::prelude::*;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn to_csv(d: &Dataset) -> String {
    let mut s = String::new();
    for (i, row) in d.rows().enumerate() {
        let mut cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        if let Some(t) = d.truth() {
            cells.push(t[i].to_string());
        }
        s += &cells.join(",");
        s.push('\n');
    }
    s
}

#[test]
fn bundled_sets_have_expected_shape() {
    for (file, n, dim, k) in [("iris.csv", 150, 4, 3), ("wine.csv", 178, 13, 3), ("breast_cancer.csv", 683, 9, 2)] {
        let d = load_csv(data(file), Some(TruthColumn::Last)).unwrap();
        assert_eq!((d.n(), d.dim()), (n, dim), "{file}");
        let mut t = d.truth().unwrap().to_vec();
        t.sort_unstable();
        t.dedup();
        assert_eq!(t, (0..k).collect::<Vec<i64>>(), "{file}");
    }
}

#[test]
fn missing_file_names_the_path() {
    let err = load_csv("/nonexistent/x.csv", None).unwrap_err().to_string();
    assert!(err.contains("/nonexistent/x.csv"), "{err}");
}

#[test]
fn string_classes_with_header() {
    let d = parse_csv(
        "sepal,petal,species\n1.5,2,setosa\n3,4e0,virginica\n5,6,setosa\n".as_bytes(),
        Some(TruthColumn::Last),
    )
    .unwrap();
    assert_eq!(d.points(), &[1.5, 2.0, 3.0, 4.0, 5.0, 6.0]);
    assert_eq!(d.truth(), Some(&[0, 1, 0][..]));
}

#[test]
fn dedup_keeps_first_and_maps_back() {
    let d = Dataset::from_rows(&[vec![1.0, 2.0], vec![0.0, -0.0], vec![1.0, 2.0], vec![-0.0, 0.0]], None).unwrap();
    let (u, map) = dedup(&d);
    assert_eq!(u.n(), 2);
    assert_eq!(map.kept, vec![0, 1]);
    assert_eq!(map.owner, vec![0, 1, 0, 1]);
    assert_eq!(map.broadcast(&[7, 9]).unwrap(), vec![7, 9, 7, 9]);
}

fn dataset(max_n: usize) -> impl Strategy<Value = Dataset> {
    (1..=max_n, 1usize..5).prop_flat_map(|(n, dim)| {
        (prop::collection::vec(-1e6..1e6f64, n * dim), prop::collection::vec(0i64..6, n))
            .prop_map(move |(p, t)| Dataset::new(p, dim, Some(t)).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn csv_round_trip_is_exact(d in dataset(40)) {
        let back = parse_csv(to_csv(&d).as_bytes(), Some(TruthColumn::Last)).unwrap();
        prop_assert_eq!(back.points(), d.points());
        prop_assert_eq!(back.dim(), d.dim());
        // truth ids are densified by first appearance; the partition is unchanged
        let (a, b) = (d.truth().unwrap(), back.truth().unwrap());
        for i in 0..d.n() {
            for j in 0..d.n() {
                prop_assert_eq!(a[i] == a[j], b[i] == b[j]);
            }
        }
    }

    #[test]
    fn normalized_columns_span_unit_interval(d in dataset(40)) {
        let z = minmax_normalize(&d);
        for c in 0..d.dim() {
            let col: Vec<f64> = z.rows().map(|r| r[c]).collect();
            prop_assert!(col.iter().all(|v| (0.0..=1.0).contains(v)));
            let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let constant = d.rows().all(|r| r[c] == d.row(0)[c]);
            if constant {
                prop_assert_eq!(hi, 0.0);
            } else {
                prop_assert_eq!(lo, 0.0);
                prop_assert_eq!(hi, 1.0);
            }
        }
        prop_assert_eq!(z.truth(), d.truth());
    }

    #[test]
    fn dedup_rows_are_distinct_and_cover_input(d in dataset(30), dup in prop::collection::vec(0usize..30, 0..10)) {
        let mut pts = d.points().to_vec();
        for &i in &dup {
            let i = i % d.n();
            pts.extend_from_slice(d.row(i));
        }
        let big = Dataset::new(pts, d.dim(), None).unwrap();
        let (u, map) = dedup(&big);
        for i in 0..u.n() {
            for j in i + 1..u.n() {
                prop_assert_ne!(u.row(i), u.row(j));
            }
        }
        for i in 0..big.n() {
            prop_assert_eq!(big.row(i), u.row(map.slot[i]));
        }
    }
}
