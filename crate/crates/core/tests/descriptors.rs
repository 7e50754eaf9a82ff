use std::path::PathBuf;

use proptest::prelude::*;
use symsum::descriptor::{load_manifold, load_sum};
use symsum::exceptional::{enumerate_exceptional, is_exceptional_cremona};
use symsum::geography::{enumerate_region, realizable};
use symsum::sum::{decide_minimality, MinimalityVerdict};
use symsum::ManifoldModel;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../descriptors")
}

#[test]
fn every_shipped_descriptor_loads() {
    let mut manifolds = 0;
    let mut sums = 0;
    for entry in std::fs::read_dir(dir()).unwrap() {
        let p = entry.unwrap().path();
        let name = p.file_name().unwrap().to_str().unwrap().to_string();
        if name.ends_with(".sum.toml") {
            load_sum(&p).unwrap_or_else(|e| panic!("{name}: {e}"));
            sums += 1;
        } else if name.ends_with(".toml") {
            let d = load_manifold(&p).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(!d.surfaces.is_empty(), "{name}");
            manifolds += 1;
        }
    }
    assert!(manifolds >= 7 && sums >= 5);
}

#[test]
fn shipped_sums_decide_as_labelled() {
    let v = |f: &str| decide_minimality(&load_sum(&dir().join(f)).unwrap(), 6).unwrap().verdict;
    assert_eq!(v("e1_e1.sum.toml"), MinimalityVerdict::MinimalCaseIII);
    assert_eq!(v("p1_p1.sum.toml"), MinimalityVerdict::MinimalCaseIII);
    assert!(matches!(v("blown_e1.sum.toml"), MinimalityVerdict::NotMinimalCaseI { .. }));
    assert_eq!(v("ruled_e1.sum.toml").minimal(), Some(false));
    assert_eq!(v("ruled_unknown.sum.toml").minimal(), None);
}

proptest! {
    #[test]
    fn cremona_verdict_ignores_order_of_exceptional_coefficients(
        d in -4i64..=4,
        mut e in prop::collection::vec(-3i64..=3, 5),
        rot in 0usize..5,
    ) {
        let m = ManifoldModel::rational(5).unwrap();
        let mut x = vec![d];
        x.extend(e.iter().copied());
        let a = is_exceptional_cremona(&m, &m.class(x).unwrap()).unwrap();
        e.rotate_left(rot);
        let mut y = vec![d];
        y.extend(e);
        let b = is_exceptional_cremona(&m, &m.class(y).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn enumerated_classes_pass_cremona(n in 1usize..=7) {
        let m = ManifoldModel::rational(n).unwrap();
        let set = enumerate_exceptional(&m, 6).unwrap();
        for c in set.classes() {
            prop_assert!(is_exceptional_cremona(&m, &c).unwrap(), "{}", c);
        }
    }

    #[test]
    fn region_points_are_realizable(lo in -10i64..30, w in 0i64..40, r in 0i64..4) {
        for (a, b) in enumerate_region(lo..=lo + w, lo..=lo + w, r) {
            prop_assert!(realizable(a, b, r));
            prop_assert!(lo <= a && a <= lo + w && lo <= b && b <= lo + w);
        }
    }
}
