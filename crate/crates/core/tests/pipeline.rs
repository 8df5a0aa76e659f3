use std::collections::BTreeSet;

use num_traits::Zero;

use gscone::artifacts::{
    counterexample_valuation, figure9_constraints_check, paper_certificate, verify_group_bounds,
    verify_paper, verify_paper_with, GroupPartition, PaperConfig,
};
use gscone::matroid::{enumerate_matroids, Matroid, MatroidCatalog};
use gscone::rational::{int, Rational};
use gscone::SubsetMask;

#[test]
fn full_pipeline_passes_and_is_deterministic() {
    let first = verify_paper();
    assert_eq!(first.len(), 11);
    for r in &first {
        assert!(r.passed, "claim {}: {}", r.id, r.witness);
    }
    assert_eq!(
        first.iter().map(|r| r.id).collect::<Vec<_>>(),
        (1..=11).collect::<Vec<_>>()
    );
    assert_eq!(verify_paper(), first);
}

#[test]
fn corrupted_counterexample_is_caught() {
    let mut v = counterexample_valuation();
    v.set_value(SubsetMask::from_items([1, 2, 3]), int(-3))
        .unwrap();
    let config = PaperConfig {
        valuation: v,
        claims: Some(BTreeSet::from([1, 5])),
        ..PaperConfig::default()
    };
    let reports = verify_paper_with(&config);
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().any(|r| !r.passed));
    assert!(!reports[0].passed);
}

#[test]
fn restricted_counts() {
    let config = PaperConfig {
        claims: Some(BTreeSet::from([7])),
        max_matroid_n: 3,
        ..PaperConfig::default()
    };
    let reports = verify_paper_with(&config);
    assert!(reports[0].passed);
    assert!(reports[0].witness.contains("n=3: 16 labelled"));
    assert!(!reports[0].witness.contains("n=4"));
}

#[test]
fn group_products_sum_to_inner_product() {
    let y = paper_certificate();
    let part = GroupPartition::paper();
    for m in enumerate_matroids(5).unwrap().entries {
        let r = m.normalized_rank();
        let total: Rational = part.group_products(&y, &r).into_iter().sum();
        assert_eq!(total, y.inner_product(&r).unwrap());
    }
}

#[test]
fn all_loops_gives_zero_products() {
    let r = Matroid::all_loops(5).normalized_rank();
    let products = GroupPartition::paper().group_products(&paper_certificate(), &r);
    assert!(products.iter().all(Zero::is_zero));
    let single = MatroidCatalog {
        n: 5,
        entries: vec![Matroid::all_loops(5)],
        iso_class: vec![0],
        canonical_forms: vec![Matroid::all_loops(5)],
    };
    assert!(verify_group_bounds(&paper_certificate(), &GroupPartition::paper(), &single).passed);
}

#[test]
fn flipped_certificate_entry_fails_bounds() {
    let mut y = paper_certificate();
    y.set_value(SubsetMask::from_items([3, 4]), int(1)).unwrap();
    let catalog = enumerate_matroids(5).unwrap();
    let report = verify_group_bounds(&y, &GroupPartition::paper(), &catalog);
    assert!(!report.passed, "{}", report.witness);
}

#[test]
fn label_chain() {
    let r = figure9_constraints_check();
    assert!(r.passed, "{}", r.witness);
    assert!(r.witness.contains("m4-m5 = 2"));
}
