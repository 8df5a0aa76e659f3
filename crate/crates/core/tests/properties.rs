use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use gscone::artifacts::counterexample_valuation;
use gscone::cone::{
    is_strong_quotient, sample_gs, weighted_rank_decompose, weighted_rank_valuation,
};
use gscone::io::{parse_valuation, valuation_to_json, valuation_to_text};
use gscone::lp::{solve_nonnegative, Feasibility};
use gscone::matroid::{enumerate_matroids, is_matroid_rank_valuation, Matroid, WeightedMatroid};
use gscone::rational::{frac, int, Rational};
use gscone::subset::{all_subsets, pairs_outside};
use gscone::substitutes::{
    check_gs, check_local_global, check_submodular, demand, greedy, is_gs_triangle_form,
};
use gscone::tree::{
    check_label_consistency, concordant, concordant_sum, delta_tensor, reconstruct,
    reconstruct_in_order,
};
use gscone::{AffineTransform, PriceVector, SubsetMask, Valuation};

fn rational() -> impl Strategy<Value = Rational> {
    (-8i64..=8, 1i64..=3).prop_map(|(p, q)| frac(p, q))
}

fn valuation(max_n: usize) -> impl Strategy<Value = Valuation> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(rational(), 1 << n)
            .prop_map(move |vals| Valuation::from_values(n, vals).unwrap())
    })
}

fn prices(n: usize) -> impl Strategy<Value = PriceVector> {
    proptest::collection::vec(rational(), n).prop_map(PriceVector)
}

/// A GS valuation drawn from the case cones.
fn gs_valuation() -> impl Strategy<Value = Valuation> {
    (2usize..=4, any::<u64>()).prop_map(|(n, seed)| sample_gs(n, seed, 1).unwrap().remove(0))
}

fn gs_with_prices() -> impl Strategy<Value = (Valuation, PriceVector)> {
    gs_valuation().prop_flat_map(|v| {
        let n = v.n();
        (Just(v), prices(n))
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

fn violation_keys(v: &Valuation) -> BTreeSet<(SubsetMask, usize, usize, Option<usize>)> {
    check_gs(v)
        .violations
        .iter()
        .map(|x| (x.set, x.i, x.j, x.k))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn second_derivative_symmetric(v in valuation(4)) {
        let n = v.n();
        for s in all_subsets(n) {
            for (i, j) in pairs_outside(n, s) {
                prop_assert_eq!(v.d2(i, j, s).unwrap(), v.d2(j, i, s).unwrap());
            }
        }
    }

    #[test]
    fn normalize_is_an_affine_split(v in valuation(4)) {
        let (w, t) = v.normalize();
        prop_assert!(w.is_normalized());
        prop_assert_eq!(w.apply_affine(&t).unwrap(), v.clone());
        let (w2, t2) = w.normalize();
        prop_assert_eq!(w2, w);
        prop_assert!(t2.is_identity());
    }

    #[test]
    fn gs_check_is_affine_invariant(v in valuation(4), c in rational(), seed in any::<u64>()) {
        let n = v.n();
        let p: Vec<Rational> = (0..n).map(|i| frac(((seed >> (4 * i)) & 15) as i64 - 7, 2)).collect();
        let t = AffineTransform { prices: PriceVector(p), constant: c };
        let shifted = v.apply_affine(&t).unwrap();
        prop_assert_eq!(check_gs(&shifted), check_gs(&v));
        prop_assert_eq!(check_submodular(&shifted), check_submodular(&v));
    }

    #[test]
    fn gs_phrasings_agree(v in valuation(4)) {
        prop_assert_eq!(check_gs(&v).is_gs(), is_gs_triangle_form(&v));
    }

    #[test]
    fn gs_phrasings_agree_on_gs_inputs(v in gs_valuation()) {
        prop_assert!(check_gs(&v).is_gs());
        prop_assert!(is_gs_triangle_form(&v));
        prop_assert!(check_submodular(&v));
    }

    #[test]
    fn gs_implies_submodular(v in valuation(3)) {
        if check_gs(&v).is_gs() {
            prop_assert!(check_submodular(&v));
        }
    }

    #[test]
    fn relabeling_permutes_violations(
        (v, perm) in valuation(4).prop_flat_map(|v| { let n = v.n(); (Just(v), permutation(n)) })
    ) {
        let moved = v.permute(&perm);
        let expected: BTreeSet<_> = check_gs(&v)
            .violations
            .iter()
            .map(|x| {
                let set = x.set.permute(&perm);
                let mut ids = vec![perm[x.i - 1], perm[x.j - 1]];
                if let Some(k) = x.k {
                    ids.push(perm[k - 1]);
                }
                (set, ids.len(), ids.into_iter().collect::<BTreeSet<_>>())
            })
            .collect();
        let found: BTreeSet<_> = violation_keys(&moved)
            .into_iter()
            .map(|(set, i, j, k)| {
                let ids: Vec<usize> = [Some(i), Some(j), k].into_iter().flatten().collect();
                (set, ids.len(), ids.into_iter().collect::<BTreeSet<_>>())
            })
            .collect();
        // Violations are reported per rotation; compare the sets they touch.
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn inner_product_is_bilinear(
        (u, v, w) in (1usize..=4).prop_flat_map(|n| {
            let vals = move || proptest::collection::vec(rational(), 1 << n)
                .prop_map(move |x| Valuation::from_values(n, x).unwrap());
            (vals(), vals(), vals())
        }),
        a in rational(),
        b in rational(),
    ) {
        let combo = u.linear_combination(&a, &v, &b).unwrap();
        let lhs = combo.inner_product(&w).unwrap();
        let rhs = a * u.inner_product(&w).unwrap() + b * v.inner_product(&w).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(u.inner_product(&w).unwrap(), w.inner_product(&u).unwrap());
    }

    #[test]
    fn text_and_json_round_trip(v in valuation(5)) {
        prop_assert_eq!(parse_valuation(&valuation_to_text(&v)).unwrap(), v.clone());
        prop_assert_eq!(parse_valuation(&valuation_to_json(&v).to_string()).unwrap(), v);
    }

    #[test]
    fn greedy_lands_in_demand((v, p) in gs_with_prices()) {
        let g = greedy(&v, &p).unwrap();
        prop_assert!(demand(&v, &p).unwrap().contains(g));
        prop_assert!(check_local_global(&v, &p).unwrap());
    }

    #[test]
    fn reconstruction_ignores_order(
        (v, perm) in gs_valuation().prop_flat_map(|v| { let n = v.n(); (Just(v), permutation(n)) })
    ) {
        let d = delta_tensor(&v);
        let base = reconstruct(&d).unwrap();
        prop_assert_eq!(&base, &v.normalize().0);
        prop_assert_eq!(reconstruct_in_order(&d, &perm).unwrap(), base);
        prop_assert!(check_label_consistency(&d));
    }

    #[test]
    fn concordant_sums_stay_gs(u in gs_valuation(), seed in any::<u64>()) {
        let v = sample_gs(u.n(), seed, 1).unwrap().remove(0);
        let sum = &u + &v;
        let conc = concordant(&u, &v).unwrap();
        prop_assert_eq!(conc, check_gs(&sum).is_gs());
        match concordant_sum(&u, &v, &int(1), &int(2)) {
            Ok(w) => {
                prop_assert!(conc);
                prop_assert!(check_gs(&w).is_gs());
            }
            Err(_) => prop_assert!(!conc),
        }
    }

    #[test]
    fn lp_answers_verify(
        (cols, rhs) in (1usize..=4, 0usize..=5).prop_flat_map(|(m, k)| (
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, m), k),
            proptest::collection::vec(-4i64..=4, m),
        ))
    ) {
        let cols: Vec<Vec<Rational>> = cols.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect();
        let rhs: Vec<Rational> = rhs.iter().map(|&x| int(x)).collect();
        let dot = |a: &[Rational], b: &[Rational]| a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y);
        match solve_nonnegative(&cols, &rhs).unwrap().result {
            Feasibility::Feasible(x) => {
                prop_assert!(x.iter().all(|a| !a.is_negative()));
                for (row, b) in rhs.iter().enumerate() {
                    let lhs = cols.iter().zip(&x).fold(Rational::zero(), |acc, (c, a)| acc + &c[row] * a);
                    prop_assert_eq!(&lhs, b);
                }
            }
            Feasibility::Infeasible(y) => {
                prop_assert!(dot(&rhs, &y).is_negative());
                for c in &cols {
                    prop_assert!(!dot(c, &y).is_negative());
                }
            }
        }
    }

    #[test]
    fn weighted_rank_telescopes(
        n in 1usize..=4, pick in any::<prop::sample::Index>(),
        raw in proptest::collection::vec((0i64..=6, 1i64..=3), 4),
    ) {
        let cat = enumerate_matroids(n).unwrap();
        let m = cat.entries[pick.index(cat.len())].clone();
        let weights = raw.iter().take(n).map(|&(p, q)| frac(p, q)).collect();
        let wm = WeightedMatroid::new(m, weights).unwrap();
        let dec = weighted_rank_decompose(&wm);
        prop_assert!(dec.terms.iter().all(|(c, _)| c.is_positive()));
        prop_assert_eq!(dec.evaluate(n), weighted_rank_valuation(&wm));
    }

    #[test]
    fn matroid_relabeling(
        n in 1usize..=4, pick in any::<prop::sample::Index>(), seed in any::<u64>(),
    ) {
        let cat = enumerate_matroids(n).unwrap();
        let m = &cat.entries[pick.index(cat.len())];
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.rotate_left((seed as usize) % n);
        let moved = m.permute(&perm);
        prop_assert_eq!(moved.canonical_form(), m.canonical_form());
        prop_assert!(is_matroid_rank_valuation(&m.rank_function()));
        prop_assert_eq!(moved.rank_function(), m.rank_function().permute(&perm));
    }
}

#[test]
fn perturbed_label_breaks_consistency() {
    let mut d = delta_tensor(&counterexample_valuation());
    assert!(check_label_consistency(&d));
    d.set(SubsetMask::singleton(5), 1, 2, int(1)).unwrap();
    assert!(!check_label_consistency(&d));
}

/// The marginal-domination condition by itself is met by any GS valuation with
/// nonpositive marginals, so it cannot force concordance with every matroid.
#[test]
fn strong_quotient_condition_alone_does_not_force_concordance() {
    let v = Valuation::from_fn(3, |s| match s.bits() {
        0b110 => frac(-1, 8),
        0b111 => frac(-3, 8),
        _ => int(0),
    });
    let w = Matroid::new(
        3,
        [
            SubsetMask::from_items([1, 3]),
            SubsetMask::from_items([2, 3]),
        ],
    )
    .unwrap()
    .rank_function();
    assert!(check_gs(&v).is_gs());
    assert!(is_strong_quotient(&v, &w).unwrap());
    assert!(!concordant(&v, &w).unwrap());
    assert!(!check_gs(&(&v + &w)).is_gs());

    // With a free matroid the trees never cross and the sum stays GS.
    let free = Matroid::free(3).rank_function();
    assert!(is_strong_quotient(&v, &free).unwrap());
    assert!(concordant(&v, &free).unwrap());
    assert!(check_gs(&(&v + &free)).is_gs());
}
