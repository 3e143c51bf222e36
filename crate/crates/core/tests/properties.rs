// SPDX-License-Identifier: Apache-2.0

mod common;

use proptest::prelude::*;

use gridfree::detect::{
    find_grid_with, find_prism_with, find_small_two_core_with, two_core, two_core_with_order,
};
use gridfree::ffield::{legendre, Prime};
use gridfree::fixtures;
use gridfree::geometry::{
    discriminant_shift, line_parabola_intersections, pascal_meets_collinear,
    predicted_intersection_count, secant_line, AffinePoint, ParabolaSpec,
};
use gridfree::hypergraph::{decode, density, encode, is_linear, Edge, Hypergraph3};
use gridfree::lemma::{best_subset_with, random_pairs, LemmaInstance};
use gridfree::{Exec, Rational};

fn arb_hypergraph(max_n: usize, max_m: usize) -> impl Strategy<Value = Hypergraph3> {
    (3..=max_n).prop_flat_map(move |n| {
        prop::collection::btree_set(prop::collection::btree_set(0..n, 3), 0..=max_m).prop_map(
            move |sets| {
                let edges = sets.into_iter().map(|s| {
                    let v: Vec<usize> = s.into_iter().collect();
                    [v[0], v[1], v[2]] as Edge
                });
                Hypergraph3::new(n, edges).unwrap()
            },
        )
    })
}

fn arb_linear() -> impl Strategy<Value = Hypergraph3> {
    (6usize..14, 0usize..30, any::<u64>())
        .prop_map(|(n, m, seed)| fixtures::random_linear(n, m, 200, seed))
}

fn arb_prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43])
        .prop_map(|p| Prime::new(p).unwrap())
}

proptest! {
    #[test]
    fn hg3_round_trip(h in arb_hypergraph(12, 20)) {
        let text = encode(&h);
        prop_assert_eq!(decode(&text), Ok(h.clone()));
        prop_assert_eq!(encode(&decode(&text).unwrap()), text);
    }

    #[test]
    fn linearity_matches_pairwise_check(h in arb_hypergraph(9, 8)) {
        prop_assert_eq!(is_linear(&h), common::naive_is_linear(&h));
    }

    #[test]
    fn density_times_n_squared_is_m(h in arb_hypergraph(15, 25)) {
        let d = density(&h).unwrap();
        let n = h.n() as i128;
        prop_assert_eq!(d * Rational::from_integer(n * n), Rational::from_integer(h.m() as i128));
    }

    #[test]
    fn two_core_is_a_fixpoint(h in arb_hypergraph(12, 20), rot in 0usize..12) {
        let core = two_core(&h);
        prop_assert_eq!(two_core(&core), core.clone());
        prop_assert!(core.edges().iter().all(|e| h.edges().contains(e)));
        let mut order: Vec<usize> = (0..h.n()).collect();
        order.rotate_left(rot % h.n());
        prop_assert_eq!(two_core_with_order(&h, &order), core);
    }

    #[test]
    fn grid_detector_matches_oracle(h in arb_linear()) {
        let w = find_grid_with(&h, Exec::Parallel);
        prop_assert_eq!(w.is_some(), common::naive_has_grid(&h));
        if let Some(w) = w {
            prop_assert!(w.is_valid_in(&h));
        }
    }

    #[test]
    fn searches_agree_across_executors(h in arb_linear()) {
        prop_assert_eq!(find_grid_with(&h, Exec::Sequential), find_grid_with(&h, Exec::Parallel));
        prop_assert_eq!(find_prism_with(&h, Exec::Sequential), find_prism_with(&h, Exec::Parallel));
        prop_assert_eq!(
            find_small_two_core_with(&h, 7, Exec::Sequential).unwrap(),
            find_small_two_core_with(&h, 7, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn best_subset_agrees_across_executors(n in 2usize..13, size in 0usize..40, seed in any::<u64>()) {
        let size = size.min(n * (n - 1) / 2);
        let inst = LemmaInstance::with_half_k(n, random_pairs(n, size, seed)).unwrap();
        prop_assert_eq!(
            best_subset_with(&inst, Exec::Sequential).unwrap(),
            best_subset_with(&inst, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn secant_meets_shifted_parabola_per_discriminant(p in arb_prime(), a in 0i64..50, b in 0i64..50, t in 0i64..50) {
        let (a, b) = (p.elem(a), p.elem(b));
        prop_assume!(a != b);
        let v1 = ParabolaSpec::new(p.zero());
        let vt = ParabolaSpec::new(p.elem(t));
        let line = secant_line(a, b, &v1).unwrap();
        let hits = line_parabola_intersections(&line, &vt);
        prop_assert!(hits.iter().all(|pt| vt.contains(*pt) && line.contains(*pt)));
        let want = match legendre(discriminant_shift(a, b, p.elem(t))) {
            0 => 1,
            1 => 2,
            _ => 0,
        };
        prop_assert_eq!(hits.len(), want);
        prop_assert_eq!(predicted_intersection_count(&line, &vt), want);
    }

    // Five points of V1 fix the conic, so moving the sixth point off it must
    // break collinearity of the opposite-side meets.
    #[test]
    fn pascal_fails_off_the_conic(
        p in prop::sample::select(vec![13u64, 17, 19, 23]),
        xs in prop::collection::btree_set(0u64..23, 6),
        bump in 1u64..23,
        order in Just([0usize, 1, 2, 3, 4, 5]).prop_shuffle(),
    ) {
        let p = Prime::new(p).unwrap();
        let xs: Vec<u64> = xs.into_iter().map(|x| x % p.get()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        prop_assume!(xs.len() == 6 && bump % p.get() != 0);
        let v1 = ParabolaSpec::new(p.zero());
        let mut pts: Vec<AffinePoint> = xs.iter().map(|&x| v1.point(p.elem(x as i64))).collect();
        prop_assert!(pascal_meets_collinear(&order.map(|i| pts[i])));
        let last = pts[5];
        pts[5] = AffinePoint::new(last.x, last.y + p.elem(bump as i64));
        prop_assert!(!pascal_meets_collinear(&order.map(|i| pts[i])));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_witness_is_lex_min(seed in any::<u64>(), planted in any::<bool>()) {
        let h = if planted {
            fixtures::plant(&fixtures::GRID_EDGES, 11, 14, false, seed)
        } else {
            fixtures::random_linear(10, 22, 300, seed)
        };
        let w = find_grid_with(&h, Exec::Parallel).map(|w| (w.rows, w.cols));
        prop_assert_eq!(w, common::naive_min_grid(&h));
    }
}
