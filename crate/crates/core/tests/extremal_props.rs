//! Generator and transformation properties.

use std::collections::HashMap;

use convex_characters::count::{g2_closed, gk_caterpillar, gk_fully_loaded};
use convex_characters::extremal::{
    caterpillar, double_lonely_taxa, gen_caterpillar, gen_fully_loaded, gen_random, is_fully_loaded, replace_pendant,
    replace_with_local_fully_loaded,
};
use convex_characters::newick::RootedShape;
use convex_characters::{count_gk, TaxonSet, Tree};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn caterpillar_is_maximal_and_fully_loaded_minimal() {
    for n in 1..=25 {
        for k in 2..=6 {
            assert_eq!(count_gk(&caterpillar(n), k), gk_caterpillar(n, k), "n={n} k={k}");
            if n >= k {
                let t = gen_fully_loaded(n, k, None).unwrap();
                assert_eq!(count_gk(&t, k), gk_fully_loaded(n, k).unwrap(), "n={n} k={k}");
                let w = is_fully_loaded(&t, k).unwrap();
                assert_eq!(w.n, n);
                assert_eq!(w.residue_size, n % (k - 1));
            }
        }
    }
}

#[test]
fn random_topologies_are_uniform_on_four_taxa() {
    let mut freq: HashMap<String, usize> = HashMap::new();
    let samples = 30_000;
    for seed in 0..samples {
        *freq.entry(gen_random(4, seed).to_newick()).or_default() += 1;
    }
    assert_eq!(freq.len(), 3);
    for (t, c) in freq {
        let p = c as f64 / samples as f64;
        assert!((p - 1.0 / 3.0).abs() < 0.02, "{t}: {p}");
    }
}

#[test]
fn random_trees_have_g2_34_at_ten() {
    for seed in 0..50 {
        let t = gen_random(10, seed);
        assert_eq!(count_gk(&t, 2), g2_closed(10));
        assert_eq!(count_gk(&t, 2), 34u32.into());
        assert_eq!(t.vertex_count() - t.n(), 8);
    }
}

#[test]
fn replacement_is_idempotent_on_target_shape() {
    for seed in 0..30 {
        let t = gen_random(12, seed);
        let s = t.find_bounded_split(3).unwrap();
        let once = replace_with_local_fully_loaded(&t, &s, 3).unwrap();
        let twice = replace_with_local_fully_loaded(&once, &s, 3).unwrap();
        assert_eq!(once, twice);
        assert_eq!(count_gk(&once, 3), count_gk(&twice, 3));
    }
}

#[test]
fn hundred_replacements_do_not_increase_g3() {
    for seed in 0..100 {
        let t = gen_random(12, 500 + seed);
        let s = t.find_bounded_split(3).unwrap();
        assert!(s.side_b.len() >= 3 && s.side_b.len() <= 4);
        let out = replace_with_local_fully_loaded(&t, &s, 3).unwrap();
        assert!(count_gk(&out, 3) <= count_gk(&t, 3));
    }
}

#[test]
fn caterpillar_fails_three_loaded_and_figure_two_shape() {
    let labels = ["a", "b", "c", "d", "e", "f", "g", "h", "i"];
    let t = gen_caterpillar(&labels).unwrap();
    assert!(is_fully_loaded(&t, 3).is_none());
    assert_eq!(t.cherries().len(), 2);
    let spine = (t.n()..t.vertex_count()).filter(|&v| t.neighbors(v).filter(|&u| u >= t.n()).count() == 2).count();
    assert_eq!(spine, t.vertex_count() - t.n() - 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn small_pendants_are_irrelevant(n in 6usize..16, seed in any::<u64>(), k in 2usize..5, shape_seed in any::<u64>()) {
        let t = gen_random(n, seed);
        // Any pendant side with at most k taxa may be rearranged freely.
        let sides: Vec<TaxonSet> = t
            .splits()
            .into_iter()
            .flat_map(|s| [s.side_a, s.side_b])
            .filter(|s| s.len() >= 2 && s.len() <= k)
            .collect();
        prop_assume!(!sides.is_empty());
        let side = &sides[(seed % sides.len() as u64) as usize];
        let taxa: Vec<&String> = side.iter().collect();
        let shape = RootedShape::random(&taxa, &mut ChaCha8Rng::seed_from_u64(shape_seed));
        let out = replace_pendant(&t, side, &shape).unwrap();
        prop_assert_eq!(out.n(), t.n());
        prop_assert_eq!(count_gk(&out, k), count_gk(&t, k));
    }

    #[test]
    fn cherry_bound(n in 4usize..30, seed in any::<u64>()) {
        let t = gen_random(n, seed);
        let c = t.cherries().len();
        let g3 = count_gk(&t, 3);
        let doubled = double_lonely_taxa(&t).unwrap();
        prop_assert_eq!(doubled.n(), 2 * n - 2 * c);
        prop_assert!(is_fully_loaded(&doubled, 3).is_some());
        prop_assert!(g3 <= count_gk(&doubled, 3));
        prop_assert!(g3 <= g2_closed(n - c));
    }

    #[test]
    fn random_trees_are_valid(n in 3usize..60, seed in any::<u64>()) {
        let t = gen_random(n, seed);
        prop_assert_eq!(t.n(), n);
        prop_assert_eq!(t.vertex_count() - n, n - 2);
        prop_assert!((n..t.vertex_count()).all(|v| t.degree(v) == 3));
        prop_assert_eq!(Tree::from_newick(&t.to_newick()).unwrap(), t);
    }
}
