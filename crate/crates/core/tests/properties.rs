mod common;

use std::collections::BTreeSet;

use common::*;
use mcst::io::random_tree;
use mcst::oracle::{brute_force_mcst, brute_force_mwpm, validate_isomorphism};
use mcst::reductions::{assignment_to_mcst, recover_mwpm, AssignmentInstance};
use mcst::{enumerate_all, solve, solve_all_roots, ExtendedWeight, WeightModel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn optimal_set(g: &mcst::Tree, h: &mcst::Tree, model: &WeightModel) -> BTreeSet<Vec<(usize, usize)>> {
    match enumerate_all(g, h, model, None) {
        Ok(stream) => stream.map(|i| i.pairs).collect(),
        Err(_) => BTreeSet::new(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric_in_the_inputs(seed: u64, n in 1usize..=30, m in 1usize..=30) {
        let mut r = rng(seed);
        let (g, h) = (labeled_tree(n, &mut r), labeled_tree(m, &mut r));
        let model = random_table(&mut r, -3, 3);
        prop_assert_eq!(solve(&g, &h, &model).weight, solve(&h, &g, &model).weight);
    }

    #[test]
    fn fixed_root_matches_all_roots(seed: u64, n in 1usize..=50, m in 1usize..=50) {
        let mut r = rng(seed);
        let (g, h) = (labeled_tree(n, &mut r), labeled_tree(m, &mut r));
        let model = random_table(&mut r, -3, 3);
        let result = solve(&g, &h, &model);
        prop_assert_eq!(result.weight, solve_all_roots(&g, &h, &model));
        if result.weight.is_finite() {
            let check = validate_isomorphism(&g, &h, &result.witness.pairs, &model);
            prop_assert!(check.is_valid(), "{:?}", check.diagnostics);
            prop_assert_eq!(check.weight, Some(result.weight));
        } else {
            prop_assert!(result.witness.is_empty());
        }
    }

    #[test]
    fn size_model_is_bounded_by_smaller_order(seed: u64, n in 1usize..=40, m in 1usize..=40) {
        let mut r = rng(seed);
        let (g, h) = (random_tree(n, &mut r, 1), random_tree(m, &mut r, 1));
        let w = solve(&g, &h, &WeightModel::Size).weight;
        prop_assert!(w >= ExtendedWeight::ONE);
        prop_assert!(w <= ExtendedWeight::from(n.min(m) as i32));
        // A tree always embeds into itself.
        prop_assert_eq!(solve(&g, &g, &WeightModel::Size).weight, ExtendedWeight::from(n as i32));
    }

    #[test]
    fn scaling_keeps_the_optimal_mappings(seed: u64, n in 1usize..=6, m in 1usize..=6) {
        let mut r = rng(seed);
        let (g, h) = (labeled_tree(n, &mut r), labeled_tree(m, &mut r));
        let model = random_table(&mut r, -3, 3);
        let WeightModel::Table(table) = &model else { unreachable!() };
        let scaled = WeightModel::Table(table.scaled(3.0));
        let (w, w3) = (solve(&g, &h, &model).weight, solve(&g, &h, &scaled).weight);
        prop_assert_eq!(w.scale(3.0), w3);
        prop_assert_eq!(optimal_set(&g, &h, &model), optimal_set(&g, &h, &scaled));
    }

    #[test]
    fn enumeration_matches_oracle_with_tables(seed: u64, n in 1usize..=6, m in 1usize..=6) {
        let mut r = rng(seed);
        let (g, h) = (labeled_tree(n, &mut r), labeled_tree(m, &mut r));
        let model = random_table(&mut r, -3, 3);
        let (best, all) = brute_force_mcst(&g, &h, &model).unwrap();
        prop_assert_eq!(solve(&g, &h, &model).weight, best);
        let listed: Vec<_> = match enumerate_all(&g, &h, &model, None) {
            Ok(s) => s.map(|i| i.pairs).collect(),
            Err(_) => Vec::new(),
        };
        let set: BTreeSet<_> = listed.iter().cloned().collect();
        prop_assert_eq!(set.len(), listed.len());
        prop_assert_eq!(set, all);
    }

    #[test]
    fn assignment_round_trip(seed: u64, n in 1usize..=6) {
        let mut r = rng(seed);
        let weights: Vec<ExtendedWeight> = (0..n * n).map(|_| random_weight(&mut r, -4, 4, 0.1)).collect();
        let inst = AssignmentInstance::new(n, weights.clone()).unwrap();
        let red = assignment_to_mcst(&inst).unwrap();
        let result = solve(&red.g, &red.h, &red.model);
        let recovered = recover_mwpm(&result.witness, &red);
        match brute_force_mwpm(n, &weights).unwrap() {
            Some((best, _)) => {
                let a = recovered.unwrap();
                prop_assert_eq!(a.weight, best);
                prop_assert_eq!(a.pairs.len(), n);
                prop_assert!(result.witness.pairs.contains(&(0, 0)));
                let sum: f64 = a.pairs.iter().map(|&(i, j)| weights[i * n + j].value()).sum();
                prop_assert_eq!(sum, best);
            }
            None => prop_assert!(recovered.is_err()),
        }
    }
}
