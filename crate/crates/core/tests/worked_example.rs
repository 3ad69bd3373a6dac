mod common;

use common::*;
use mcst::oracle::validate_isomorphism;
use mcst::{
    enumerate_all, enumerate_mwms, solve, solve_all_roots, solve_mwm, solve_rooted, BipartiteInstance,
    ExtendedWeight, RootedSubtreeId, WeightModel,
};

#[test]
fn rooted_pair_weighs_six() {
    let (g, h) = (example_g(), example_h());
    let gu = RootedSubtreeId { root_vertex: EX_U, direction_vertex: EX_R };
    let hv = RootedSubtreeId { root_vertex: EX_V, direction_vertex: EX_S };
    let iso = solve_rooted(&g, gu, &h, hv, &WeightModel::Size).unwrap();
    assert_eq!(iso.weight, ExtendedWeight::from(6));
    assert!(iso.pairs.contains(&(EX_U, EX_V)));
    assert!(iso.pairs.contains(&(EX_C1, EX_D1)) || iso.pairs.contains(&(EX_C1, EX_D2)));
    assert!(iso.pairs.contains(&(EX_C2, EX_D3)));
    assert!(validate_isomorphism(&g, &h, &iso.pairs, &WeightModel::Size).is_valid());
}

#[test]
fn unrooted_optimum_weighs_seven() {
    let (g, h) = (example_g(), example_h());
    let r = solve(&g, &h, &WeightModel::Size);
    assert_eq!(r.weight, ExtendedWeight::from(7));
    assert_eq!(solve_all_roots(&g, &h, &WeightModel::Size), ExtendedWeight::from(7));
    assert_eq!(solve(&h, &g, &WeightModel::Size).weight, ExtendedWeight::from(7));
    let check = validate_isomorphism(&g, &h, &r.witness.pairs, &WeightModel::Size);
    assert!(check.is_valid(), "{:?}", check.diagnostics);
    assert_eq!(check.weight, Some(ExtendedWeight::from(7)));
    assert_eq!(r.table.get(&h, EX_U, EX_V, EX_V), Some(ExtendedWeight::from(7)));
    assert_eq!(r.table.get(&h, EX_U, EX_S, EX_V), Some(ExtendedWeight::from(7)));
}

#[test]
fn child_matching_has_two_optima() {
    let inst = BipartiteInstance::from_rows(&[vec![Some(1), Some(1), Some(1)], vec![Some(1), Some(1), Some(4)]]);
    let sol = solve_mwm(&inst);
    let mut all: Vec<Vec<(usize, usize)>> = enumerate_mwms(&inst, &sol.matching, &sol.duals, 0.0).map(|m| m.pairs).collect();
    all.sort();
    assert_eq!(all, vec![vec![(0, 0), (1, 2)], vec![(0, 1), (1, 2)]]);
}

#[test]
fn named_witness_validates() {
    let (g, h) = (example_g(), example_h());
    let pairs = [(EX_U, EX_V), (EX_C1, EX_D1), (EX_C2, EX_D3), (7, 5), (8, 6), (9, 7)];
    let check = validate_isomorphism(&g, &h, &pairs, &WeightModel::Size);
    assert!(check.is_valid());
    assert_eq!(check.weight, Some(ExtendedWeight::from(6)));
}

#[test]
fn enumeration_contains_rerooted_optimum() {
    let (g, h) = (example_g(), example_h());
    let all: Vec<_> = enumerate_all(&g, &h, &WeightModel::Size, None).unwrap().collect();
    assert!(all.iter().all(|i| i.weight == ExtendedWeight::from(7)));
    let wanted = |i: &&mcst::Isomorphism| {
        [(EX_R, EX_D1), (EX_U, EX_V), (EX_C1, EX_D2), (EX_C2, EX_D3)].iter().all(|p| i.pairs.contains(p))
    };
    assert!(all.iter().any(|i| wanted(&i)));
}
