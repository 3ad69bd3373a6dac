#![allow(dead_code)]

use mcst::{ExtendedWeight, Tree, WeightModel, WeightTable};
use rand::Rng;

pub fn unlabeled(n: usize, edges: &[(usize, usize)]) -> Tree {
    Tree::new(vec!["a"; n], edges.iter().map(|&(a, b)| (a, b, "-")).collect()).unwrap()
}

/// First tree of the running example.
///
/// `u`=0 is adjacent to `r`=1, `c1`=5 and `c2`=6; `r` has leaves 2..=4; `c2` leads
/// to `x`=7, which has leaves 8 and 9. Vertex 0 is the root of the table pass.
pub fn example_g() -> Tree {
    unlabeled(10, &[(0, 1), (1, 2), (1, 3), (1, 4), (0, 5), (0, 6), (6, 7), (7, 8), (7, 9)])
}

/// Second tree of the running example.
///
/// `v`=0 with neighbors `d1`=1, `d2`=2, `s`=3 and `d3`=4; `d3` leads to `y`=5,
/// which has leaves 6 and 7.
pub fn example_h() -> Tree {
    unlabeled(8, &[(0, 1), (0, 2), (0, 3), (0, 4), (4, 5), (5, 6), (5, 7)])
}

pub const EX_U: usize = 0;
pub const EX_R: usize = 1;
pub const EX_C1: usize = 5;
pub const EX_C2: usize = 6;
pub const EX_V: usize = 0;
pub const EX_D1: usize = 1;
pub const EX_D2: usize = 2;
pub const EX_S: usize = 3;
pub const EX_D3: usize = 4;

pub const VERTEX_LABELS: [&str; 3] = ["a", "b", "c"];
pub const EDGE_LABELS: [&str; 2] = ["x", "y"];

/// Uniform attachment tree with labels drawn from the small alphabets above.
pub fn labeled_tree(n: usize, rng: &mut impl Rng) -> Tree {
    let labels: Vec<&str> = (0..n).map(|_| VERTEX_LABELS[rng.gen_range(0..VERTEX_LABELS.len())]).collect();
    let edges = (1..n).map(|i| (rng.gen_range(0..i), i, EDGE_LABELS[rng.gen_range(0..EDGE_LABELS.len())])).collect();
    Tree::new(labels, edges).unwrap()
}

/// Weight in `[lo, hi]`, or forbidden with probability `p_inf`.
pub fn random_weight(rng: &mut impl Rng, lo: i32, hi: i32, p_inf: f64) -> ExtendedWeight {
    if rng.gen_bool(p_inf) {
        ExtendedWeight::NEG_INFINITY
    } else {
        ExtendedWeight::from(rng.gen_range(lo..=hi))
    }
}

/// Table over the small alphabets with every label pair set explicitly.
pub fn random_table(rng: &mut impl Rng, lo: i32, hi: i32) -> WeightModel {
    let mut t = WeightTable::new();
    for (i, a) in VERTEX_LABELS.iter().enumerate() {
        for b in &VERTEX_LABELS[i..] {
            t.set_vertex(a, b, random_weight(rng, lo, hi, 0.15));
        }
    }
    for (i, a) in EDGE_LABELS.iter().enumerate() {
        for b in &EDGE_LABELS[i..] {
            t.set_edge(a, b, random_weight(rng, lo, hi, 0.15));
        }
    }
    WeightModel::Table(t)
}

/// Copy of `t` with vertex labels drawn uniformly from `p` / `q`.
pub fn relabeled(t: &Tree, rng: &mut impl Rng) -> Tree {
    let labels: Vec<&str> = (0..t.len()).map(|_| if rng.gen_bool(0.5) { "q" } else { "p" }).collect();
    Tree::new(labels, t.edges().iter().map(|e| (e.a, e.b, e.label.clone())).collect()).unwrap()
}
