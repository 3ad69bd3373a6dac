//! Exhaustive reference solvers for small inputs, an isomorphism validator and a
//! generator for all non-isomorphic trees of a given order.
//!
//! Nothing here shares code with the Hungarian engine or the dynamic program.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::matching::BipartiteInstance;
use crate::tree::{Tree, VertexId};
use crate::weight::{ExtendedWeight, WeightModel};

/// Largest side (matchings) or tree order (isomorphisms) the oracles accept.
pub const MAX_ORACLE_SIZE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_left: usize,
    pub max_right: usize,
    pub max_tree_order: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_left: MAX_ORACLE_SIZE, max_right: MAX_ORACLE_SIZE, max_tree_order: MAX_ORACLE_SIZE }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("input of size {size} exceeds the oracle budget of {limit}")]
pub struct BudgetExceeded {
    pub size: usize,
    pub limit: usize,
}

/// Sorted (g, h) pair list; two mappings are equal iff their canonical forms are.
pub type CanonicalMapping = Vec<(VertexId, VertexId)>;

/// Maximum weight over all matchings (including the empty one) and every matching
/// attaining it, each as a sorted pair list.
pub fn brute_force_mwm(
    instance: &BipartiteInstance,
) -> Result<(ExtendedWeight, BTreeSet<Vec<(usize, usize)>>), BudgetExceeded> {
    let budget = OracleBudget::default();
    let (k, l) = (instance.left_size(), instance.right_size());
    if k > budget.max_left || l > budget.max_right {
        return Err(BudgetExceeded { size: k.max(l), limit: budget.max_left.min(budget.max_right) });
    }

    fn go(
        inst: &BipartiteInstance,
        row: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<(usize, usize)>,
        weight: f64,
        best: &mut (f64, BTreeSet<Vec<(usize, usize)>>),
    ) {
        if row == inst.left_size() {
            if weight > best.0 {
                best.0 = weight;
                best.1.clear();
            }
            if weight == best.0 {
                best.1.insert(current.clone());
            }
            return;
        }
        go(inst, row + 1, used, current, weight, best);
        for j in 0..inst.right_size() {
            let Some(w) = inst.weight(row, j).finite_value() else { continue };
            if used[j] {
                continue;
            }
            used[j] = true;
            current.push((row, j));
            go(inst, row + 1, used, current, weight + w, best);
            current.pop();
            used[j] = false;
        }
    }

    let mut best = (f64::NEG_INFINITY, BTreeSet::new());
    go(instance, 0, &mut vec![false; l], &mut Vec::new(), 0.0, &mut best);
    Ok((ExtendedWeight::finite(best.0), best.1))
}

/// Maximum weight perfect matching of a square matrix over all `n!` permutations;
/// `None` if every permutation uses a forbidden entry. Rows of the result give the
/// column of each row.
pub fn brute_force_mwpm(n: usize, weights: &[ExtendedWeight]) -> Result<Option<(f64, Vec<usize>)>, BudgetExceeded> {
    if n > MAX_ORACLE_SIZE {
        return Err(BudgetExceeded { size: n, limit: MAX_ORACLE_SIZE });
    }
    fn go(n: usize, w: &[ExtendedWeight], row: usize, perm: &mut Vec<usize>, used: &mut [bool], acc: f64, best: &mut Option<(f64, Vec<usize>)>) {
        if row == n {
            if best.as_ref().is_none_or(|(b, _)| acc > *b) {
                *best = Some((acc, perm.clone()));
            }
            return;
        }
        for j in 0..n {
            let Some(x) = w[row * n + j].finite_value() else { continue };
            if used[j] {
                continue;
            }
            used[j] = true;
            perm.push(j);
            go(n, w, row + 1, perm, used, acc + x, best);
            perm.pop();
            used[j] = false;
        }
    }
    let mut best = None;
    go(n, weights, 0, &mut Vec::new(), &mut vec![false; n], 0.0, &mut best);
    Ok(best)
}

/// Maximum weight over all common subtree isomorphisms (non-empty domain, finite
/// weight) and every mapping attaining it. With no finite mapping the weight is
/// `NEG_INFINITY` and the set is empty.
pub fn brute_force_mcst(
    g: &Tree,
    h: &Tree,
    model: &WeightModel,
) -> Result<(ExtendedWeight, BTreeSet<CanonicalMapping>), BudgetExceeded> {
    let limit = OracleBudget::default().max_tree_order;
    for t in [g, h] {
        if t.len() > limit {
            return Err(BudgetExceeded { size: t.len(), limit });
        }
    }

    let mut best = ExtendedWeight::NEG_INFINITY;
    let mut optima = BTreeSet::new();
    let n = g.len();
    for mask in 1u32..(1 << n) {
        let Some(order) = bfs_order(g, mask) else { continue };
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; h.len()];
        extend(g, h, &order, 0, &mut image, &mut used, &mut |image| {
            let mapping: CanonicalMapping = order.iter().map(|&(v, _)| (v, image[v])).collect();
            let w = mapping_weight(g, h, model, &image, mask);
            if !w.is_finite() {
                return;
            }
            if w > best {
                best = w;
                optima.clear();
            }
            if w == best {
                let mut canonical = mapping;
                canonical.sort_unstable();
                optima.insert(canonical);
            }
        });
    }
    Ok((best, optima))
}

/// BFS order of the vertices in `mask` with their BFS parents, or `None` if `mask`
/// does not induce a connected subgraph of `g`.
fn bfs_order(g: &Tree, mask: u32) -> Option<Vec<(VertexId, Option<VertexId>)>> {
    let start = mask.trailing_zeros() as usize;
    let mut order = vec![(start, None)];
    let mut seen = 1u32 << start;
    let mut head = 0;
    while head < order.len() {
        let v = order[head].0;
        head += 1;
        for w in g.neighbors(v) {
            if mask & (1 << w) != 0 && seen & (1 << w) == 0 {
                seen |= 1 << w;
                order.push((w, Some(v)));
            }
        }
    }
    (seen == mask).then_some(order)
}

/// Enumerates injective maps of the BFS-ordered domain that send every BFS tree
/// edge onto an edge of `h`.
fn extend(
    g: &Tree,
    h: &Tree,
    order: &[(VertexId, Option<VertexId>)],
    pos: usize,
    image: &mut Vec<VertexId>,
    used: &mut Vec<bool>,
    emit: &mut dyn FnMut(&[VertexId]),
) {
    if pos == order.len() {
        emit(image);
        return;
    }
    let (v, parent) = order[pos];
    let candidates: Vec<VertexId> = match parent {
        None => (0..h.len()).collect(),
        Some(p) => h.neighbors(image[p]).collect(),
    };
    for x in candidates {
        if used[x] {
            continue;
        }
        used[x] = true;
        image[v] = x;
        extend(g, h, order, pos + 1, image, used, emit);
        image[v] = usize::MAX;
        used[x] = false;
    }
}

fn mapping_weight(g: &Tree, h: &Tree, model: &WeightModel, image: &[VertexId], mask: u32) -> ExtendedWeight {
    let mut total = ExtendedWeight::ZERO;
    for v in (0..g.len()).filter(|v| mask & (1 << v) != 0) {
        total = total + model.vertex_weight(g.label(v), h.label(image[v]));
    }
    for e in g.edges() {
        if mask & (1 << e.a) != 0 && mask & (1 << e.b) != 0 {
            let f = h.edge_between(image[e.a], image[e.b]).expect("BFS extension maps edges onto edges");
            total = total + model.edge_weight(&e.label, &h.edge(f).label);
        }
    }
    total
}

/// Why a mapping fails to be a common subtree isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    OutOfRange { g: VertexId, h: VertexId },
    NotInjective { vertex: VertexId, in_first_tree: bool },
    DomainDisconnected,
    ImageDisconnected,
    /// An edge between mapped vertices of the first tree has no image edge.
    EdgeNotPreserved { a: VertexId, b: VertexId },
    /// An edge between image vertices of the second tree has no preimage edge.
    ImageEdgeNotReflected { a: VertexId, b: VertexId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub diagnostics: Vec<Diagnostic>,
    /// Recomputed weight; `None` when the mapping is structurally invalid.
    pub weight: Option<ExtendedWeight>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// Checks injectivity, connectivity of domain and image, and that edges are
/// preserved in both directions on the mapped set; recomputes the weight.
pub fn validate_isomorphism(g: &Tree, h: &Tree, mapping: &[(VertexId, VertexId)], model: &WeightModel) -> Validation {
    let mut diagnostics = Vec::new();
    for &(a, b) in mapping {
        if a >= g.len() || b >= h.len() {
            diagnostics.push(Diagnostic::OutOfRange { g: a, h: b });
        }
    }
    if !diagnostics.is_empty() {
        return Validation { diagnostics, weight: None };
    }

    let mut forward = BTreeMap::new();
    let mut backward = BTreeMap::new();
    for &(a, b) in mapping {
        if forward.insert(a, b).is_some() {
            diagnostics.push(Diagnostic::NotInjective { vertex: a, in_first_tree: true });
        }
        if backward.insert(b, a).is_some() {
            diagnostics.push(Diagnostic::NotInjective { vertex: b, in_first_tree: false });
        }
    }
    if !diagnostics.is_empty() {
        return Validation { diagnostics, weight: None };
    }

    if !induces_connected(g, &forward.keys().copied().collect()) {
        diagnostics.push(Diagnostic::DomainDisconnected);
    }
    if !induces_connected(h, &backward.keys().copied().collect()) {
        diagnostics.push(Diagnostic::ImageDisconnected);
    }
    for e in g.edges() {
        if let (Some(&x), Some(&y)) = (forward.get(&e.a), forward.get(&e.b)) {
            if h.edge_between(x, y).is_none() {
                diagnostics.push(Diagnostic::EdgeNotPreserved { a: e.a, b: e.b });
            }
        }
    }
    for f in h.edges() {
        if let (Some(&x), Some(&y)) = (backward.get(&f.a), backward.get(&f.b)) {
            if g.edge_between(x, y).is_none() {
                diagnostics.push(Diagnostic::ImageEdgeNotReflected { a: f.a, b: f.b });
            }
        }
    }

    let mut weight = ExtendedWeight::ZERO;
    for (&a, &b) in &forward {
        weight = weight + model.vertex_weight(g.label(a), h.label(b));
    }
    for e in g.edges() {
        if let (Some(&x), Some(&y)) = (forward.get(&e.a), forward.get(&e.b)) {
            if let Some(f) = h.edge_between(x, y) {
                weight = weight + model.edge_weight(&e.label, &h.edge(f).label);
            }
        }
    }
    Validation { diagnostics, weight: Some(weight) }
}

fn induces_connected(t: &Tree, set: &HashSet<VertexId>) -> bool {
    let Some(&start) = set.iter().next() else { return true };
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for w in t.neighbors(v) {
            if set.contains(&w) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen.len() == set.len()
}

/// Canonical string of an unlabeled tree, equal for isomorphic trees: the smaller
/// AHU encoding over the one or two centers.
pub fn canonical_shape(t: &Tree) -> String {
    fn encode(t: &Tree, v: VertexId, parent: VertexId) -> String {
        let mut parts: Vec<String> = t.neighbors(v).filter(|&w| w != parent).map(|w| encode(t, w, v)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    centers(t).into_iter().map(|c| encode(t, c, c)).min().expect("a tree has a center")
}

fn centers(t: &Tree) -> Vec<VertexId> {
    let n = t.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut leaves: Vec<VertexId> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &leaf in &leaves {
            degree[leaf] = 0;
        }
        for &leaf in &leaves {
            for w in t.neighbors(leaf) {
                if degree[w] > 0 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        leaves = next;
    }
    leaves
}

/// Every tree of order `n` up to isomorphism (unit labels), in canonical order.
/// Built from all Prüfer sequences, so only meant for `n <= 8`.
pub fn non_isomorphic_trees(n: usize) -> Vec<Tree> {
    assert!((1..=MAX_ORACLE_SIZE).contains(&n));
    if n == 1 {
        return vec![Tree::singleton("a")];
    }
    let mut shapes: BTreeMap<String, Tree> = BTreeMap::new();
    let len = n - 2;
    let total = n.pow(len as u32);
    for code in 0..total {
        let mut seq = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            seq.push(c % n);
            c /= n;
        }
        let t = tree_from_prufer(n, &seq);
        shapes.entry(canonical_shape(&t)).or_insert(t);
    }
    shapes.into_values().collect()
}

fn tree_from_prufer(n: usize, seq: &[usize]) -> Tree {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("Prüfer decoding always has a leaf");
        edges.push((leaf, x, "-"));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1], "-"));
    Tree::new(vec!["a"; n], edges).expect("Prüfer sequences decode to trees")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Tree {
        Tree::new(vec!["a"; n], (1..n).map(|i| (i - 1, i, "-")).collect()).unwrap()
    }

    fn star(n: usize) -> Tree {
        Tree::new(vec!["a"; n], (1..n).map(|i| (0, i, "-")).collect()).unwrap()
    }

    #[test]
    fn mwm_oracle_on_small_instances() {
        let empty = BipartiteInstance::from_rows(&[]);
        let (w, all) = brute_force_mwm(&empty).unwrap();
        assert_eq!(w, ExtendedWeight::ZERO);
        assert_eq!(all, BTreeSet::from([vec![]]));

        let fig2 = BipartiteInstance::from_rows(&[
            vec![Some(-1), Some(3), Some(4), None],
            vec![None, None, Some(2), Some(3)],
        ]);
        let (w, all) = brute_force_mwm(&fig2).unwrap();
        assert_eq!(w, ExtendedWeight::from(7));
        assert_eq!(all, BTreeSet::from([vec![(0, 2), (1, 3)]]));

        let fig1c = BipartiteInstance::from_rows(&[vec![Some(1), Some(1), Some(1)], vec![Some(1), Some(1), Some(4)]]);
        let (w, all) = brute_force_mwm(&fig1c).unwrap();
        assert_eq!(w, ExtendedWeight::from(5));
        assert_eq!(all.len(), 2);

        let big = BipartiteInstance::from_rows(&vec![vec![Some(1); 9]; 2]);
        assert!(brute_force_mwm(&big).is_err());
    }

    #[test]
    fn mcst_oracle_on_small_trees() {
        let one = Tree::singleton("a");
        let (w, all) = brute_force_mcst(&one, &one, &WeightModel::Size).unwrap();
        assert_eq!((w, all.len()), (ExtendedWeight::ONE, 1));

        let (w, all) = brute_force_mcst(&path(3), &path(3), &WeightModel::Size).unwrap();
        assert_eq!(w, ExtendedWeight::from(3));
        assert_eq!(all, BTreeSet::from([vec![(0, 0), (1, 1), (2, 2)], vec![(0, 2), (1, 1), (2, 0)]]));

        let (w, _) = brute_force_mcst(&star(4), &path(3), &WeightModel::Size).unwrap();
        assert_eq!(w, ExtendedWeight::from(3));

        let a = Tree::singleton("C");
        let b = Tree::singleton("N");
        let (w, all) = brute_force_mcst(&a, &b, &WeightModel::LabelStrict).unwrap();
        assert_eq!(w, ExtendedWeight::NEG_INFINITY);
        assert!(all.is_empty());
        assert!(brute_force_mcst(&path(9), &one, &WeightModel::Size).is_err());
    }

    #[test]
    fn oracle_mappings_validate() {
        let (g, h) = (star(5), path(4));
        let (w, all) = brute_force_mcst(&g, &h, &WeightModel::Size).unwrap();
        for m in &all {
            let v = validate_isomorphism(&g, &h, m, &WeightModel::Size);
            assert!(v.is_valid(), "{m:?}: {:?}", v.diagnostics);
            assert_eq!(v.weight, Some(w));
        }
    }

    #[test]
    fn validator_diagnostics() {
        let p = path(4);
        let m = WeightModel::Size;
        let v = validate_isomorphism(&p, &p, &[(0, 0), (1, 0)], &m);
        assert!(v.diagnostics.contains(&Diagnostic::NotInjective { vertex: 0, in_first_tree: false }));
        let v = validate_isomorphism(&p, &p, &[(0, 0), (2, 2)], &m);
        assert!(v.diagnostics.contains(&Diagnostic::DomainDisconnected));
        let v = validate_isomorphism(&p, &p, &[(0, 0), (1, 2)], &m);
        assert!(v.diagnostics.contains(&Diagnostic::EdgeNotPreserved { a: 0, b: 1 }));
        assert!(validate_isomorphism(&p, &p, &[], &m).is_valid());
        assert!(!validate_isomorphism(&p, &p, &[(7, 0)], &m).is_valid());
    }

    #[test]
    fn free_tree_counts() {
        // OEIS A000055
        let counts: Vec<usize> = (1..=8).map(|n| non_isomorphic_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23]);
    }
}
