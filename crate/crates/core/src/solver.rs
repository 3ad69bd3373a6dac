//! The dynamic program over rooted subtrees.
//!
//! The first tree is rooted at vertex 0; the second tree is considered under every
//! rooting at once. Entry `D(u, s, v)` is the best rooted common subtree of `G^r_u`
//! (u and its descendants) and `H^s_v` (v and everything not behind its neighbor
//! `s`; `s == v` keeps all of `H`) that maps `u` to `v`. For a fixed pair `(u, v)`
//! the matching instances of all `s` differ only by one deleted column, so they are
//! solved together as one family.

use std::collections::HashMap;

use thiserror::Error;

use crate::matching::{solve_mwm, BipartiteInstance, ReducedGraph};
use crate::tree::{RootedSubtreeId, RootedView, Tree, VertexId};
use crate::weight::{ExtendedWeight, WeightModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("no common subtree has finite weight")]
    EmptyOptimum,
    #[error("the table was filled without traceback information")]
    NoTraceback,
    #[error("rooted subtree ({0}, {1}) is not a vertex with itself or a neighbor")]
    InvalidSubtree(VertexId, VertexId),
}

/// A common subtree isomorphism as (vertex of G, vertex of H) pairs sorted by G vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Isomorphism {
    pub pairs: Vec<(VertexId, VertexId)>,
    pub weight: ExtendedWeight,
}

impl Isomorphism {
    pub fn empty() -> Self {
        Isomorphism { pairs: Vec::new(), weight: ExtendedWeight::NEG_INFINITY }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The same mapping read from H to G.
    pub fn inverted(&self) -> Isomorphism {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(a, b)| (b, a)).collect();
        pairs.sort_unstable();
        Isomorphism { pairs, weight: self.weight }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableMode {
    /// Only optimal values; enough for the optimum and for benchmarking.
    WeightOnly,
    /// Also the matching chosen for every entry, needed for witness extraction.
    #[default]
    Traceback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwapPolicy {
    /// Always use the first input as G.
    #[default]
    Never,
    /// Use the tree with the smaller maximum degree as G.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub mode: TableMode,
    pub swap: SwapPolicy,
    /// Record one [`FamilyRecord`] per solved vertex pair.
    pub record_families: bool,
}

/// Work spent on the matching family of one vertex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyRecord {
    pub u: VertexId,
    pub v: VertexId,
    /// Children of `u` in the rooted first tree.
    pub children: usize,
    /// Neighbors of `v`.
    pub neighbors: usize,
    pub base_iterations: usize,
    /// Augmentations spent on all single-column deletions together.
    pub resolve_iterations: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub vertex_pairs: usize,
    /// Pairs that needed a matching family (both sides non-empty, finite vertex weight).
    pub families: usize,
    pub base_iterations: usize,
    pub resolve_iterations: usize,
    pub records: Vec<FamilyRecord>,
}

/// Values `D(u, s, v)` for all `u` in G and all rooted subtrees `H^s_v`.
///
/// Entries of one `u` are contiguous; within them, `v` owns `1 + deg(v)` slots:
/// slot 0 is `s = v`, slot `1 + j` is `s` = the `j`-th neighbor of `v`.
#[derive(Debug, Clone)]
pub struct DpTable {
    root: VertexId,
    g_order: usize,
    stride: usize,
    offsets: Vec<usize>,
    values: Vec<ExtendedWeight>,
    matchings: Option<Vec<Box<[(VertexId, VertexId)]>>>,
}

impl DpTable {
    fn new(g: &Tree, h: &Tree, root: VertexId, mode: TableMode) -> Self {
        let mut offsets = Vec::with_capacity(h.len());
        let mut next = 0;
        for v in 0..h.len() {
            offsets.push(next);
            next += 1 + h.degree(v);
        }
        let stride = next;
        let size = g.len() * stride;
        DpTable {
            root,
            g_order: g.len(),
            stride,
            offsets,
            values: vec![ExtendedWeight::NEG_INFINITY; size],
            matchings: (mode == TableMode::Traceback).then(|| vec![Box::default(); size]),
        }
    }

    /// Root of the first tree used by the pass.
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn mode(&self) -> TableMode {
        if self.matchings.is_some() {
            TableMode::Traceback
        } else {
            TableMode::WeightOnly
        }
    }

    /// Number of stored entries, `|G| * (3|H| - 2)`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn index(&self, u: VertexId, v: VertexId, slot: usize) -> usize {
        u * self.stride + self.offsets[v] + slot
    }

    fn slot(h: &Tree, s: VertexId, v: VertexId) -> Option<usize> {
        if s == v {
            Some(0)
        } else {
            h.neighbor_position(v, s).map(|p| p + 1)
        }
    }

    /// `D(u, s, v)`, or `None` if `s` is neither `v` nor a neighbor of `v`.
    pub fn get(&self, h: &Tree, u: VertexId, s: VertexId, v: VertexId) -> Option<ExtendedWeight> {
        Self::slot(h, s, v).map(|slot| self.values[self.index(u, v, slot)])
    }

    /// The (child of u, neighbor of v) pairs matched in entry `D(u, s, v)`.
    pub fn matching(&self, h: &Tree, u: VertexId, s: VertexId, v: VertexId) -> Option<&[(VertexId, VertexId)]> {
        let slot = Self::slot(h, s, v)?;
        self.matchings.as_ref().map(|m| &*m[self.index(u, v, slot)])
    }

    /// The maximum entry and the first `(u, s, v)` attaining it in storage order.
    pub fn maximum(&self, h: &Tree) -> (ExtendedWeight, Option<(VertexId, VertexId, VertexId)>) {
        let mut best = ExtendedWeight::NEG_INFINITY;
        let mut at = None;
        for u in 0..self.g_order {
            for v in 0..h.len() {
                for slot in 0..=h.degree(v) {
                    let x = self.values[self.index(u, v, slot)];
                    if x.is_finite() && (at.is_none() || x > best) {
                        best = x;
                        let s = if slot == 0 { v } else { h.incidences(v)[slot - 1].neighbor };
                        at = Some((u, s, v));
                    }
                }
            }
        }
        (best, at)
    }
}

/// Label-interned weight lookups for one pair of trees.
#[derive(Debug, Clone)]
pub(crate) struct WeightMatrix {
    g_vertex: Vec<usize>,
    h_vertex: Vec<usize>,
    vertex_cols: usize,
    vertex: Vec<f64>,
    g_edge: Vec<usize>,
    h_edge: Vec<usize>,
    edge_cols: usize,
    edge: Vec<f64>,
}

fn intern<'a>(labels: impl Iterator<Item = &'a str>, pool: &mut Vec<&'a str>) -> Vec<usize> {
    let mut ids: HashMap<&str, usize> = pool.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    labels
        .map(|l| {
            *ids.entry(l).or_insert_with(|| {
                pool.push(l);
                pool.len() - 1
            })
        })
        .collect()
}

impl WeightMatrix {
    pub(crate) fn new(g: &Tree, h: &Tree, model: &WeightModel) -> Self {
        let mut gv = Vec::new();
        let g_vertex = intern(g.labels().iter().map(String::as_str), &mut gv);
        let mut hv = Vec::new();
        let h_vertex = intern(h.labels().iter().map(String::as_str), &mut hv);
        let vertex = gv.iter().flat_map(|a| hv.iter().map(|b| model.vertex_weight(a, b).value())).collect();

        let mut ge = Vec::new();
        let g_edge = intern(g.edges().iter().map(|e| e.label.as_str()), &mut ge);
        let mut he = Vec::new();
        let h_edge = intern(h.edges().iter().map(|e| e.label.as_str()), &mut he);
        let edge = ge.iter().flat_map(|a| he.iter().map(|b| model.edge_weight(a, b).value())).collect();

        WeightMatrix { g_vertex, h_vertex, vertex_cols: hv.len(), vertex, g_edge, h_edge, edge_cols: he.len(), edge }
    }

    pub(crate) fn vertex(&self, u: VertexId, v: VertexId) -> f64 {
        self.vertex[self.g_vertex[u] * self.vertex_cols + self.h_vertex[v]]
    }

    pub(crate) fn edge(&self, e: usize, f: usize) -> f64 {
        self.edge[self.g_edge[e] * self.edge_cols + self.h_edge[f]]
    }
}

/// Precomputed structure shared by the table pass, extraction and enumeration.
pub(crate) struct Context<'a> {
    pub(crate) g: &'a Tree,
    pub(crate) h: &'a Tree,
    pub(crate) view: RootedView<'a>,
    pub(crate) weights: WeightMatrix,
    /// `(child, edge index)` per vertex of the rooted first tree.
    pub(crate) children: Vec<Vec<(VertexId, usize)>>,
    /// For the `j`-th neighbor `x` of `v`: the slot of `v` among the slots of `x`.
    back_slot: Vec<Vec<usize>>,
}

impl<'a> Context<'a> {
    pub(crate) fn new(g: &'a Tree, h: &'a Tree, model: &WeightModel) -> Self {
        let view = g.rooted_view(0).expect("vertex 0 exists");
        let children = (0..g.len())
            .map(|u| {
                g.incidences(u)
                    .iter()
                    .filter(|inc| u == view.root() || inc.neighbor != view.parent(u))
                    .map(|inc| (inc.neighbor, inc.edge))
                    .collect()
            })
            .collect();
        let back_slot = (0..h.len())
            .map(|v| {
                h.neighbors(v).map(|x| 1 + h.neighbor_position(x, v).expect("adjacency is symmetric")).collect()
            })
            .collect();
        Context { g, h, view, weights: WeightMatrix::new(g, h, model), children, back_slot }
    }

    /// Weight of matching child `c` of `u` (via G edge `e`) to the `j`-th neighbor
    /// of `v`: the edge pair plus the best rooted mapping of `c` below that neighbor.
    pub(crate) fn child_weight(&self, table: &DpTable, e: usize, c: VertexId, v: VertexId, j: usize) -> f64 {
        let inc = self.h.incidences(v)[j];
        let below = table.values[table.index(c, inc.neighbor, self.back_slot[v][j])];
        if below.is_neg_infinity() {
            return f64::NEG_INFINITY;
        }
        self.weights.edge(e, inc.edge) + below.value()
    }

    /// The matching instance of entry `D(u, s, v)`: children of `u` against the
    /// neighbors of `v` other than `s`. Also returns the H vertex of each column.
    pub(crate) fn instance(
        &self,
        table: &DpTable,
        u: VertexId,
        s: VertexId,
        v: VertexId,
    ) -> (BipartiteInstance, Vec<VertexId>) {
        let cols: Vec<usize> = (0..self.h.degree(v)).filter(|&j| self.h.incidences(v)[j].neighbor != s).collect();
        let kids = &self.children[u];
        let inst = BipartiteInstance::from_fn(kids.len(), cols.len(), |a, b| {
            let (c, e) = kids[a];
            let w = self.child_weight(table, e, c, v, cols[b]);
            if w == f64::NEG_INFINITY {
                ExtendedWeight::NEG_INFINITY
            } else {
                ExtendedWeight::finite(w)
            }
        });
        let right = cols.iter().map(|&j| self.h.incidences(v)[j].neighbor).collect();
        (inst, right)
    }

    /// Fills every entry in postorder of the rooted first tree.
    pub(crate) fn fill(&self, mode: TableMode, record: bool) -> (DpTable, SolveStats) {
        let (g, h) = (self.g, self.h);
        let mut table = DpTable::new(g, h, self.view.root(), mode);
        let mut stats = SolveStats::default();
        let mut rg = ReducedGraph::new();

        for &u in self.view.postorder() {
            let kids = &self.children[u];
            for v in 0..h.len() {
                stats.vertex_pairs += 1;
                let own = self.weights.vertex(u, v);
                if own == f64::NEG_INFINITY {
                    continue;
                }
                let slots = 1 + h.degree(v);
                let base_index = table.index(u, v, 0);
                if kids.is_empty() || h.degree(v) == 0 {
                    for slot in 0..slots {
                        table.values[base_index + slot] = ExtendedWeight::finite(own);
                    }
                    continue;
                }

                let l = h.degree(v);
                rg.load(kids.len(), l, |a, b| {
                    let (c, e) = kids[a];
                    self.child_weight(&table, e, c, v, b)
                });
                rg.solve().expect("a reduced graph always admits a perfect matching");
                let base_iterations = rg.iterations();
                table.values[base_index] = ExtendedWeight::finite(own + rg.matching_weight());
                let to_vertices = |pairs: &[(usize, usize)]| -> Box<[(VertexId, VertexId)]> {
                    pairs.iter().map(|&(a, b)| (kids[a].0, h.incidences(v)[b].neighbor)).collect()
                };
                if let Some(store) = table.matchings.as_mut() {
                    store[base_index] = to_vertices(&rg.matching().pairs);
                }

                let mut resolve_iterations = 0;
                let keep = table.matchings.is_some();
                for j in 0..l {
                    let ((w, iters, pairs), _) = rg
                        .with_right_removed(j, |g| {
                            (g.matching_weight(), g.iterations(), keep.then(|| g.matching().pairs))
                        })
                        .expect("deleting one vertex leaves an augmenting path");
                    resolve_iterations += iters - base_iterations;
                    table.values[base_index + 1 + j] = ExtendedWeight::finite(own + w);
                    if let (Some(store), Some(pairs)) = (table.matchings.as_mut(), pairs) {
                        store[base_index + 1 + j] = to_vertices(&pairs);
                    }
                }

                stats.families += 1;
                stats.base_iterations += base_iterations;
                stats.resolve_iterations += resolve_iterations;
                if record {
                    stats.records.push(FamilyRecord {
                        u,
                        v,
                        children: kids.len(),
                        neighbors: l,
                        base_iterations,
                        resolve_iterations,
                    });
                }
            }
        }
        (table, stats)
    }
}

/// Optimum, witness and the filled table of one run.
#[derive(Debug, Clone)]
pub struct McstResult {
    pub weight: ExtendedWeight,
    /// Pairs are (vertex of the first input, vertex of the second input) even
    /// when the run swapped the trees.
    pub witness: Isomorphism,
    /// Table of the pass; indexed by the swapped pair when `swapped` is set.
    pub table: DpTable,
    pub stats: SolveStats,
    pub swapped: bool,
}

/// Maximum common subtree isomorphism of `g` and `h` with a traceback table.
pub fn solve(g: &Tree, h: &Tree, model: &WeightModel) -> McstResult {
    solve_with(g, h, model, SolveOptions::default())
}

pub fn solve_with(g: &Tree, h: &Tree, model: &WeightModel, options: SolveOptions) -> McstResult {
    let swapped = options.swap == SwapPolicy::Auto && g.max_degree() > h.max_degree();
    let (first, second) = if swapped { (h, g) } else { (g, h) };
    let ctx = Context::new(first, second, model);
    let (table, stats) = ctx.fill(options.mode, options.record_families);
    let (weight, _) = table.maximum(second);
    let witness = match options.mode {
        TableMode::Traceback => extract_isomorphism(&table, first, second).unwrap_or_else(|_| Isomorphism::empty()),
        TableMode::WeightOnly => Isomorphism { pairs: Vec::new(), weight },
    };
    let witness = if swapped { witness.inverted() } else { witness };
    McstResult { weight, witness, table, stats, swapped }
}

/// Follows stored matchings down from the first maximum entry.
pub fn extract_isomorphism(table: &DpTable, g: &Tree, h: &Tree) -> Result<Isomorphism, SolveError> {
    let (weight, at) = table.maximum(h);
    let (u, s, v) = at.ok_or(SolveError::EmptyOptimum)?;
    if table.mode() == TableMode::WeightOnly {
        return Err(SolveError::NoTraceback);
    }
    let mut pairs = Vec::new();
    let mut pending = vec![(u, s, v)];
    while let Some((u, s, v)) = pending.pop() {
        pairs.push((u, v));
        let matched = table.matching(h, u, s, v).expect("traceback visits valid entries");
        pending.extend(matched.iter().map(|&(c, x)| (c, v, x)));
    }
    debug_assert!(pairs.iter().all(|&(a, _)| a < g.len()));
    pairs.sort_unstable();
    Ok(Isomorphism { pairs, weight })
}

/// Children of `x` inside the rooted subtree entered from `from` (`from == x`: all neighbors).
fn subtree_children(t: &Tree, x: VertexId, from: VertexId) -> Vec<(VertexId, usize)> {
    t.incidences(x).iter().filter(|inc| inc.neighbor != from).map(|inc| (inc.neighbor, inc.edge)).collect()
}

type RootedKey = (VertexId, VertexId, VertexId, VertexId);

/// Memoized rooted recursion over pairs of rooted subtrees, solving each matching
/// instance from scratch. Independent of the table pass.
struct RootedMemo<'a> {
    g: &'a Tree,
    h: &'a Tree,
    model: &'a WeightModel,
    memo: HashMap<RootedKey, (ExtendedWeight, Vec<(VertexId, VertexId)>)>,
}

impl RootedMemo<'_> {
    /// Best rooted mapping of `G^{gp}_{gx}` onto `H^{hp}_{hx}` sending `gx` to `hx`.
    fn value(&mut self, gx: VertexId, gp: VertexId, hx: VertexId, hp: VertexId) -> ExtendedWeight {
        if let Some((w, _)) = self.memo.get(&(gx, gp, hx, hp)) {
            return *w;
        }
        let own = self.model.vertex_weight(self.g.label(gx), self.h.label(hx));
        if own.is_neg_infinity() {
            self.memo.insert((gx, gp, hx, hp), (own, Vec::new()));
            return own;
        }
        let left = subtree_children(self.g, gx, gp);
        let right = subtree_children(self.h, hx, hp);
        let mut cells = Vec::with_capacity(left.len() * right.len());
        for &(c, e) in &left {
            for &(y, f) in &right {
                let below = self.value(c, gx, y, hx);
                let edge = self.model.edge_weight(&self.g.edge(e).label, &self.h.edge(f).label);
                cells.push(below + edge);
            }
        }
        let inst = BipartiteInstance::new(left.len(), right.len(), cells).expect("dimensions agree");
        let m = solve_mwm(&inst).matching;
        let total = own + m.weight;
        let pairs = m.pairs.iter().map(|&(a, b)| (left[a].0, right[b].0)).collect();
        self.memo.insert((gx, gp, hx, hp), (total, pairs));
        total
    }

    fn witness(&self, gx: VertexId, gp: VertexId, hx: VertexId, hp: VertexId) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        let mut pending = vec![(gx, gp, hx, hp)];
        while let Some((gx, gp, hx, hp)) = pending.pop() {
            out.push((gx, hx));
            let (_, pairs) = &self.memo[&(gx, gp, hx, hp)];
            pending.extend(pairs.iter().map(|&(c, y)| (c, gx, y, hx)));
        }
        out.sort_unstable();
        out
    }
}

fn check_subtree(t: &Tree, id: RootedSubtreeId) -> Result<(), SolveError> {
    let ok = id.root_vertex < t.len()
        && (id.is_whole_tree() || (id.direction_vertex < t.len() && t.edge_between(id.root_vertex, id.direction_vertex).is_some()));
    if ok {
        Ok(())
    } else {
        Err(SolveError::InvalidSubtree(id.root_vertex, id.direction_vertex))
    }
}

/// Best common subtree of two rooted subtrees that maps root onto root.
///
/// A subtree id `(x, p)` stands for `x` and everything not behind its neighbor `p`;
/// `(x, x)` is the whole tree rooted at `x`. With an infinite root pair the weight is
/// `NEG_INFINITY` and the mapping is empty.
pub fn solve_rooted(
    g: &Tree,
    g_root: RootedSubtreeId,
    h: &Tree,
    h_root: RootedSubtreeId,
    model: &WeightModel,
) -> Result<Isomorphism, SolveError> {
    check_subtree(g, g_root)?;
    check_subtree(h, h_root)?;
    let mut memo = RootedMemo { g, h, model, memo: HashMap::new() };
    let (gx, gp, hx, hp) = (g_root.root_vertex, g_root.direction_vertex, h_root.root_vertex, h_root.direction_vertex);
    let weight = memo.value(gx, gp, hx, hp);
    if weight.is_neg_infinity() {
        return Ok(Isomorphism::empty());
    }
    Ok(Isomorphism { pairs: memo.witness(gx, gp, hx, hp), weight })
}

/// Maximum over every pair of roots of the rooted optimum, sharing one memo across
/// all pairs. Used as a reference for [`solve`].
pub fn solve_all_roots(g: &Tree, h: &Tree, model: &WeightModel) -> ExtendedWeight {
    let mut memo = RootedMemo { g, h, model, memo: HashMap::new() };
    let mut best = ExtendedWeight::NEG_INFINITY;
    for r in 0..g.len() {
        for s in 0..h.len() {
            best = best.max(memo.value(r, r, s, s));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_mcst, validate_isomorphism};

    fn unlabeled(n: usize, edges: &[(usize, usize)]) -> Tree {
        Tree::new(vec!["a"; n], edges.iter().map(|&(a, b)| (a, b, "-")).collect()).unwrap()
    }

    fn path(n: usize) -> Tree {
        unlabeled(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
    }

    fn star(n: usize) -> Tree {
        unlabeled(n, &(1..n).map(|i| (0, i)).collect::<Vec<_>>())
    }

    #[test]
    fn table_shape() {
        let (g, h) = (path(4), star(5));
        let r = solve(&g, &h, &WeightModel::Size);
        assert_eq!(r.table.len(), 4 * (3 * 5 - 2));
        assert_eq!(r.weight, ExtendedWeight::from(3));
        assert_eq!(r.table.get(&h, 0, 2, 1), None);
        assert_eq!(r.table.get(&h, 3, 0, 1), Some(ExtendedWeight::ONE));
    }

    #[test]
    fn paths_and_stars() {
        assert_eq!(solve(&path(5), &path(5), &WeightModel::Size).weight, ExtendedWeight::from(5));
        assert_eq!(solve(&star(4), &path(3), &WeightModel::Size).weight, ExtendedWeight::from(3));
        let one = Tree::singleton("x");
        let r = solve(&one, &one, &WeightModel::Size);
        assert_eq!(r.weight, ExtendedWeight::ONE);
        assert_eq!(r.witness.pairs, vec![(0, 0)]);
    }

    #[test]
    fn forbidden_everywhere() {
        let g = Tree::new(vec!["C", "C"], vec![(0, 1, "-")]).unwrap();
        let h = Tree::singleton("N");
        let r = solve(&g, &h, &WeightModel::LabelStrict);
        assert_eq!(r.weight, ExtendedWeight::NEG_INFINITY);
        assert!(r.witness.is_empty());
        assert_eq!(extract_isomorphism(&r.table, &g, &h), Err(SolveError::EmptyOptimum));
    }

    #[test]
    fn weight_only_tables_have_no_witness() {
        let opts = SolveOptions { mode: TableMode::WeightOnly, ..Default::default() };
        let r = solve_with(&path(4), &path(3), &WeightModel::Size, opts);
        assert_eq!(r.weight, ExtendedWeight::from(3));
        assert_eq!(extract_isomorphism(&r.table, &path(4), &path(3)), Err(SolveError::NoTraceback));
    }

    #[test]
    fn rooted_subproblems() {
        let p = path(4);
        let whole = |v| RootedSubtreeId { root_vertex: v, direction_vertex: v };
        let r = solve_rooted(&p, whole(0), &p, whole(1), &WeightModel::Size).unwrap();
        assert_eq!(r.weight, ExtendedWeight::from(3));
        let half = RootedSubtreeId { root_vertex: 1, direction_vertex: 2 };
        let r = solve_rooted(&p, half, &p, whole(0), &WeightModel::Size).unwrap();
        assert_eq!(r.weight, ExtendedWeight::from(2));
        assert_eq!(r.pairs, vec![(0, 1), (1, 0)]);
        let bad = RootedSubtreeId { root_vertex: 0, direction_vertex: 3 };
        assert!(solve_rooted(&p, bad, &p, whole(0), &WeightModel::Size).is_err());
    }

    #[test]
    fn swap_keeps_orientation() {
        let (g, h) = (star(6), path(4));
        let opts = SolveOptions { swap: SwapPolicy::Auto, ..Default::default() };
        let r = solve_with(&g, &h, &WeightModel::Size, opts);
        assert!(r.swapped);
        assert_eq!(r.weight, ExtendedWeight::from(3));
        assert!(validate_isomorphism(&g, &h, &r.witness.pairs, &WeightModel::Size).is_valid());
    }

    #[test]
    fn agrees_with_oracle_on_small_pairs() {
        let trees = [path(1), path(2), path(4), star(5), unlabeled(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)])];
        for g in &trees {
            for h in &trees {
                let (best, _) = brute_force_mcst(g, h, &WeightModel::Size).unwrap();
                let r = solve(g, h, &WeightModel::Size);
                assert_eq!(r.weight, best);
                assert_eq!(solve_all_roots(g, h, &WeightModel::Size), best);
                let v = validate_isomorphism(g, h, &r.witness.pairs, &WeightModel::Size);
                assert!(v.is_valid());
                assert_eq!(v.weight, Some(best));
            }
        }
    }

    #[test]
    fn family_work_is_bounded() {
        let (g, h) = (star(7), star(6));
        let opts = SolveOptions { record_families: true, ..Default::default() };
        let r = solve_with(&g, &h, &WeightModel::Size, opts);
        assert!(!r.stats.records.is_empty());
        for rec in &r.stats.records {
            assert_eq!(rec.base_iterations, rec.children.min(rec.neighbors));
            assert!(rec.resolve_iterations <= rec.children.min(rec.neighbors));
        }
    }
}
