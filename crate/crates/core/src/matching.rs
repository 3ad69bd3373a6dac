//! Maximum weight bipartite matching by the Hungarian method on the reduced graph.
//!
//! The reduced graph `B'` of an instance `B = (V ⊎ U, E)` is `B` plus a disjoint
//! copy of it plus a zero-weight edge between every vertex and its copy. A maximum
//! weight perfect matching of `B'` restricted to original–original edges is a
//! maximum weight matching of `B`. Negative and forbidden edges are dropped first.
//!
//! Solving starts from the feasible duals `d(u) = d(u^C) = 0` on the larger side,
//! `d(v) = d(v^C) = max_u w(vu)` on the smaller side and the matching `{u u^C}`, so
//! only `min(k, l)` augmentations are needed. Deleting one vertex (and its copy)
//! from a solved `B'` leaves two exposed vertices and feasible duals, so each
//! single-vertex deletion is re-solved with exactly one augmentation.
//!
//! `B'` is bipartite with sides
//!
//! ```text
//!   left'  = V_small            ⊎ copies of U_large
//!   right' = U_large            ⊎ copies of V_small
//! ```
//!
//! indexed `0..small` / `small..small+large` on the left and `0..large` /
//! `large..large+small` on the right.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use thiserror::Error;

use crate::weight::ExtendedWeight;

const NIL: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    /// Cannot happen on a well-formed reduced graph, which always has a perfect matching.
    #[error("no augmenting path from an exposed vertex")]
    NoAugmentingPath,
    #[error("the matching is already perfect")]
    AlreadyPerfect,
    #[error("instance has {left}x{right} shape but {len} weights")]
    ShapeMismatch { left: usize, right: usize, len: usize },
    #[error("instance weight {0} is not finite or -inf")]
    InvalidWeight(String),
    #[error("right vertex {0} out of range")]
    IndexOutOfRange(usize),
}

/// Dense weighted complete bipartite graph; `NEG_INFINITY` entries are non-edges.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteInstance {
    left: usize,
    right: usize,
    weights: Vec<ExtendedWeight>,
}

impl BipartiteInstance {
    pub fn new(left: usize, right: usize, weights: Vec<ExtendedWeight>) -> Result<Self, EngineError> {
        if weights.len() != left * right {
            return Err(EngineError::ShapeMismatch { left, right, len: weights.len() });
        }
        Ok(BipartiteInstance { left, right, weights })
    }

    pub fn from_fn(left: usize, right: usize, mut f: impl FnMut(usize, usize) -> ExtendedWeight) -> Self {
        let mut weights = Vec::with_capacity(left * right);
        for i in 0..left {
            for j in 0..right {
                weights.push(f(i, j));
            }
        }
        BipartiteInstance { left, right, weights }
    }

    /// Rows of integers with `None` as a non-edge.
    pub fn from_rows(rows: &[Vec<Option<i64>>]) -> Self {
        let left = rows.len();
        let right = rows.first().map_or(0, Vec::len);
        BipartiteInstance::from_fn(left, right, |i, j| match rows[i][j] {
            Some(w) => ExtendedWeight::finite(w as f64),
            None => ExtendedWeight::NEG_INFINITY,
        })
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn weight(&self, i: usize, j: usize) -> ExtendedWeight {
        self.weights[i * self.right + j]
    }

    /// The instance with right vertex `j` removed; later columns shift down by one.
    pub fn without_right(&self, j: usize) -> BipartiteInstance {
        BipartiteInstance::from_fn(self.left, self.right - 1, |a, b| self.weight(a, if b < j { b } else { b + 1 }))
    }

    pub fn transposed(&self) -> BipartiteInstance {
        BipartiteInstance::from_fn(self.right, self.left, |a, b| self.weight(b, a))
    }
}

/// A set of (left, right) pairs and its total weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub weight: ExtendedWeight,
}

impl Matching {
    pub fn empty() -> Self {
        Matching { pairs: Vec::new(), weight: ExtendedWeight::ZERO }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Dual values on every vertex of the reduced graph, in the instance's orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub left_copy: Vec<f64>,
    pub right_copy: Vec<f64>,
}

impl DualSolution {
    /// Potentials for the matching LP of the original instance: the mean of each
    /// vertex's value and its copy's. They are optimal whenever these duals are.
    pub fn potentials(&self) -> (Vec<f64>, Vec<f64>) {
        let avg = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x + y) / 2.0).collect();
        (avg(&self.left, &self.left_copy), avg(&self.right, &self.right_copy))
    }

    /// Checks `d(x) + d(y) >= w(xy)` on every edge of the reduced graph.
    pub fn check_feasible(&self, instance: &BipartiteInstance, tolerance: f64) -> Result<(), DualViolation> {
        for i in 0..instance.left {
            if self.left[i] + self.left_copy[i] < -tolerance {
                return Err(DualViolation::Infeasible { edge: format!("coupling of left {i}") });
            }
            for j in 0..instance.right {
                let Some(w) = usable(instance.weight(i, j)) else { continue };
                if self.left[i] + self.right[j] < w - tolerance {
                    return Err(DualViolation::Infeasible { edge: format!("original {i}-{j}") });
                }
                if self.left_copy[i] + self.right_copy[j] < w - tolerance {
                    return Err(DualViolation::Infeasible { edge: format!("copy {i}-{j}") });
                }
            }
        }
        for j in 0..instance.right {
            if self.right[j] + self.right_copy[j] < -tolerance {
                return Err(DualViolation::Infeasible { edge: format!("coupling of right {j}") });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualViolation {
    #[error("dual constraint violated on {edge}")]
    Infeasible { edge: String },
    #[error("matched edge {edge} is not tight")]
    NotTight { edge: String },
    #[error("matching is inconsistent at {0}")]
    Inconsistent(String),
}

/// Edges that can appear in a maximum weight matching: finite and non-negative.
fn usable(w: ExtendedWeight) -> Option<f64> {
    w.finite_value().filter(|&x| x >= 0.0)
}

#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    // Min-heap on distance, ties to the smaller index.
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

/// Reusable Hungarian solver state over the reduced graph of one instance.
#[derive(Clone, Default)]
pub struct ReducedGraph {
    transposed: bool,
    small: usize,
    large: usize,
    /// `small × large`, `-inf` where the edge was dropped.
    w: Vec<f64>,
    dual_l: Vec<f64>,
    dual_r: Vec<f64>,
    mate_l: Vec<usize>,
    mate_r: Vec<usize>,
    removed_l: usize,
    removed_r: usize,
    iterations: usize,

    dist_l: Vec<f64>,
    dist_r: Vec<f64>,
    pred_r: Vec<usize>,
    done_r: Vec<bool>,
    seen_l: Vec<usize>,
    seen_r: Vec<usize>,
    heap: BinaryHeap<HeapEntry>,

    saved_dual_l: Vec<f64>,
    saved_dual_r: Vec<f64>,
    saved_mate_l: Vec<usize>,
    saved_mate_r: Vec<usize>,
}

impl fmt::Debug for ReducedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReducedGraph")
            .field("transposed", &self.transposed)
            .field("small", &self.small)
            .field("large", &self.large)
            .field("matched", &self.matching_size())
            .field("iterations", &self.iterations)
            .finish()
    }
}

impl ReducedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the reduced graph of `instance` with seeded duals and matching.
    pub fn seeded(instance: &BipartiteInstance) -> Self {
        let mut g = ReducedGraph::new();
        g.load(instance.left, instance.right, |i, j| instance.weight(i, j).value());
        g
    }

    /// Loads a `left × right` instance given as a raw weight function (`-inf` for
    /// non-edges), reusing buffers. The smaller side becomes the internal `V`.
    pub fn load(&mut self, left: usize, right: usize, weight: impl Fn(usize, usize) -> f64) {
        self.transposed = left > right;
        let (small, large) = if self.transposed { (right, left) } else { (left, right) };
        self.small = small;
        self.large = large;
        self.iterations = 0;
        self.removed_l = NIL;
        self.removed_r = NIL;

        self.w.clear();
        self.w.reserve(small * large);
        for a in 0..small {
            for b in 0..large {
                let x = if self.transposed { weight(b, a) } else { weight(a, b) };
                self.w.push(if x >= 0.0 { x } else { f64::NEG_INFINITY });
            }
        }

        let n = small + large;
        self.dual_l.clear();
        self.dual_r.clear();
        self.dual_l.resize(n, 0.0);
        self.dual_r.resize(n, 0.0);
        for a in 0..small {
            let row = &self.w[a * large..(a + 1) * large];
            let max = row.iter().copied().fold(0.0, f64::max);
            self.dual_l[a] = max;
            self.dual_r[large + a] = max;
        }

        self.mate_l.clear();
        self.mate_r.clear();
        self.mate_l.resize(n, NIL);
        self.mate_r.resize(n, NIL);
        for b in 0..large {
            self.mate_r[b] = small + b;
            self.mate_l[small + b] = b;
        }

        self.dist_l.resize(n, f64::INFINITY);
        self.dist_r.resize(n, f64::INFINITY);
        self.pred_r.resize(n, NIL);
        self.done_r.resize(n, false);
    }

    pub fn left_size(&self) -> usize {
        if self.transposed {
            self.large
        } else {
            self.small
        }
    }

    pub fn right_size(&self) -> usize {
        if self.transposed {
            self.small
        } else {
            self.large
        }
    }

    /// Number of reduced-graph vertices per side that are still present.
    fn side_size(&self) -> usize {
        self.small + self.large - usize::from(self.removed_l != NIL)
    }

    pub fn matching_size(&self) -> usize {
        self.mate_l.iter().filter(|&&m| m != NIL).count()
    }

    pub fn is_perfect(&self) -> bool {
        self.matching_size() == self.side_size()
    }

    /// Augmentations performed since the last `load`.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Weight of the reduced-graph edge between left' `a` and right' `b`, if present.
    fn edge_weight(&self, a: usize, b: usize) -> Option<f64> {
        let (s, l) = (self.small, self.large);
        let x = match (a < s, b < l) {
            (true, true) => self.w[a * l + b],
            (true, false) if b - l == a => 0.0,
            (false, false) => self.w[(b - l) * l + (a - s)],
            (false, true) if a - s == b => 0.0,
            _ => return None,
        };
        (x != f64::NEG_INFINITY).then_some(x)
    }

    fn relax_from(&mut self, a: usize, da: f64) {
        let (s, l) = (self.small, self.large);
        let push = |g: &mut Self, b: usize, w: f64| {
            if b == g.removed_r || g.done_r[b] {
                return;
            }
            let nd = da + g.dual_l[a] + g.dual_r[b] - w;
            if nd < g.dist_r[b] {
                if g.dist_r[b] == f64::INFINITY {
                    g.seen_r.push(b);
                }
                g.dist_r[b] = nd;
                g.pred_r[b] = a;
                g.heap.push(HeapEntry { dist: nd, node: b });
            }
        };
        if a < s {
            for b in 0..l {
                let w = self.w[a * l + b];
                if w != f64::NEG_INFINITY {
                    push(self, b, w);
                }
            }
            push(self, l + a, 0.0);
        } else {
            let j = a - s;
            for i in 0..s {
                let w = self.w[i * l + j];
                if w != f64::NEG_INFINITY {
                    push(self, l + i, w);
                }
            }
            push(self, j, 0.0);
        }
    }

    /// One Hungarian phase: a shortest augmenting path (in reduced costs) from the
    /// lowest-indexed exposed left' vertex, then a dual update keeping every edge
    /// feasible and every path edge tight, then augmentation. Grows the matching by one.
    pub fn hungarian_iteration(&mut self) -> Result<(), EngineError> {
        let start = (0..self.small + self.large)
            .find(|&a| a != self.removed_l && self.mate_l[a] == NIL)
            .ok_or(EngineError::AlreadyPerfect)?;

        self.heap.clear();
        self.seen_l.clear();
        self.seen_r.clear();
        self.dist_l[start] = 0.0;
        self.seen_l.push(start);
        self.relax_from(start, 0.0);

        let mut sink = NIL;
        let mut delta = 0.0;
        while let Some(HeapEntry { dist, node: b }) = self.heap.pop() {
            if self.done_r[b] || dist > self.dist_r[b] {
                continue;
            }
            self.done_r[b] = true;
            let a = self.mate_r[b];
            if a == NIL {
                sink = b;
                delta = dist;
                break;
            }
            self.dist_l[a] = dist;
            self.seen_l.push(a);
            self.relax_from(a, dist);
        }

        let result = if sink == NIL {
            Err(EngineError::NoAugmentingPath)
        } else {
            for &a in &self.seen_l {
                self.dual_l[a] -= delta - self.dist_l[a];
            }
            for &b in &self.seen_r {
                if self.done_r[b] {
                    self.dual_r[b] += delta - self.dist_r[b];
                }
            }
            let mut b = sink;
            loop {
                let a = self.pred_r[b];
                let next = self.mate_l[a];
                self.mate_l[a] = b;
                self.mate_r[b] = a;
                if a == start {
                    break;
                }
                b = next;
            }
            self.iterations += 1;
            Ok(())
        };

        for &a in &self.seen_l {
            self.dist_l[a] = f64::INFINITY;
        }
        for &b in &self.seen_r {
            self.dist_r[b] = f64::INFINITY;
            self.done_r[b] = false;
            self.pred_r[b] = NIL;
        }
        result
    }

    /// Runs Hungarian phases until the reduced graph is perfectly matched.
    pub fn solve(&mut self) -> Result<(), EngineError> {
        while !self.is_perfect() {
            self.hungarian_iteration()?;
        }
        Ok(())
    }

    /// Internal (small, large) pairs of the projected matching.
    fn internal_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.small).filter_map(move |a| {
            let b = self.mate_l[a];
            (b < self.large).then_some((a, b))
        })
    }

    /// Weight of the projected matching on the original instance.
    pub fn matching_weight(&self) -> f64 {
        self.internal_pairs().map(|(a, b)| self.w[a * self.large + b]).sum()
    }

    /// The matching of the original instance: original–original matched edges.
    pub fn matching(&self) -> Matching {
        let mut pairs: Vec<(usize, usize)> = self
            .internal_pairs()
            .map(|(a, b)| if self.transposed { (b, a) } else { (a, b) })
            .collect();
        pairs.sort_unstable();
        Matching { pairs, weight: ExtendedWeight::finite(self.matching_weight()) }
    }

    pub fn duals(&self) -> DualSolution {
        let (s, l) = (self.small, self.large);
        let small_orig = self.dual_l[..s].to_vec();
        let small_copy = self.dual_r[l..l + s].to_vec();
        let large_orig = self.dual_r[..l].to_vec();
        let large_copy = self.dual_l[s..s + l].to_vec();
        if self.transposed {
            DualSolution { left: large_orig, right: small_orig, left_copy: large_copy, right_copy: small_copy }
        } else {
            DualSolution { left: small_orig, right: large_orig, left_copy: small_copy, right_copy: large_copy }
        }
    }

    /// Verifies dual feasibility on every present edge, tightness of every matched
    /// edge and consistency of the mate arrays.
    pub fn validate(&self, tolerance: f64) -> Result<(), DualViolation> {
        let n = self.small + self.large;
        for a in 0..n {
            if a == self.removed_l {
                continue;
            }
            for b in 0..n {
                if b == self.removed_r {
                    continue;
                }
                let Some(w) = self.edge_weight(a, b) else { continue };
                let slack = self.dual_l[a] + self.dual_r[b] - w;
                if slack < -tolerance {
                    return Err(DualViolation::Infeasible { edge: format!("{a}-{b}'") });
                }
                if self.mate_l[a] == b && slack > tolerance {
                    return Err(DualViolation::NotTight { edge: format!("{a}-{b}'") });
                }
            }
            let b = self.mate_l[a];
            if b != NIL && (self.mate_r[b] != a || self.edge_weight(a, b).is_none()) {
                return Err(DualViolation::Inconsistent(format!("left' {a}")));
            }
        }
        Ok(())
    }

    /// The (left', right') reduced-graph vertices holding right vertex `j` of the
    /// instance and its copy, one on each side.
    fn right_vertex_slots(&self, j: usize) -> (usize, usize) {
        if self.transposed {
            (j, self.large + j)
        } else {
            (self.small + j, j)
        }
    }

    /// Whether right vertex `j` of the instance is matched in the projected matching.
    pub fn is_right_matched(&self, j: usize) -> bool {
        if self.transposed {
            self.mate_l[j] < self.large
        } else {
            self.mate_r[j] < self.small
        }
    }

    /// Deletes right vertex `j` (and its copy) from a perfectly matched reduced graph,
    /// re-solves with one augmentation if it was matched, evaluates `f`, and restores
    /// the previous state. The flag reports whether an augmentation was needed.
    pub fn with_right_removed<R>(&mut self, j: usize, f: impl FnOnce(&Self) -> R) -> Result<(R, bool), EngineError> {
        if j >= self.right_size() {
            return Err(EngineError::IndexOutOfRange(j));
        }
        if !self.is_right_matched(j) {
            // Original matched to its own copy: dropping both keeps the matching optimal.
            return Ok((f(self), false));
        }

        self.saved_dual_l.clone_from(&self.dual_l);
        self.saved_dual_r.clone_from(&self.dual_r);
        self.saved_mate_l.clone_from(&self.mate_l);
        self.saved_mate_r.clone_from(&self.mate_r);
        let saved_iterations = self.iterations;

        let (rl, rr) = self.right_vertex_slots(j);
        let partner_of_r = self.mate_r[rr];
        let partner_of_l = self.mate_l[rl];
        self.mate_l[partner_of_r] = NIL;
        self.mate_r[partner_of_l] = NIL;
        self.mate_l[rl] = NIL;
        self.mate_r[rr] = NIL;
        self.removed_l = rl;
        self.removed_r = rr;

        let outcome = self.hungarian_iteration().map(|()| f(self));

        std::mem::swap(&mut self.dual_l, &mut self.saved_dual_l);
        std::mem::swap(&mut self.dual_r, &mut self.saved_dual_r);
        std::mem::swap(&mut self.mate_l, &mut self.saved_mate_l);
        std::mem::swap(&mut self.mate_r, &mut self.saved_mate_r);
        self.removed_l = NIL;
        self.removed_r = NIL;
        self.iterations = saved_iterations;
        outcome.map(|r| (r, true))
    }
}

/// A solved instance: the matching, its certifying duals and the final solver state.
#[derive(Debug, Clone)]
pub struct MwmSolution {
    pub matching: Matching,
    pub duals: DualSolution,
    pub state: ReducedGraph,
}

/// Maximum weight matching of `instance`. Empty instances give the empty matching.
pub fn solve_mwm(instance: &BipartiteInstance) -> MwmSolution {
    let mut state = ReducedGraph::seeded(instance);
    state.solve().expect("a reduced graph always admits a perfect matching");
    MwmSolution { matching: state.matching(), duals: state.duals(), state }
}

/// Maximum weight matchings of an instance and of each single-right-vertex deletion.
#[derive(Debug, Clone)]
pub struct FamilySolution {
    pub base: Matching,
    /// `without_right[j]` is optimal for the instance with right vertex `j` deleted;
    /// pairs keep the original right indices.
    pub without_right: Vec<Matching>,
    /// Augmentations spent on the base instance.
    pub base_iterations: usize,
    /// Deletions that needed a re-solve (each costs exactly one augmentation).
    pub resolves: usize,
}

/// Solves `B` and every `B_j` (right vertex `j` deleted), reusing the duals of `B`.
pub fn solve_mwm_family(instance: &BipartiteInstance) -> FamilySolution {
    let mut state = ReducedGraph::seeded(instance);
    state.solve().expect("a reduced graph always admits a perfect matching");
    let base = state.matching();
    let base_iterations = state.iterations();
    let mut resolves = 0;
    let mut without_right = Vec::with_capacity(instance.right);
    for j in 0..instance.right {
        let (m, triggered) = state
            .with_right_removed(j, ReducedGraph::matching)
            .expect("deleting one vertex leaves an augmenting path");
        resolves += usize::from(triggered);
        without_right.push(m);
    }
    FamilySolution { base, without_right, base_iterations, resolves }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mate {
    Real(usize),
    /// Exposed in the original instance, i.e. matched to its dummy.
    Dummy,
}

#[derive(Debug, Clone)]
struct Frame {
    /// Allowed edges: `k*l` real ones, then `k` left dummies, then `l` right dummies.
    allowed: Vec<bool>,
    mate_l: Vec<Mate>,
    mate_r: Vec<Mate>,
    /// Vertices whose matched edge was fixed by an ancestor branch.
    fixed_l: Vec<bool>,
    fixed_r: Vec<bool>,
}

/// Streams every maximum weight matching of an instance exactly once.
///
/// The optimal duals define the tight subgraph; a matching is optimal iff it uses
/// only tight edges and covers every vertex with a positive potential. Each
/// vertex with zero potential gets a private dummy partner meaning "exposed", so
/// optimal matchings correspond one-to-one to matchings of the augmented graph
/// covering all real vertices. Two such matchings differ by alternating cycles,
/// where alternating paths between dummies are closed through a hub node. Each
/// step finds one directed alternating cycle by DFS and splits the search space
/// on a matched edge of it: solutions containing the edge keep the current
/// matching, solutions avoiding it get the rotated matching, which is emitted.
#[derive(Debug, Clone)]
pub struct MwmEnumerator {
    k: usize,
    l: usize,
    weights: Vec<f64>,
    first: Option<Matching>,
    stack: Vec<Frame>,
}

/// Enumerates all maximum weight matchings of `instance`, starting with `matching`,
/// which must be optimal and certified by `duals`. `tolerance` is the absolute slack
/// below which an edge counts as tight (0 for integer weights).
pub fn enumerate_mwms(
    instance: &BipartiteInstance,
    matching: &Matching,
    duals: &DualSolution,
    tolerance: f64,
) -> MwmEnumerator {
    let (k, l) = (instance.left, instance.right);
    let (yl, yr) = duals.potentials();
    let weights: Vec<f64> = instance.weights.iter().map(|w| usable(*w).unwrap_or(f64::NEG_INFINITY)).collect();

    let mut allowed = Vec::with_capacity(k * l + k + l);
    allowed.extend((0..k * l).map(|e| {
        let w = weights[e];
        w != f64::NEG_INFINITY && (yl[e / l] + yr[e % l] - w).abs() <= tolerance
    }));
    allowed.extend(yl.iter().map(|&y| y.abs() <= tolerance));
    allowed.extend(yr.iter().map(|&y| y.abs() <= tolerance));

    let mut mate_l = vec![Mate::Dummy; k];
    let mut mate_r = vec![Mate::Dummy; l];
    for &(i, j) in &matching.pairs {
        mate_l[i] = Mate::Real(j);
        mate_r[j] = Mate::Real(i);
    }
    debug_assert!(matching.pairs.iter().all(|&(i, j)| allowed[i * l + j]), "matching is not tight");
    debug_assert!((0..k).all(|i| mate_l[i] != Mate::Dummy || allowed[k * l + i]), "exposed vertex with positive dual");
    debug_assert!((0..l).all(|j| mate_r[j] != Mate::Dummy || allowed[k * l + k + j]), "exposed vertex with positive dual");

    MwmEnumerator {
        k,
        l,
        weights,
        first: Some(matching.clone()),
        stack: vec![Frame { allowed, mate_l, mate_r, fixed_l: vec![false; k], fixed_r: vec![false; l] }],
    }
}

/// Nodes of the directed search graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Left(usize),
    Right(usize),
    /// Dummy partner of a left vertex (sits on the right side).
    LeftDummy(usize),
    /// Dummy partner of a right vertex (sits on the left side).
    RightDummy(usize),
    Hub,
}

impl MwmEnumerator {
    fn node_index(&self, n: Node) -> usize {
        let (k, l) = (self.k, self.l);
        match n {
            Node::Left(i) => i,
            Node::Right(j) => k + j,
            Node::LeftDummy(i) => k + l + i,
            Node::RightDummy(j) => 2 * k + l + j,
            Node::Hub => 2 * (k + l),
        }
    }

    /// Out-neighbors of `n` in the alternating digraph of `frame`: unmatched allowed
    /// edges point left to right, matched edges right to left. Left dummies sit on
    /// the right side and right dummies on the left side; the hub closes paths
    /// between dummies into cycles.
    fn successors(&self, frame: &Frame, n: Node, out: &mut Vec<Node>) {
        out.clear();
        let (k, l) = (self.k, self.l);
        let left_dummy_edge = |i: usize| frame.allowed[k * l + i];
        let right_dummy_edge = |j: usize| frame.allowed[k * l + k + j];
        match n {
            Node::Left(i) if !frame.fixed_l[i] => {
                for j in 0..l {
                    if frame.allowed[i * l + j] && !frame.fixed_r[j] && frame.mate_l[i] != Mate::Real(j) {
                        out.push(Node::Right(j));
                    }
                }
                if left_dummy_edge(i) && frame.mate_l[i] != Mate::Dummy {
                    out.push(Node::LeftDummy(i));
                }
            }
            Node::Right(j) if !frame.fixed_r[j] => match frame.mate_r[j] {
                Mate::Real(i) => out.push(Node::Left(i)),
                Mate::Dummy => out.push(Node::RightDummy(j)),
            },
            Node::LeftDummy(i) if !frame.fixed_l[i] => {
                if frame.mate_l[i] == Mate::Dummy {
                    out.push(Node::Left(i));
                } else if left_dummy_edge(i) {
                    out.push(Node::Hub);
                }
            }
            Node::RightDummy(j) if !frame.fixed_r[j] => {
                if frame.mate_r[j] == Mate::Dummy {
                    out.push(Node::Hub);
                } else if right_dummy_edge(j) {
                    out.push(Node::Right(j));
                }
            }
            Node::Hub => {
                for i in 0..k {
                    if !frame.fixed_l[i] && frame.mate_l[i] == Mate::Dummy {
                        out.push(Node::LeftDummy(i));
                    }
                }
                for j in 0..l {
                    if !frame.fixed_r[j] && frame.mate_r[j] != Mate::Dummy && right_dummy_edge(j) {
                        out.push(Node::RightDummy(j));
                    }
                }
            }
            _ => {}
        }
    }

    /// Finds one directed cycle by iterative DFS, returned as its node sequence.
    fn find_cycle(&self, frame: &Frame) -> Option<Vec<Node>> {
        let total = 2 * (self.k + self.l) + 1;
        // 0 = unvisited, 1 = on the DFS stack, 2 = finished
        let mut color = vec![0u8; total];
        let mut buf = Vec::new();
        let roots = (0..self.k).map(Node::Left).chain(std::iter::once(Node::Hub));
        for root in roots {
            if color[self.node_index(root)] != 0 {
                continue;
            }
            self.successors(frame, root, &mut buf);
            color[self.node_index(root)] = 1;
            let mut path: Vec<(Node, Vec<Node>, usize)> = vec![(root, buf.clone(), 0)];
            while let Some((_, succ, pos)) = path.last_mut() {
                if *pos == succ.len() {
                    let (node, _, _) = path.pop().expect("non-empty");
                    color[self.node_index(node)] = 2;
                    continue;
                }
                let next = succ[*pos];
                *pos += 1;
                match color[self.node_index(next)] {
                    0 => {
                        self.successors(frame, next, &mut buf);
                        color[self.node_index(next)] = 1;
                        path.push((next, buf.clone(), 0));
                    }
                    1 => {
                        let start = path.iter().position(|(n, _, _)| *n == next).expect("on stack");
                        return Some(path[start..].iter().map(|(n, _, _)| *n).collect());
                    }
                    _ => {}
                }
            }
        }
        None
    }

    fn project(&self, frame: &Frame) -> Matching {
        let mut pairs = Vec::new();
        let mut weight = 0.0;
        for (i, m) in frame.mate_l.iter().enumerate() {
            if let Mate::Real(j) = *m {
                pairs.push((i, j));
                weight += self.weights[i * self.l + j];
            }
        }
        Matching { pairs, weight: ExtendedWeight::finite(weight) }
    }
}

impl Iterator for MwmEnumerator {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if let Some(first) = self.first.take() {
            return Some(first);
        }
        let (k, l) = (self.k, self.l);
        while let Some(frame) = self.stack.pop() {
            let Some(cycle) = self.find_cycle(&frame) else { continue };

            let mut rotated = frame.clone();
            let mut branch_edge = None;
            for (idx, &from) in cycle.iter().enumerate() {
                let to = cycle[(idx + 1) % cycle.len()];
                match (from, to) {
                    (Node::Left(i), Node::Right(j)) => {
                        rotated.mate_l[i] = Mate::Real(j);
                        rotated.mate_r[j] = Mate::Real(i);
                    }
                    (Node::Left(i), Node::LeftDummy(_)) => rotated.mate_l[i] = Mate::Dummy,
                    (Node::RightDummy(j), Node::Right(_)) => rotated.mate_r[j] = Mate::Dummy,
                    // Matched edges of the current matching.
                    (Node::Right(j), Node::Left(i)) => {
                        branch_edge.get_or_insert(i * l + j);
                    }
                    (Node::LeftDummy(i), Node::Left(_)) => {
                        branch_edge.get_or_insert(k * l + i);
                    }
                    (Node::Right(j), Node::RightDummy(_)) => {
                        branch_edge.get_or_insert(k * l + k + j);
                    }
                    _ => {}
                }
            }
            let edge = branch_edge.expect("every alternating cycle has a matched edge");

            // Solutions avoiding the edge continue from the rotated matching.
            rotated.allowed[edge] = false;
            // Solutions keeping it: both endpoints leave the search.
            let mut keep = frame;
            if edge < k * l {
                keep.fixed_l[edge / l] = true;
                keep.fixed_r[edge % l] = true;
            } else if edge < k * l + k {
                keep.fixed_l[edge - k * l] = true;
            } else {
                keep.fixed_r[edge - k * l - k] = true;
            }

            let out = self.project(&rotated);
            self.stack.push(keep);
            self.stack.push(rotated);
            return Some(out);
        }
        None
    }
}
