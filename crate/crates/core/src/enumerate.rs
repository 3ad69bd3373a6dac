//! Streams every maximum common subtree isomorphism exactly once.
//!
//! Every optimal mapping has a unique vertex `u` of its domain closest to the root
//! of the first tree, and it restricted below `u` is an optimal rooted mapping onto
//! the whole second tree rooted at `v = φ(u)`. So the stream visits the maximum
//! entries `D(u, v, v)` in ascending `(u, v)` order and expands each one through
//! all maximum weight matchings of every entry it reaches.

use std::collections::HashSet;

use thiserror::Error;

use crate::matching::{enumerate_mwms, solve_mwm, MwmEnumerator};
use crate::solver::{Context, DpTable, Isomorphism, TableMode};
use crate::tree::{Tree, VertexId};
use crate::weight::{ExtendedWeight, WeightModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("no common subtree has finite weight")]
    NoSolution,
}

/// Entry `D(u, s, v)` still to be expanded.
#[derive(Debug, Clone, Copy)]
struct Task {
    u: VertexId,
    s: VertexId,
    v: VertexId,
}

#[derive(Debug)]
struct Frame {
    matchings: MwmEnumerator,
    /// H vertex of every column of the entry's instance.
    columns: Vec<VertexId>,
    task: Task,
    /// Entries still open besides this one, and the pairs fixed so far.
    pending: Vec<Task>,
    pairs: Vec<(VertexId, VertexId)>,
}

/// Lazy stream of all maximum common subtree isomorphisms.
pub struct EnumerationStream<'a> {
    ctx: Context<'a>,
    table: DpTable,
    weight: ExtendedWeight,
    anchors: std::vec::IntoIter<(VertexId, VertexId)>,
    stack: Vec<Frame>,
    remaining: Option<usize>,
    seen: Option<HashSet<Vec<(VertexId, VertexId)>>>,
}

impl std::fmt::Debug for EnumerationStream<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EnumerationStream").field("weight", &self.weight).field("depth", &self.stack.len()).finish()
    }
}

/// Optimal mappings of `g` and `h`, at most `limit` of them if given.
pub fn enumerate_all<'a>(
    g: &'a Tree,
    h: &'a Tree,
    model: &WeightModel,
    limit: Option<usize>,
) -> Result<EnumerationStream<'a>, EnumerateError> {
    let ctx = Context::new(g, h, model);
    let (table, _) = ctx.fill(TableMode::WeightOnly, false);
    let (weight, at) = table.maximum(h);
    if at.is_none() {
        return Err(EnumerateError::NoSolution);
    }
    let anchors: Vec<(VertexId, VertexId)> = (0..g.len())
        .flat_map(|u| (0..h.len()).map(move |v| (u, v)))
        .filter(|&(u, v)| table.get(h, u, v, v) == Some(weight))
        .collect();
    let small = g.len() <= 16 && h.len() <= 16;
    Ok(EnumerationStream {
        ctx,
        table,
        weight,
        anchors: anchors.into_iter(),
        stack: Vec::new(),
        remaining: limit,
        seen: (cfg!(debug_assertions) && small).then(HashSet::new),
    })
}

/// Number of optimal mappings, without keeping them.
pub fn count_all(g: &Tree, h: &Tree, model: &WeightModel) -> Result<u64, EnumerateError> {
    Ok(enumerate_all(g, h, model, None)?.map(|_| 1u64).sum())
}

impl EnumerationStream<'_> {
    /// Optimal weight shared by every streamed mapping.
    pub fn weight(&self) -> ExtendedWeight {
        self.weight
    }

    fn open(&self, task: Task, pending: Vec<Task>, pairs: Vec<(VertexId, VertexId)>) -> Frame {
        let (instance, columns) = self.ctx.instance(&self.table, task.u, task.s, task.v);
        let sol = solve_mwm(&instance);
        Frame { matchings: enumerate_mwms(&instance, &sol.matching, &sol.duals, 0.0), columns, task, pending, pairs }
    }

    fn finish(&mut self, mut pairs: Vec<(VertexId, VertexId)>) -> Isomorphism {
        pairs.sort_unstable();
        if let Some(seen) = self.seen.as_mut() {
            assert!(seen.insert(pairs.clone()), "mapping {pairs:?} streamed twice");
        }
        Isomorphism { pairs, weight: self.weight }
    }

    fn advance(&mut self) -> Option<Isomorphism> {
        loop {
            let Some(top) = self.stack.last_mut() else {
                let (u, v) = self.anchors.next()?;
                let task = Task { u, s: v, v };
                let frame = self.open(task, Vec::new(), Vec::new());
                self.stack.push(frame);
                continue;
            };
            let Some(m) = top.matchings.next() else {
                self.stack.pop();
                continue;
            };

            let Task { u, v, .. } = top.task;
            let mut pairs = top.pairs.clone();
            pairs.push((u, v));
            let mut pending = top.pending.clone();
            for &(a, b) in &m.pairs {
                let child = self.ctx.children[u][a].0;
                pending.push(Task { u: child, s: v, v: top.columns[b] });
            }
            match pending.pop() {
                None => return Some(self.finish(pairs)),
                Some(next) => {
                    let frame = self.open(next, pending, pairs);
                    self.stack.push(frame);
                }
            }
        }
    }
}

impl Iterator for EnumerationStream<'_> {
    type Item = Isomorphism;

    fn next(&mut self) -> Option<Isomorphism> {
        if self.remaining == Some(0) {
            return None;
        }
        let out = self.advance()?;
        if let Some(r) = self.remaining.as_mut() {
            *r -= 1;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::oracle::{brute_force_mcst, non_isomorphic_trees, validate_isomorphism};

    fn unlabeled(n: usize, edges: &[(usize, usize)]) -> Tree {
        Tree::new(vec!["a"; n], edges.iter().map(|&(a, b)| (a, b, "-")).collect()).unwrap()
    }

    #[test]
    fn small_counts() {
        let one = Tree::singleton("a");
        assert_eq!(count_all(&one, &one, &WeightModel::Size), Ok(1));
        let claw = unlabeled(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(count_all(&claw, &claw, &WeightModel::Size), Ok(6));
        let p3 = unlabeled(3, &[(0, 1), (1, 2)]);
        assert_eq!(count_all(&p3, &p3, &WeightModel::Size), Ok(2));
    }

    #[test]
    fn no_solution_and_limit() {
        let a = Tree::singleton("C");
        let b = Tree::singleton("N");
        assert_eq!(enumerate_all(&a, &b, &WeightModel::LabelStrict, None).unwrap_err(), EnumerateError::NoSolution);
        let claw = unlabeled(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(enumerate_all(&claw, &claw, &WeightModel::Size, Some(4)).unwrap().count(), 4);
        assert_eq!(enumerate_all(&claw, &claw, &WeightModel::Size, Some(0)).unwrap().count(), 0);
    }

    #[test]
    fn matches_oracle_on_five_vertex_trees() {
        let mut trees = Vec::new();
        for n in 1..=5 {
            trees.extend(non_isomorphic_trees(n));
        }
        for g in &trees {
            for h in &trees {
                let (best, all) = brute_force_mcst(g, h, &WeightModel::Size).unwrap();
                let stream = enumerate_all(g, h, &WeightModel::Size, None).unwrap();
                assert_eq!(stream.weight(), best);
                let listed: Vec<_> = stream.collect();
                for iso in &listed {
                    let v = validate_isomorphism(g, h, &iso.pairs, &WeightModel::Size);
                    assert!(v.is_valid());
                    assert_eq!(v.weight, Some(best));
                }
                let set: BTreeSet<_> = listed.iter().map(|i| i.pairs.clone()).collect();
                assert_eq!(set.len(), listed.len());
                assert_eq!(set, all);
            }
        }
    }
}
