//! Assignment problems as maximum common subtree instances.
//!
//! An `n × n` assignment matrix becomes two stars with `n` leaves each. Leaf `u_i`
//! of the first star may map to leaf `v_j` of the second with weight
//! `w(i, j) + nN`, the centers map to each other with weight `nN`, and nothing else
//! is allowed. `N` is the largest (shifted) entry, so a mapping of `p` vertex pairs
//! weighs `p·nN` plus the matched entries, and any perfect assignment outweighs
//! every smaller mapping.

use std::str::FromStr;

use thiserror::Error;

use crate::solver::Isomorphism;
use crate::tree::Tree;
use crate::weight::{ExtendedWeight, WeightModel, WeightTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("assignment instance has no rows")]
    EmptyInstance,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("the instance admits no perfect matching ({mapped} of {needed} vertices mapped)")]
    NoPerfectMatching { mapped: usize, needed: usize },
}

/// Square weight matrix; entry `(i, j)` is the weight of assigning row `i` to column `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentInstance {
    n: usize,
    weights: Vec<ExtendedWeight>,
}

impl AssignmentInstance {
    pub fn new(n: usize, weights: Vec<ExtendedWeight>) -> Result<Self, ReductionError> {
        if n == 0 {
            return Err(ReductionError::EmptyInstance);
        }
        if weights.len() != n * n {
            return Err(ReductionError::Parse { line: 0, message: format!("expected {} entries, got {}", n * n, weights.len()) });
        }
        Ok(AssignmentInstance { n, weights })
    }

    pub fn from_rows(rows: &[Vec<Option<i64>>]) -> Result<Self, ReductionError> {
        let weights = rows
            .iter()
            .flatten()
            .map(|c| c.map_or(ExtendedWeight::NEG_INFINITY, |x| ExtendedWeight::finite(x as f64)))
            .collect();
        AssignmentInstance::new(rows.len(), weights)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> ExtendedWeight {
        self.weights[i * self.n + j]
    }

    pub fn weights(&self) -> &[ExtendedWeight] {
        &self.weights
    }

    /// Parses `a <n>` followed by `n` rows of `n` values (`-inf` allowed). Blank
    /// lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let err = |line, message: String| ReductionError::Parse { line, message };

        let (line, header) = lines.next().ok_or_else(|| err(1, "missing `a <n>` header".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("a") {
            return Err(err(line, "expected `a <n>` header".into()));
        }
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err(line, "header needs a non-negative size".into()))?;
        if parts.next().is_some() {
            return Err(err(line, "trailing tokens after size".into()));
        }
        if n == 0 {
            return Err(ReductionError::EmptyInstance);
        }

        let mut weights = Vec::with_capacity(n * n);
        for row in 0..n {
            let (line, text) = lines.next().ok_or_else(|| err(line, format!("missing row {}", row + 1)))?;
            let before = weights.len();
            for token in text.split_whitespace() {
                let w = ExtendedWeight::from_str(token).map_err(|e| err(line, e.to_string()))?;
                weights.push(w);
            }
            if weights.len() - before != n {
                return Err(err(line, format!("expected {n} values, got {}", weights.len() - before)));
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(err(line, "unexpected content after the last row".into()));
        }
        AssignmentInstance::new(n, weights)
    }
}

/// The two stars, their weight model and the constants needed to map an optimum back.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub g: Tree,
    pub h: Tree,
    pub model: WeightModel,
    pub n: usize,
    /// Largest entry after shifting; the per-vertex bonus is `n * big_n`.
    pub big_n: f64,
    /// Added to every finite entry to make the matrix non-negative.
    pub shift: f64,
}

/// Builds the star pair for `instance`. The first star has center 0 and leaf `i + 1`
/// for row `i`; the second has center 0 and leaf `j + 1` for column `j`.
pub fn assignment_to_mcst(instance: &AssignmentInstance) -> Result<Reduction, ReductionError> {
    let n = instance.n;
    if n == 0 {
        return Err(ReductionError::EmptyInstance);
    }
    let finite: Vec<f64> = instance.weights.iter().filter_map(|w| w.finite_value()).collect();
    let min = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let max = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut shift = if min < 0.0 { -min } else { 0.0 };
    // The bonus must be positive, or perfect assignments would not dominate.
    if finite.is_empty() || max + shift <= 0.0 {
        shift += 1.0;
    }
    let big_n = if finite.is_empty() { 1.0 } else { max + shift };
    let bonus = n as f64 * big_n;

    let mut table = WeightTable::new();
    table.set_vertex("c", "d", ExtendedWeight::finite(bonus));
    for i in 0..n {
        for j in 0..n {
            if let Some(w) = instance.weight(i, j).finite_value() {
                table.set_vertex(&format!("u{}", i + 1), &format!("v{}", j + 1), ExtendedWeight::finite(w + shift + bonus));
            }
        }
    }
    table.set_edge("-", "-", ExtendedWeight::ZERO);

    let star = |center: &str, leaf: &str| {
        let labels: Vec<String> =
            std::iter::once(center.to_string()).chain((1..=n).map(|i| format!("{leaf}{i}"))).collect();
        Tree::new(labels, (1..=n).map(|i| (0, i, "-")).collect()).expect("a star is a tree")
    };
    Ok(Reduction { g: star("c", "u"), h: star("d", "v"), model: WeightModel::Table(table), n, big_n, shift })
}

/// A perfect assignment recovered from an optimal mapping of a reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `(row, column)` pairs sorted by row.
    pub pairs: Vec<(usize, usize)>,
    pub weight: f64,
}

/// Reads the perfect matching off an optimal mapping of `reduction`'s stars.
pub fn recover_mwpm(witness: &Isomorphism, reduction: &Reduction) -> Result<Assignment, ReductionError> {
    let n = reduction.n;
    let p = witness.pairs.len();
    if p < n + 1 || !witness.weight.is_finite() {
        return Err(ReductionError::NoPerfectMatching { mapped: p, needed: n + 1 });
    }
    let mut pairs: Vec<(usize, usize)> =
        witness.pairs.iter().filter(|&&(a, _)| a != 0).map(|&(a, b)| (a - 1, b - 1)).collect();
    pairs.sort_unstable();
    let total = witness.weight.value() - (p * n) as f64 * reduction.big_n;
    Ok(Assignment { pairs, weight: total - n as f64 * reduction.shift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve;

    fn round_trip(rows: &[Vec<Option<i64>>]) -> (ExtendedWeight, Result<Assignment, ReductionError>) {
        let inst = AssignmentInstance::from_rows(rows).unwrap();
        let red = assignment_to_mcst(&inst).unwrap();
        let r = solve(&red.g, &red.h, &red.model);
        (r.weight, recover_mwpm(&r.witness, &red))
    }

    #[test]
    fn single_entry() {
        let inst = AssignmentInstance::from_rows(&[vec![Some(5)]]).unwrap();
        let red = assignment_to_mcst(&inst).unwrap();
        assert_eq!(red.model.vertex_weight("u1", "v1"), ExtendedWeight::from(10));
        assert_eq!(red.model.vertex_weight("c", "d"), ExtendedWeight::from(5));
        assert_eq!(red.model.vertex_weight("c", "v1"), ExtendedWeight::NEG_INFINITY);
        let (w, rec) = round_trip(&[vec![Some(5)]]);
        assert_eq!(w, ExtendedWeight::from(15));
        assert_eq!(rec.unwrap(), Assignment { pairs: vec![(0, 0)], weight: 5.0 });
    }

    #[test]
    fn ties_and_identity() {
        let (_, rec) = round_trip(&[vec![Some(1), Some(2)], vec![Some(3), Some(4)]]);
        assert_eq!(rec.unwrap().weight, 5.0);
        let (_, rec) = round_trip(&[vec![Some(1), Some(0)], vec![Some(0), Some(1)]]);
        assert_eq!(rec.unwrap(), Assignment { pairs: vec![(0, 0), (1, 1)], weight: 2.0 });
        let (_, rec) = round_trip(&[vec![Some(-4), Some(-1)], vec![Some(-2), Some(-4)]]);
        assert_eq!(rec.unwrap().weight, -3.0);
        let (_, rec) = round_trip(&[vec![Some(0), Some(0)], vec![Some(0), Some(0)]]);
        assert_eq!(rec.unwrap().weight, 0.0);
    }

    #[test]
    fn missing_perfect_matching() {
        let (_, rec) = round_trip(&[vec![Some(1), Some(2)], vec![None, None]]);
        assert!(matches!(rec, Err(ReductionError::NoPerfectMatching { .. })));
    }

    #[test]
    fn parsing() {
        let inst = AssignmentInstance::parse("# demo\na 2\n1 2\n3 -inf\n").unwrap();
        assert_eq!(inst.weight(1, 1), ExtendedWeight::NEG_INFINITY);
        assert_eq!(inst.weight(0, 1), ExtendedWeight::from(2));
        assert!(matches!(AssignmentInstance::parse("a 2\n1 2\n3\n"), Err(ReductionError::Parse { line: 3, .. })));
        assert!(matches!(AssignmentInstance::parse("b 1\n1\n"), Err(ReductionError::Parse { line: 1, .. })));
        assert_eq!(AssignmentInstance::parse("a 0\n"), Err(ReductionError::EmptyInstance));
    }
}
