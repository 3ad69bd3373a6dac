//! Text formats and instance generators.
//!
//! Trees are stored as
//!
//! ```text
//! t <n>
//! v <id> <label>      (n lines, ids 0..n-1)
//! e <id> <id> <label> (n-1 lines)
//! ```
//!
//! with `#` comment lines. Mappings are printed as `weight <w>` followed by one
//! `g -> h` line per pair in ascending `g`.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::solver::Isomorphism;
use crate::tree::{Tree, TreeError, VertexId};
use crate::weight::ExtendedWeight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn index(token: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let t = token.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    t.parse().map_err(|_| syntax(line, format!("invalid {what} `{t}`")))
}

pub fn parse_tree(text: &str) -> Result<Tree, ParseError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| syntax(1, "empty input, expected `t <n>`"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("t") {
        return Err(syntax(line, "expected `t <n>` header"));
    }
    let n = index(parts.next(), line, "vertex count")?;
    if n == 0 {
        return Err(TreeError::Empty.into());
    }

    let mut labels: Vec<Option<String>> = vec![None; n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut last = line;
    for (line, text) in lines {
        last = line;
        let mut parts = text.split_whitespace();
        match parts.next() {
            Some("v") => {
                let id = index(parts.next(), line, "vertex id")?;
                let label = parts.next().ok_or_else(|| syntax(line, "missing vertex label"))?;
                let slot = labels.get_mut(id).ok_or_else(|| syntax(line, format!("vertex id {id} out of range")))?;
                if slot.replace(label.to_string()).is_some() {
                    return Err(syntax(line, format!("vertex {id} defined twice")));
                }
            }
            Some("e") => {
                let a = index(parts.next(), line, "edge endpoint")?;
                let b = index(parts.next(), line, "edge endpoint")?;
                let label = parts.next().ok_or_else(|| syntax(line, "missing edge label"))?;
                edges.push((a, b, label.to_string()));
            }
            Some(other) => return Err(syntax(line, format!("unknown directive `{other}`"))),
            None => unreachable!("blank lines are skipped"),
        }
        if parts.next().is_some() {
            return Err(syntax(line, "trailing tokens"));
        }
    }

    if let Some(id) = labels.iter().position(Option::is_none) {
        return Err(syntax(last, format!("vertex {id} is never defined")));
    }
    if edges.len() < n - 1 {
        return Err(syntax(last, format!("expected {} edges, found {}", n - 1, edges.len())));
    }
    Ok(Tree::new(labels.into_iter().map(Option::unwrap).collect(), edges)?)
}

pub fn serialize_tree(tree: &Tree) -> String {
    let mut out = format!("t {}\n", tree.len());
    for (v, label) in tree.labels().iter().enumerate() {
        writeln!(out, "v {v} {label}").unwrap();
    }
    for e in tree.edges() {
        writeln!(out, "e {} {} {}", e.a, e.b, e.label).unwrap();
    }
    out
}

pub fn format_mapping(iso: &Isomorphism) -> String {
    let mut out = format!("weight {}\n", iso.weight);
    let mut pairs = iso.pairs.clone();
    pairs.sort_unstable();
    for (a, b) in pairs {
        writeln!(out, "{a} -> {b}").unwrap();
    }
    out
}

pub fn parse_mapping(text: &str) -> Result<Isomorphism, ParseError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| syntax(1, "expected `weight <w>`"))?;
    let weight = header
        .strip_prefix("weight ")
        .ok_or_else(|| syntax(line, "expected `weight <w>`"))
        .and_then(|w| ExtendedWeight::from_str(w.trim()).map_err(|e| syntax(line, e.to_string())))?;
    let mut pairs = Vec::new();
    for (line, text) in lines {
        let (a, b) = text.split_once("->").ok_or_else(|| syntax(line, "expected `g -> h`"))?;
        pairs.push((index(Some(a.trim()), line, "vertex")?, index(Some(b.trim()), line, "vertex")?));
    }
    Ok(Isomorphism { pairs, weight })
}

/// Tree where vertex `i >= 1` joins a uniformly chosen earlier vertex.
pub fn gen_random_tree(n: usize, seed: u64) -> Tree {
    random_tree(n, &mut ChaCha8Rng::seed_from_u64(seed), 1)
}

/// Uniform attachment with vertex and edge labels drawn uniformly from
/// `label_count` tokens (`l0`, `l1`, ...). A single label gives unit labels `a` / `-`.
pub fn random_tree(n: usize, rng: &mut impl Rng, label_count: usize) -> Tree {
    assert!(n >= 1 && label_count >= 1);
    let label = |rng: &mut dyn rand::RngCore, unit: &str| {
        if label_count == 1 {
            unit.to_string()
        } else {
            format!("l{}", rng.gen_range(0..label_count))
        }
    };
    let labels: Vec<String> = (0..n).map(|_| label(rng, "a")).collect();
    let edges: Vec<(VertexId, VertexId, String)> =
        (1..n).map(|i| (rng.gen_range(0..i), i, label(rng, "-"))).collect();
    Tree::new(labels, edges).expect("attachment always builds a tree")
}

/// Star with center 0.
pub fn gen_star(n: usize) -> Tree {
    assert!(n >= 1);
    Tree::new(vec!["a"; n], (1..n).map(|i| (0, i, "-")).collect()).expect("a star is a tree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let t = parse_tree("t 2\nv 0 a\nv 1 b\ne 0 1 x").unwrap();
        assert_eq!((t.len(), t.label(1), t.edge(0).label.as_str()), (2, "b", "x"));
        let text = serialize_tree(&gen_random_tree(30, 9));
        assert_eq!(serialize_tree(&parse_tree(&text).unwrap()), text);
        let commented = "# tree\nt 1\n\n# the only vertex\nv 0 z\n";
        assert_eq!(parse_tree(commented).unwrap().label(0), "z");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_tree("t 2\nv 0 a\nv 1 b"), Err(ParseError::Syntax { line: 3, .. })));
        assert!(matches!(parse_tree("t 2\nv 0 a\nv 0 b\ne 0 1 x"), Err(ParseError::Syntax { line: 3, .. })));
        assert!(matches!(parse_tree("x 2"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(parse_tree("t 2\nv 0 a\nv 1 b\ne 0 7 x"), Err(ParseError::Tree(_))));
        assert!(matches!(
            parse_tree("t 3\nv 0 a\nv 1 b\nv 2 c\ne 0 1 x\ne 1 0 y\n"),
            Err(ParseError::Tree(TreeError::DuplicateEdge(0, 1)))
        ));
        assert!(matches!(parse_tree("t 0"), Err(ParseError::Tree(TreeError::Empty))));
    }

    #[test]
    fn generators() {
        assert_eq!(gen_random_tree(1, 3).len(), 1);
        assert_eq!(gen_random_tree(2, 3).edges().len(), 1);
        assert_eq!(gen_random_tree(1000, 42), gen_random_tree(1000, 42));
        assert_ne!(gen_random_tree(50, 1), gen_random_tree(50, 2));
        assert_eq!(gen_star(5).max_degree(), 4);
        assert_eq!(gen_star(2).len(), 2);
        assert_eq!(gen_star(1).len(), 1);
        let labeled = random_tree(40, &mut ChaCha8Rng::seed_from_u64(5), 4);
        assert!(labeled.labels().iter().all(|l| ["l0", "l1", "l2", "l3"].contains(&l.as_str())));
    }

    #[test]
    fn mapping_round_trip() {
        let iso = Isomorphism { pairs: vec![(2, 0), (0, 1)], weight: ExtendedWeight::from(2) };
        let text = format_mapping(&iso);
        assert_eq!(text, "weight 2\n0 -> 1\n2 -> 0\n");
        let back = parse_mapping(&text).unwrap();
        assert_eq!(back.pairs, vec![(0, 1), (2, 0)]);
        assert_eq!(back.weight, iso.weight);
    }
}
