//! Weights in the reals extended by a forbidding `-inf`, and the weight models
//! that score vertex and edge pairs of two trees.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use thiserror::Error;

use crate::tree::{Tree, VertexId};

/// A finite real or the absorbing `NEG_INFINITY` sentinel. Never NaN or `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedWeight(f64);

impl ExtendedWeight {
    pub const NEG_INFINITY: ExtendedWeight = ExtendedWeight(f64::NEG_INFINITY);
    pub const ZERO: ExtendedWeight = ExtendedWeight(0.0);
    pub const ONE: ExtendedWeight = ExtendedWeight(1.0);

    /// Wraps a finite value; `-inf` maps to the sentinel. NaN and `+inf` are rejected.
    pub fn new(value: f64) -> Option<Self> {
        if value.is_nan() || value == f64::INFINITY {
            None
        } else {
            Some(ExtendedWeight(value))
        }
    }

    pub fn finite(value: f64) -> Self {
        assert!(value.is_finite(), "finite weight expected, got {value}");
        ExtendedWeight(value)
    }

    pub fn is_finite(self) -> bool {
        self.0 != f64::NEG_INFINITY
    }

    pub fn is_neg_infinity(self) -> bool {
        !self.is_finite()
    }

    /// Raw value; `f64::NEG_INFINITY` for the sentinel.
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn finite_value(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    pub fn scale(self, factor: f64) -> Self {
        assert!(factor > 0.0 && factor.is_finite());
        ExtendedWeight(self.0 * factor)
    }
}

impl Eq for ExtendedWeight {}

impl PartialOrd for ExtendedWeight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedWeight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("weights are never NaN")
    }
}

impl Hash for ExtendedWeight {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // -0.0 and 0.0 compare equal, so hash them alike.
        (self.0 + 0.0).to_bits().hash(state);
    }
}

impl Add for ExtendedWeight {
    type Output = ExtendedWeight;

    fn add(self, rhs: Self) -> Self {
        if self.is_neg_infinity() || rhs.is_neg_infinity() {
            ExtendedWeight::NEG_INFINITY
        } else {
            ExtendedWeight(self.0 + rhs.0)
        }
    }
}

impl Sum for ExtendedWeight {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ExtendedWeight::ZERO, Add::add)
    }
}

impl From<i32> for ExtendedWeight {
    fn from(v: i32) -> Self {
        ExtendedWeight(f64::from(v))
    }
}

impl fmt::Display for ExtendedWeight {
    /// Integral values print without a fractional part; the sentinel prints as `-inf`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_neg_infinity() {
            f.write_str("-inf")
        } else if self.0.fract() == 0.0 && self.0.abs() < 9_007_199_254_740_992.0 {
            write!(f, "{}", self.0 as i64)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid weight {0:?}: expected a finite decimal or -inf")]
pub struct InvalidWeight(pub String);

impl FromStr for ExtendedWeight {
    type Err = InvalidWeight;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-inf" {
            return Ok(ExtendedWeight::NEG_INFINITY);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(ExtendedWeight(v)),
            _ => Err(InvalidWeight(s.to_string())),
        }
    }
}

/// Unordered label pair used as a table key.
fn key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Explicit weights on unordered label pairs with fallbacks.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    vertex: HashMap<(String, String), ExtendedWeight>,
    edge: HashMap<(String, String), ExtendedWeight>,
    pub default_vertex: ExtendedWeight,
    pub default_edge: ExtendedWeight,
}

impl Default for WeightTable {
    fn default() -> Self {
        WeightTable {
            vertex: HashMap::new(),
            edge: HashMap::new(),
            default_vertex: ExtendedWeight::NEG_INFINITY,
            default_edge: ExtendedWeight::NEG_INFINITY,
        }
    }
}

impl WeightTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_vertex(&mut self, a: &str, b: &str, w: ExtendedWeight) {
        self.vertex.insert(key(a, b), w);
    }

    pub fn set_edge(&mut self, a: &str, b: &str, w: ExtendedWeight) {
        self.edge.insert(key(a, b), w);
    }

    pub fn vertex(&self, a: &str, b: &str) -> ExtendedWeight {
        self.vertex.get(&key(a, b)).copied().unwrap_or(self.default_vertex)
    }

    pub fn edge(&self, a: &str, b: &str) -> ExtendedWeight {
        self.edge.get(&key(a, b)).copied().unwrap_or(self.default_edge)
    }

    /// Multiplies every finite entry and default by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        let scale = |m: &HashMap<(String, String), ExtendedWeight>| {
            m.iter().map(|(k, w)| (k.clone(), w.scale(factor))).collect()
        };
        WeightTable {
            vertex: scale(&self.vertex),
            edge: scale(&self.edge),
            default_vertex: self.default_vertex.scale(factor),
            default_edge: self.default_edge.scale(factor),
        }
    }

    /// Parses the line-oriented table format (`default_vertex`, `default_edge`, `v`, `e`).
    pub fn parse(text: &str) -> Result<Self, WeightParseError> {
        let mut table = WeightTable::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| WeightParseError { line: line_no, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let weight = |s: &str| s.parse::<ExtendedWeight>().map_err(|e| err(e.to_string()));
            match fields.as_slice() {
                ["default_vertex", w] => table.default_vertex = weight(w)?,
                ["default_edge", w] => table.default_edge = weight(w)?,
                ["v", a, b, w] => table.set_vertex(a, b, weight(w)?),
                ["e", a, b, w] => table.set_edge(a, b, weight(w)?),
                _ => return Err(err(format!("unrecognized directive {line:?}"))),
            }
        }
        Ok(table)
    }

    /// Serializes in a deterministic order that [`WeightTable::parse`] reads back.
    pub fn to_text(&self) -> String {
        let mut out = format!("default_vertex {}\ndefault_edge {}\n", self.default_vertex, self.default_edge);
        for (tag, map) in [("v", &self.vertex), ("e", &self.edge)] {
            let mut entries: Vec<_> = map.iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            for ((a, b), w) in entries {
                out.push_str(&format!("{tag} {a} {b} {w}\n"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("weight table line {line}: {message}")]
pub struct WeightParseError {
    pub line: usize,
    pub message: String,
}

/// The commutative weight function on vertex and edge label pairs.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightModel {
    /// Every vertex pair scores 1 and every edge pair 0: the optimum is the largest common subtree.
    Size,
    /// Equal labels score as in `Size`; unequal labels are forbidden.
    LabelStrict,
    Table(WeightTable),
}

impl WeightModel {
    pub fn vertex_weight(&self, a: &str, b: &str) -> ExtendedWeight {
        match self {
            WeightModel::Size => ExtendedWeight::ONE,
            WeightModel::LabelStrict if a == b => ExtendedWeight::ONE,
            WeightModel::LabelStrict => ExtendedWeight::NEG_INFINITY,
            WeightModel::Table(t) => t.vertex(a, b),
        }
    }

    pub fn edge_weight(&self, a: &str, b: &str) -> ExtendedWeight {
        match self {
            WeightModel::Size => ExtendedWeight::ZERO,
            WeightModel::LabelStrict if a == b => ExtendedWeight::ZERO,
            WeightModel::LabelStrict => ExtendedWeight::NEG_INFINITY,
            WeightModel::Table(t) => t.edge(a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("mapping is not injective: {0}")]
    NotInjective(String),
    #[error("vertex {vertex} out of range for tree of order {order}")]
    IndexOutOfRange { vertex: VertexId, order: usize },
}

/// Total weight of a vertex mapping from `g` into `h`: every mapped vertex pair plus every
/// edge of `g` whose endpoints are both mapped onto an edge of `h`.
pub fn isomorphism_weight(
    model: &WeightModel,
    g: &Tree,
    h: &Tree,
    mapping: &[(VertexId, VertexId)],
) -> Result<ExtendedWeight, MappingError> {
    let mut image = vec![None; g.len()];
    let mut used = HashSet::new();
    for &(a, b) in mapping {
        if a >= g.len() {
            return Err(MappingError::IndexOutOfRange { vertex: a, order: g.len() });
        }
        if b >= h.len() {
            return Err(MappingError::IndexOutOfRange { vertex: b, order: h.len() });
        }
        if image[a].is_some() {
            return Err(MappingError::NotInjective(format!("vertex {a} of the first tree mapped twice")));
        }
        if !used.insert(b) {
            return Err(MappingError::NotInjective(format!("vertex {b} of the second tree hit twice")));
        }
        image[a] = Some(b);
    }

    let mut total: ExtendedWeight = mapping
        .iter()
        .map(|&(a, b)| model.vertex_weight(g.label(a), h.label(b)))
        .sum();
    for e in g.edges() {
        if let (Some(x), Some(y)) = (image[e.a], image[e.b]) {
            if let Some(f) = h.edge_between(x, y) {
                total = total + model.edge_weight(&e.label, &h.edge(f).label);
            }
        }
    }
    Ok(total)
}
