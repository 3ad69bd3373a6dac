//! Maximum common subtree isomorphism between unrooted, unordered trees under an
//! arbitrary weight function on mapped vertex and edge pairs.
//!
//! The solver fixes a root in the first tree and fills a table over all rooted
//! subtrees of the second tree. For each vertex pair the bipartite matching
//! instances of every rooting of the second tree differ by one deleted vertex,
//! so they are solved as one family with the Hungarian method, reusing the dual
//! solution of the full instance.

pub mod bench;
pub mod enumerate;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod reductions;
pub mod solver;
pub mod tree;
pub mod weight;

pub use enumerate::{count_all, enumerate_all, EnumerateError, EnumerationStream};
pub use matching::{
    enumerate_mwms, solve_mwm, solve_mwm_family, BipartiteInstance, DualSolution, Matching, MwmEnumerator,
    ReducedGraph,
};
pub use reductions::{assignment_to_mcst, recover_mwpm, AssignmentInstance, Reduction};
pub use solver::{
    extract_isomorphism, solve, solve_all_roots, solve_rooted, solve_with, DpTable, Isomorphism, McstResult,
    SolveOptions, SwapPolicy, TableMode,
};
pub use tree::{RootedSubtreeId, RootedView, Tree, TreeError, VertexId};
pub use weight::{isomorphism_weight, ExtendedWeight, WeightModel, WeightTable};
