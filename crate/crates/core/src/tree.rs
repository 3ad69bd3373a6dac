//! Undirected labeled trees, rooted views and rooted-subtree identifiers.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

/// Dense 0-based vertex index.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("vertex index {index} out of range for {vertex_count} vertices")]
    IndexOutOfRange { index: usize, vertex_count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge set contains a cycle ({edges} edges for {vertices} vertices)")]
    CycleDetected { vertices: usize, edges: usize },
    #[error("graph is disconnected")]
    DisconnectedInput,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub label: String,
}

impl Edge {
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

/// One adjacency entry: the neighbor and the index of the connecting edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: VertexId,
    pub edge: usize,
}

/// A validated undirected tree. Adjacency lists are sorted by neighbor index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    labels: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Incidence>>,
}

impl Tree {
    /// Builds and validates a tree from vertex labels and labeled edges.
    pub fn new<L, E>(vertex_labels: Vec<L>, edges: Vec<(VertexId, VertexId, E)>) -> Result<Self, TreeError>
    where
        L: Into<String>,
        E: Into<String>,
    {
        let n = vertex_labels.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut list = Vec::with_capacity(edges.len());
        for (a, b, label) in edges {
            for index in [a, b] {
                if index >= n {
                    return Err(TreeError::IndexOutOfRange { index, vertex_count: n });
                }
            }
            if a == b {
                return Err(TreeError::SelfLoop(a));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(TreeError::DuplicateEdge(a.min(b), a.max(b)));
            }
            list.push(Edge { a, b, label: label.into() });
        }

        let mut adjacency = vec![Vec::new(); n];
        for (i, e) in list.iter().enumerate() {
            adjacency[e.a].push(Incidence { neighbor: e.b, edge: i });
            adjacency[e.b].push(Incidence { neighbor: e.a, edge: i });
        }
        for adj in &mut adjacency {
            adj.sort_by_key(|inc| inc.neighbor);
        }

        // Connectivity first: a forest with too few edges reports as disconnected.
        let mut reached = vec![false; n];
        let mut queue = VecDeque::from([0]);
        reached[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for inc in &adjacency[v] {
                if !reached[inc.neighbor] {
                    reached[inc.neighbor] = true;
                    count += 1;
                    queue.push_back(inc.neighbor);
                }
            }
        }
        if list.len() > n - 1 {
            return Err(TreeError::CycleDetected { vertices: n, edges: list.len() });
        }
        if count != n {
            return Err(TreeError::DisconnectedInput);
        }

        Ok(Tree {
            labels: vertex_labels.into_iter().map(Into::into).collect(),
            edges: list,
            adjacency,
        })
    }

    /// Single-vertex tree.
    pub fn singleton(label: impl Into<String>) -> Self {
        Tree::new::<_, String>(vec![label.into()], Vec::new()).expect("singleton is a tree")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn incidences(&self, v: VertexId) -> &[Incidence] {
        &self.adjacency[v]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v].iter().map(|inc| inc.neighbor)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Index of the edge joining `a` and `b`, if any.
    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<usize> {
        let adj = &self.adjacency[a];
        adj.binary_search_by_key(&b, |inc| inc.neighbor).ok().map(|i| adj[i].edge)
    }

    /// Position of `b` in the adjacency list of `a`.
    pub fn neighbor_position(&self, a: VertexId, b: VertexId) -> Option<usize> {
        self.adjacency[a].binary_search_by_key(&b, |inc| inc.neighbor).ok()
    }

    pub fn rooted_view(&self, root: VertexId) -> Result<RootedView<'_>, TreeError> {
        RootedView::new(self, root)
    }

    /// Every rooted subtree: the whole tree at each vertex plus one subtree per edge direction.
    pub fn all_rooted_subtrees(&self) -> Vec<RootedSubtreeId> {
        let mut out = Vec::with_capacity(3 * self.len() - 2);
        for v in 0..self.len() {
            out.push(RootedSubtreeId { root_vertex: v, direction_vertex: v });
            for u in self.neighbors(v) {
                out.push(RootedSubtreeId { root_vertex: v, direction_vertex: u });
            }
        }
        out
    }
}

/// The tree seen from a fixed root. Children are in ascending vertex order.
#[derive(Debug, Clone)]
pub struct RootedView<'t> {
    tree: &'t Tree,
    root: VertexId,
    parent: Vec<VertexId>,
    children: Vec<Vec<VertexId>>,
    postorder: Vec<VertexId>,
    depth: Vec<usize>,
}

impl<'t> RootedView<'t> {
    pub fn new(tree: &'t Tree, root: VertexId) -> Result<Self, TreeError> {
        let n = tree.len();
        if root >= n {
            return Err(TreeError::IndexOutOfRange { index: root, vertex_count: n });
        }
        let mut parent = vec![root; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        let mut postorder = Vec::with_capacity(n);

        // Iterative DFS; a vertex is emitted once all of its children are done.
        let mut stack = vec![(root, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, next) = *top;
            let adj = tree.incidences(v);
            if next < adj.len() {
                top.1 += 1;
                let w = adj[next].neighbor;
                if v != root && w == parent[v] {
                    continue;
                }
                parent[w] = v;
                depth[w] = depth[v] + 1;
                children[v].push(w);
                stack.push((w, 0));
            } else {
                postorder.push(v);
                stack.pop();
            }
        }

        Ok(RootedView { tree, root, parent, children, postorder, depth })
    }

    pub fn tree(&self) -> &'t Tree {
        self.tree
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn parent(&self, v: VertexId) -> VertexId {
        self.parent[v]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    pub fn postorder(&self) -> &[VertexId] {
        &self.postorder
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v]
    }
}

/// Identifies the rooted subtree containing `root_vertex` and everything on its side
/// of the edge to `direction_vertex`; `direction_vertex == root_vertex` means the whole tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedSubtreeId {
    pub root_vertex: VertexId,
    pub direction_vertex: VertexId,
}

impl RootedSubtreeId {
    pub fn is_whole_tree(&self) -> bool {
        self.root_vertex == self.direction_vertex
    }
}
