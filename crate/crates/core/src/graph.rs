//! Simple undirected graphs with dense `0..N` labels.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Ordered set of vertex labels.
pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("density is undefined for graphs with fewer than 2 vertices (got {0})")]
    UndefinedDensity(usize),
    #[error("operation requires a non-empty graph")]
    EmptyGraph,
}

/// Immutable simple undirected graph.
///
/// Adjacency lists are kept sorted, so iteration order over neighbors and
/// edges is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "EdgeListForm", try_from = "EdgeListForm")]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Serialized form: vertex count plus ascending `(u, v)` pairs with `u < v`.
#[derive(Serialize, Deserialize)]
struct EdgeListForm {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl From<Graph> for EdgeListForm {
    fn from(g: Graph) -> Self {
        EdgeListForm {
            vertex_count: g.vertex_count(),
            edges: g.edges().collect(),
        }
    }
}

impl TryFrom<EdgeListForm> for Graph {
    type Error = GraphError;

    fn try_from(f: EdgeListForm) -> Result<Self, Self::Error> {
        Graph::from_edges(f.vertex_count, f.edges)
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Self-loops, duplicate edges (in
    /// either orientation) and out-of-range labels are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|v| (0..n).filter(|&u| u != v).collect()).collect();
        Graph {
            adj,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path edges are simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle edges are simple")
    }

    /// Star `K_{1,leaves}` with the center at label 0.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star edges are simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().copied().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.adj.len() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                vertex_count: self.adj.len(),
            })
        }
    }

    /// Returns a copy with edge `(u, v)` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        let mut g = self.clone();
        g.try_add_edge(u, v)?;
        Ok(g)
    }

    pub(crate) fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.insert_edge(u, v);
        Ok(())
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        if let Ok(i) = self.adj[u].binary_search(&v) {
            self.adj[u].remove(i);
            let j = self.adj[v].binary_search(&u).expect("adjacency is symmetric");
            self.adj[v].remove(j);
            self.edge_count -= 1;
        }
    }

    fn insert_edge(&mut self, u: usize, v: usize) {
        let i = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(i, v);
        let j = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(j, u);
        self.edge_count += 1;
    }

    /// Same vertex set; `(u, v)` is an edge iff it is not one here.
    pub fn complement(&self) -> Self {
        let n = self.adj.len();
        let mut adj = Vec::with_capacity(n);
        for v in 0..n {
            let mut it = self.adj[v].iter().peekable();
            let mut row = Vec::with_capacity(n - 1 - self.adj[v].len());
            for u in 0..n {
                if it.peek() == Some(&&u) {
                    it.next();
                    continue;
                }
                if u != v {
                    row.push(u);
                }
            }
            adj.push(row);
        }
        Graph {
            adj,
            edge_count: n * n.saturating_sub(1) / 2 - self.edge_count,
        }
    }

    /// Subgraph induced by `keep` (which must be sorted and in range),
    /// relabeled so that `keep[i]` becomes vertex `i`.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Self {
        let mut index = vec![usize::MAX; self.adj.len()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut edge_count = 0;
        let adj: Vec<Vec<usize>> = keep
            .iter()
            .map(|&v| {
                let row: Vec<usize> = self.adj[v]
                    .iter()
                    .filter_map(|&u| (index[u] != usize::MAX).then_some(index[u]))
                    .collect();
                edge_count += row.len();
                row
            })
            .collect();
        Graph {
            adj,
            edge_count: edge_count / 2,
        }
    }

    /// `self - v`, relabeled densely (labels above `v` shift down by one).
    pub fn without_vertex(&self, v: usize) -> Self {
        let keep: Vec<usize> = (0..self.adj.len()).filter(|&u| u != v).collect();
        self.induced_subgraph(&keep)
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation of `0..N`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.adj.len());
        let mut adj = vec![Vec::new(); self.adj.len()];
        for (v, nbrs) in self.adj.iter().enumerate() {
            let mut row: Vec<usize> = nbrs.iter().map(|&u| perm[u]).collect();
            row.sort_unstable();
            adj[perm[v]] = row;
        }
        Graph {
            adj,
            edge_count: self.edge_count,
        }
    }

    /// Edge density `2|E| / (N(N-1))`.
    pub fn density(&self) -> Result<f64, GraphError> {
        let n = self.adj.len();
        if n < 2 {
            return Err(GraphError::UndefinedDensity(n));
        }
        Ok(2.0 * self.edge_count as f64 / (n * (n - 1)) as f64)
    }

    /// Connected components, each sorted, ordered by smallest label.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let v = comp[head];
                head += 1;
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Largest-first greedy coloring: vertices by degree descending, ties by
/// ascending label, each takes the smallest color unused by its colored
/// neighbors. Returns one color per vertex.
pub fn greedy_coloring(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));

    let mut color = vec![usize::MAX; n];
    // stamp[c] == v + 1 marks color c as taken while coloring v
    let mut stamp = vec![0usize; g.max_degree() + 2];
    for &v in &order {
        for &u in g.neighbors(v) {
            let c = color[u];
            if c != usize::MAX && c < stamp.len() {
                stamp[c] = v + 1;
            }
        }
        let c = (0..stamp.len())
            .find(|&c| stamp[c] != v + 1)
            .expect("at most max_degree colors are blocked");
        color[v] = c;
    }
    color
}

/// Number of colors used by [`greedy_coloring`]. Always at least the clique
/// number and at most `max_degree + 1`; `0` for the empty graph.
pub fn greedy_chromatic_upper_bound(g: &Graph) -> usize {
    greedy_coloring(g).into_iter().max().map_or(0, |c| c + 1)
}
