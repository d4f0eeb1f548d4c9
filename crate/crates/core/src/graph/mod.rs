//! Simple undirected graphs, the graph families used as bound witnesses,
//! tensor products and bipartite double covers.
//!
//! Vertices are 0-based in the API. Files and JSON reports use 1-based
//! labels.

mod bipartite;
mod io;

pub use bipartite::{bipartition, BipartiteView, NotBipartite, Orientation};
pub use io::{parse_graph, serialize_graph, ParseError, ParseErrorKind};

use thiserror::Error;

use crate::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("self-loop at vertex {}", .0 + 1)]
    SelfLoop(usize),
    #[error("vertex {} out of range for a graph on {n} vertices", .vertex + 1)]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate edge {{{}, {}}}", .0 + 1, .1 + 1)]
    DuplicateEdge(usize, usize),
}

/// An undirected simple graph on vertices `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted. Adjacency is
/// kept both as sorted neighbor lists and as bitsets.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    neighbor_sets: Vec<VertexSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, out-of-range endpoints and
    /// repeated edges (in either orientation).
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { vertex, n });
                }
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_canonical(n, canon))
    }

    /// `edges` must already be sorted, deduplicated, loop-free, `u < v`.
    fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut neighbors = vec![Vec::new(); n];
        let mut neighbor_sets = vec![VertexSet::new(); n];
        for &(u, v) in &edges {
            neighbors[u].push(v);
            neighbors[v].push(u);
            neighbor_sets[u].insert(v);
            neighbor_sets[v].insert(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Self {
            n,
            edges,
            neighbors,
            neighbor_sets,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn neighbor_set(&self, v: usize) -> &VertexSet {
        &self.neighbor_sets[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.neighbor_sets[u].contains(v)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) == 0).collect()
    }

    /// True when no edge has both endpoints in `set`.
    pub fn is_independent(&self, set: &VertexSet) -> bool {
        self.violating_edge(set).is_none()
    }

    /// Some edge with both endpoints in `set`, if there is one.
    pub fn violating_edge(&self, set: &VertexSet) -> Option<(usize, usize)> {
        set.iter().find_map(|u| {
            self.neighbor_sets[u]
                .intersection(set)
                .iter()
                .find(|&v| v > u)
                .map(|v| (u, v))
        })
    }

    /// Removes every isolated vertex. Returns the reduced graph (remaining
    /// vertices relabeled in increasing order) and the number removed.
    pub fn strip_isolated(&self) -> (Graph, usize) {
        let keep: Vec<usize> = (0..self.n).filter(|&v| self.degree(v) > 0).collect();
        let mut relabel = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            relabel[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (relabel[u], relabel[v]))
            .collect();
        (Self::from_canonical(keep.len(), edges), self.n - keep.len())
    }

    /// Connected components, each as a vertex set, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::singleton(start);
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(u) = stack.pop() {
                for &w in &self.neighbors[u] {
                    if seen.insert(w) {
                        comp.insert(w);
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// `Some(d)` if every vertex has degree `d`. The empty graph has no degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.neighbors.first()?.len();
        (1..self.n).all(|v| self.degree(v) == d).then_some(d)
    }
}

/// `K_d`: `d` vertices, all pairwise adjacent.
pub fn complete_graph(d: usize) -> Result<Graph, GraphError> {
    if d == 0 {
        return Err(GraphError::InvalidParameter(
            "complete graph needs d >= 1".into(),
        ));
    }
    let edges = (0..d)
        .flat_map(|u| (u + 1..d).map(move |v| (u, v)))
        .collect();
    Ok(Graph::from_canonical(d, edges))
}

/// `K_{a,b}` with left side `0..a` and right side `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, GraphError> {
    if a == 0 || b == 0 {
        return Err(GraphError::InvalidParameter(format!(
            "complete bipartite graph needs a, b >= 1 (got a={a}, b={b})"
        )));
    }
    let edges = (0..a)
        .flat_map(|u| (a..a + b).map(move |v| (u, v)))
        .collect();
    Ok(Graph::from_canonical(a + b, edges))
}

/// Path on `n` vertices `0 - 1 - ... - (n-1)`.
pub fn path_graph(n: usize) -> Graph {
    let edges = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_canonical(n, edges)
}

/// Cycle on `n >= 3` vertices.
pub fn cycle_graph(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameter(format!(
            "cycle needs n >= 3 (got {n})"
        )));
    }
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Disjoint union; the i-th graph's vertices are shifted by the total size
/// of the graphs before it.
pub fn disjoint_union<'a>(graphs: impl IntoIterator<Item = &'a Graph>) -> Graph {
    let mut offset = 0;
    let mut edges = Vec::new();
    for g in graphs {
        edges.extend(g.edges.iter().map(|&(u, v)| (u + offset, v + offset)));
        offset += g.n;
    }
    Graph::from_canonical(offset, edges)
}

/// Index of the pair `(u, i)` in a tensor product with a second factor on
/// `h_order` vertices.
pub fn product_index(u: usize, i: usize, h_order: usize) -> usize {
    u * h_order + i
}

/// Tensor (categorical) product: `(g, h) ~ (g', h')` iff `g ~ g'` and `h ~ h'`.
/// The pair `(u, i)` becomes vertex `u * |V(h)| + i`.
pub fn tensor_product(g: &Graph, h: &Graph) -> Graph {
    let m = h.n;
    let mut edges = Vec::with_capacity(2 * g.edge_count() * h.edge_count());
    for &(u, v) in &g.edges {
        for &(i, j) in &h.edges {
            for (a, b) in [
                (product_index(u, i, m), product_index(v, j, m)),
                (product_index(u, j, m), product_index(v, i, m)),
            ] {
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    edges.sort_unstable();
    Graph::from_canonical(g.n * m, edges)
}

/// Vertex `(v, side)` of the double cover `G x K_2`, `side` in `{0, 1}`.
pub fn cover_vertex(v: usize, side: usize) -> usize {
    product_index(v, side, 2)
}

/// `G x K_2` together with the bipartite view whose left side is the copy
/// `{(v, 0)}` and right side the copy `{(v, 1)}`.
pub fn bipartite_double_cover(g: &Graph) -> (Graph, BipartiteView) {
    let k2 = complete_graph(2).expect("K_2 is valid");
    let cover = tensor_product(g, &k2);
    let left: VertexSet = (0..g.n).map(|v| cover_vertex(v, 0)).collect();
    let view = BipartiteView::from_left(cover.clone(), left)
        .expect("double cover is bipartite with the copy split");
    (cover, view)
}
