//! Exact enumeration and counting of independent sets.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;
use crate::VertexSet;

/// Largest vertex count `enumerate_independent_sets` accepts by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Memo entries kept per connected subproblem search.
const MEMO_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("graph has {n} vertices, above the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
}

/// The materialized family of independent sets of a graph.
#[derive(Debug, Clone)]
pub struct IndSetFamily<'g> {
    graph: &'g Graph,
    sets: Vec<VertexSet>,
    cardinality: BigUint,
}

impl<'g> IndSetFamily<'g> {
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Members in increasing order of their characteristic vector read as a
    /// binary number with vertex 0 as the least significant bit.
    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn cardinality(&self) -> &BigUint {
        &self.cardinality
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Lists every independent set of `g`, refusing graphs above
/// [`DEFAULT_ENUMERATION_CAP`] vertices.
pub fn enumerate_independent_sets(g: &Graph) -> Result<IndSetFamily<'_>, CountError> {
    enumerate_independent_sets_with_cap(g, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_independent_sets_with_cap(
    g: &Graph,
    cap: usize,
) -> Result<IndSetFamily<'_>, CountError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(CountError::CapExceeded { n, cap });
    }
    let mut sets = Vec::new();
    let mut current = VertexSet::new();
    // Deciding the highest vertex first, "out" before "in", yields the sets
    // in increasing numeric order.
    fn descend(g: &Graph, v: usize, current: &mut VertexSet, out: &mut Vec<VertexSet>) {
        if v == 0 {
            out.push(current.clone());
            return;
        }
        let v = v - 1;
        descend(g, v, current, out);
        if !g.neighbor_set(v).intersects(current) {
            current.insert(v);
            descend(g, v, current, out);
            current.remove(v);
        }
    }
    descend(g, n, &mut current, &mut sets);
    let cardinality = BigUint::from(sets.len());
    Ok(IndSetFamily {
        graph: g,
        sets,
        cardinality,
    })
}

/// Exact `|I(g)|`.
///
/// Branches on a maximum-degree vertex `v` (smallest label on ties):
/// `count(G) = count(G - v) + count(G - v - N(v))`, splitting into connected
/// components before every branch and multiplying their counts. Top-level
/// components are counted in parallel.
pub fn count_independent_sets(g: &Graph) -> BigUint {
    let components = components_within(g, &g.vertices());
    components
        .par_iter()
        .map(|comp| Counter::new(g).count_connected(comp))
        .reduce(BigUint::one, |a, b| a * b)
}

/// `2^a + 2^b - 1`, the count for `K_{a,b}`.
pub fn count_complete_bipartite(a: usize, b: usize) -> BigUint {
    (BigUint::one() << a) + (BigUint::one() << b) - 1u32
}

/// Connected components of the subgraph induced by `within`.
fn components_within(g: &Graph, within: &VertexSet) -> Vec<VertexSet> {
    let mut remaining = within.clone();
    let mut out = Vec::new();
    while let Some(start) = remaining.first() {
        let mut comp = VertexSet::singleton(start);
        let mut frontier = comp.clone();
        remaining.remove(start);
        while !frontier.is_empty() {
            let mut next = VertexSet::new();
            for u in &frontier {
                next.union_with(g.neighbor_set(u));
            }
            let next = next.intersection(&remaining);
            remaining = remaining.difference(&next);
            comp.union_with(&next);
            frontier = next;
        }
        out.push(comp);
    }
    out
}

struct Counter<'g> {
    graph: &'g Graph,
    memo: HashMap<VertexSet, BigUint>,
}

impl<'g> Counter<'g> {
    fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            memo: HashMap::new(),
        }
    }

    fn count(&mut self, set: &VertexSet) -> BigUint {
        if set.is_empty() {
            return BigUint::one();
        }
        components_within(self.graph, set)
            .iter()
            .map(|comp| self.count_connected(comp))
            .product()
    }

    /// `set` induces a connected subgraph.
    fn count_connected(&mut self, set: &VertexSet) -> BigUint {
        match set.len() {
            0 => return BigUint::one(),
            1 => return BigUint::from(2u32),
            // A connected pair is an edge.
            2 => return BigUint::from(3u32),
            _ => {}
        }
        if let Some(hit) = self.memo.get(set) {
            return hit.clone();
        }

        let mut pivot = None;
        let mut best = 0;
        for v in set {
            let deg = self.graph.neighbor_set(v).intersection(set).len();
            if deg > best {
                best = deg;
                pivot = Some(v);
            }
        }
        let v = pivot.expect("connected set of size >= 3 has an edge");
        let mut without_v = set.clone();
        without_v.remove(v);
        let without_closed = without_v.difference(self.graph.neighbor_set(v));
        let total = self.count(&without_v) + self.count(&without_closed);

        if self.memo.len() < MEMO_LIMIT {
            self.memo.insert(set.clone(), total.clone());
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, complete_graph, disjoint_union, path_graph};

    fn labels(family: &IndSetFamily<'_>) -> Vec<Vec<usize>> {
        family.sets().iter().map(VertexSet::to_labels).collect()
    }

    #[test]
    fn enumerate_edgeless() {
        let g = Graph::empty(3);
        let f = enumerate_independent_sets(&g).unwrap();
        assert_eq!(f.len(), 8);
        assert_eq!(f.cardinality(), &BigUint::from(8u32));
    }

    #[test]
    fn enumerate_edge_and_path() {
        let k2 = complete_graph(2).unwrap();
        let f = enumerate_independent_sets(&k2).unwrap();
        assert_eq!(labels(&f), vec![vec![], vec![1], vec![2]]);

        let p3 = path_graph(3);
        let f = enumerate_independent_sets(&p3).unwrap();
        assert_eq!(
            labels(&f),
            vec![vec![], vec![1], vec![2], vec![3], vec![1, 3]]
        );
    }

    #[test]
    fn enumeration_cap() {
        let g = Graph::empty(25);
        assert_eq!(
            enumerate_independent_sets(&g).unwrap_err(),
            CountError::CapExceeded { n: 25, cap: 24 }
        );
        assert!(enumerate_independent_sets_with_cap(&complete_graph(30).unwrap(), 30).is_ok());
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            count_independent_sets(&complete_bipartite(3, 5).unwrap()),
            BigUint::from(39u32)
        );
        assert_eq!(
            count_independent_sets(&complete_bipartite(3, 3).unwrap()),
            BigUint::from(15u32)
        );
        let k2 = complete_graph(2).unwrap();
        assert_eq!(
            count_independent_sets(&disjoint_union([&k2, &k2])),
            BigUint::from(9u32)
        );
        assert_eq!(count_independent_sets(&Graph::empty(0)), BigUint::one());
        assert_eq!(
            count_independent_sets(&Graph::empty(10)),
            BigUint::from(1024u32)
        );
    }

    #[test]
    fn complete_bipartite_closed_form() {
        assert_eq!(count_complete_bipartite(1, 1), BigUint::from(3u32));
        assert_eq!(count_complete_bipartite(4, 4), BigUint::from(31u32));
        assert_eq!(count_complete_bipartite(2, 3), BigUint::from(11u32));
    }

    #[test]
    fn count_beyond_machine_words() {
        // 70 disjoint edges: 3^70 > 2^64.
        let k2 = complete_graph(2).unwrap();
        let g = disjoint_union(std::iter::repeat_n(&k2, 70));
        assert_eq!(count_independent_sets(&g), BigUint::from(3u32).pow(70));
        // Paths satisfy the Fibonacci recurrence: |I(P_n)| = F(n+2).
        let (mut a, mut b) = (BigUint::one(), BigUint::from(2u32));
        for _ in 1..150 {
            let c = &a + &b;
            a = b;
            b = c;
        }
        assert_eq!(count_independent_sets(&path_graph(150)), b);
    }
}
