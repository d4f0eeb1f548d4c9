use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use super::Graph;
use crate::VertexSet;

/// An edge with both endpoints on the same side: witness that a proposed
/// split (or any split) is not a bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("graph is not bipartite: edge {{{}, {}}} closes an odd cycle", .u + 1, .v + 1)]
pub struct NotBipartite {
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Default,
    Flipped,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Default => Orientation::Flipped,
            Orientation::Flipped => Orientation::Default,
        }
    }
}

/// A bipartite graph with a chosen left/right split and the degree-indexed
/// pieces of each side.
///
/// For each left degree `d`, `left_class(d)` holds the left vertices of
/// degree `d` (these partition the left side) and `right_class(d)` holds
/// the right vertices adjacent to at least one of them (these may overlap
/// across different `d`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteView {
    graph: Graph,
    left: VertexSet,
    right: VertexSet,
    orientation: Orientation,
    left_degrees: BTreeSet<usize>,
    right_degrees: BTreeSet<usize>,
    left_by_degree: BTreeMap<usize, VertexSet>,
    right_by_degree: BTreeMap<usize, VertexSet>,
}

impl BipartiteView {
    /// View with the given left side; everything else is right. Fails if an
    /// edge stays inside one side.
    pub fn from_left(graph: Graph, left: VertexSet) -> Result<Self, NotBipartite> {
        Self::with_orientation(graph, left, Orientation::Default)
    }

    fn with_orientation(
        graph: Graph,
        left: VertexSet,
        orientation: Orientation,
    ) -> Result<Self, NotBipartite> {
        let left = left.intersection(&graph.vertices());
        if let Some(&(u, v)) = graph
            .edges()
            .iter()
            .find(|&&(u, v)| left.contains(u) == left.contains(v))
        {
            return Err(NotBipartite { u, v });
        }
        let right = graph.vertices().difference(&left);

        let mut left_by_degree: BTreeMap<usize, VertexSet> = BTreeMap::new();
        for v in &left {
            left_by_degree.entry(graph.degree(v)).or_default().insert(v);
        }
        let right_by_degree = left_by_degree
            .iter()
            .map(|(&d, class)| {
                let mut adjacent = VertexSet::new();
                for v in class {
                    adjacent.union_with(graph.neighbor_set(v));
                }
                (d, adjacent)
            })
            .collect();
        let left_degrees = left_by_degree.keys().copied().collect();
        let right_degrees = right.iter().map(|v| graph.degree(v)).collect();

        Ok(Self {
            graph,
            left,
            right,
            orientation,
            left_degrees,
            right_degrees,
            left_by_degree,
            right_by_degree,
        })
    }

    /// Swaps the sides and recomputes the degree classes.
    pub fn flip(&self) -> Self {
        Self::with_orientation(
            self.graph.clone(),
            self.right.clone(),
            self.orientation.flipped(),
        )
        .expect("swapping the sides of a bipartition is a bipartition")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn left(&self) -> &VertexSet {
        &self.left
    }

    pub fn right(&self) -> &VertexSet {
        &self.right
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Distinct degrees among left vertices.
    pub fn left_degrees(&self) -> &BTreeSet<usize> {
        &self.left_degrees
    }

    /// Distinct degrees among right vertices.
    pub fn right_degrees(&self) -> &BTreeSet<usize> {
        &self.right_degrees
    }

    /// Left vertices of degree `d`.
    pub fn left_class(&self, d: usize) -> Option<&VertexSet> {
        self.left_by_degree.get(&d)
    }

    /// Right vertices adjacent to some left vertex of degree `d`.
    pub fn right_class(&self, d: usize) -> Option<&VertexSet> {
        self.right_by_degree.get(&d)
    }

    /// `(d, left_class(d), right_class(d))` in increasing `d`.
    pub fn classes(&self) -> impl Iterator<Item = (usize, &VertexSet, &VertexSet)> {
        self.left_by_degree
            .iter()
            .map(|(&d, l)| (d, l, &self.right_by_degree[&d]))
    }

    /// True when every left vertex has the same degree.
    pub fn is_left_regular(&self) -> bool {
        self.left_degrees.len() <= 1
    }
}

/// Two-colors `g`. In every component the side holding the component's
/// smallest vertex becomes left.
pub fn bipartition(g: &Graph) -> Result<BipartiteView, NotBipartite> {
    let mut color: Vec<Option<bool>> = vec![None; g.vertex_count()];
    let mut left = VertexSet::new();
    for start in 0..g.vertex_count() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(true);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("queued vertices are colored");
            if cu {
                left.insert(u);
            }
            for &w in g.neighbors(u) {
                match color[w] {
                    None => {
                        color[w] = Some(!cu);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => {
                        return Err(NotBipartite {
                            u: u.min(w),
                            v: u.max(w),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    BipartiteView::from_left(g.clone(), left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, cycle_graph, disjoint_union, path_graph};

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn complete_bipartite_sides() {
        let view = bipartition(&complete_bipartite(2, 3).unwrap()).unwrap();
        assert_eq!(view.left(), &set(&[0, 1]));
        assert_eq!(view.right(), &set(&[2, 3, 4]));
    }

    #[test]
    fn odd_cycle_is_rejected() {
        assert!(bipartition(&cycle_graph(5).unwrap()).is_err());
    }

    #[test]
    fn path_with_center_first() {
        // a - c - b with c labeled first.
        let g = Graph::new(3, [(0, 1), (0, 2)]).unwrap();
        let view = bipartition(&g).unwrap();
        assert_eq!(view.left(), &set(&[0]));
        assert_eq!(view.right(), &set(&[1, 2]));
        assert_eq!(
            view.left_degrees().iter().copied().collect::<Vec<_>>(),
            vec![2]
        );
        assert_eq!(view.left_class(2), Some(&set(&[0])));
        assert_eq!(view.right_class(2), Some(&set(&[1, 2])));
    }

    #[test]
    fn disconnected_components_orient_by_their_minimum() {
        let g = disjoint_union([&path_graph(2), &path_graph(3)]);
        let view = bipartition(&g).unwrap();
        assert_eq!(view.left(), &set(&[0, 2, 4]));
    }

    #[test]
    fn right_classes_may_overlap() {
        // Left 0 (deg 1) and 1 (deg 2) share right vertex 2.
        let g = Graph::new(4, [(0, 2), (1, 2), (1, 3)]).unwrap();
        let view = BipartiteView::from_left(g, set(&[0, 1])).unwrap();
        assert_eq!(view.right_class(1), Some(&set(&[2])));
        assert_eq!(view.right_class(2), Some(&set(&[2, 3])));
        assert_eq!(
            view.right_degrees().iter().copied().collect::<Vec<_>>(),
            vec![1, 2]
        );
    }

    #[test]
    fn flip_is_an_involution() {
        let view = bipartition(&path_graph(5)).unwrap();
        let flipped = view.flip();
        assert_eq!(flipped.orientation(), Orientation::Flipped);
        assert_eq!(flipped.left_degrees(), view.right_degrees());
        assert_eq!(flipped.flip(), view);
    }

    #[test]
    fn flipped_star_has_leaf_degree_on_the_left() {
        let view = bipartition(&complete_bipartite(1, 2).unwrap()).unwrap();
        assert_eq!(view.left(), &set(&[0]));
        assert_eq!(
            view.flip()
                .left_degrees()
                .iter()
                .copied()
                .collect::<Vec<_>>(),
            vec![1]
        );
    }

    #[test]
    fn from_left_rejects_bad_split() {
        let g = path_graph(3);
        assert_eq!(
            BipartiteView::from_left(g, set(&[0, 1])),
            Err(NotBipartite { u: 0, v: 1 })
        );
    }
}
