//! The swap injection `I(G) x I(G) -> I(G x K_2)`.
//!
//! A pair `(s0, s1)` first becomes `s0 x {0} u s1 x {1}`. That set can
//! contain edges of the double cover, exactly the *conflict edges*
//! `{i, j}` of `G` with `i in s0` and `j in s1`. A swap set `T` holding
//! one endpoint of each conflict edge is chosen canonically, and every
//! vertex of `T` moves to the other copy. The conflict edges reappear in
//! the image as edges inside one copy, so the same `T` is recomputed from
//! the image and the swap undone.
//!
//! `T` is the first valid subset under the order (size, then lexicographic
//! on sorted members). That subset uses only conflict vertices and, in
//! each connected component of the conflict graph, takes the smaller color
//! class, or on a tie the class holding the component's smallest vertex.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::count::count_independent_sets;
use crate::graph::{bipartite_double_cover, cover_vertex, Graph};
use crate::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InjectionError {
    #[error("set is not independent: edge {{{}, {}}} lies inside it", .0 + 1, .1 + 1)]
    NotIndependent(usize, usize),
    #[error("image is not independent in the double cover: edge {{{}, {}}}", .0 + 1, .1 + 1)]
    ImageNotIndependent(usize, usize),
    #[error("conflict graph is not bipartite (edge {{{}, {}}})", .0 + 1, .1 + 1)]
    ConflictNotBipartite(usize, usize),
}

/// Everything the forward map computes for one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectionState {
    pub s0: VertexSet,
    pub s1: VertexSet,
    /// Conflict edges `(min, max)`, sorted.
    pub conflicts: Vec<(usize, usize)>,
    pub swap: VertexSet,
    /// Image in double-cover indexing: `(v, side)` is `2v + side`.
    pub image: VertexSet,
}

impl InjectionState {
    /// The image as sorted `(vertex, side)` pairs with 1-based vertices.
    pub fn image_pairs(&self) -> Vec<(usize, usize)> {
        image_pairs(&self.image)
    }
}

/// `(vertex, side)` pairs, vertices 1-based, for a double-cover vertex set.
pub fn image_pairs(image: &VertexSet) -> Vec<(usize, usize)> {
    image.iter().map(|x| (x / 2 + 1, x % 2)).collect()
}

fn require_independent(g: &Graph, s: &VertexSet) -> Result<(), InjectionError> {
    match g.violating_edge(s) {
        Some((u, v)) => Err(InjectionError::NotIndependent(u, v)),
        None => Ok(()),
    }
}

/// Edges `{i, j}` of `g` with `i in s0` and `j in s1`, as sorted `(min, max)`.
pub fn conflict_edges(
    g: &Graph,
    s0: &VertexSet,
    s1: &VertexSet,
) -> Result<Vec<(usize, usize)>, InjectionError> {
    require_independent(g, s0)?;
    require_independent(g, s1)?;
    Ok(crossing_edges(g, s0, s1))
}

fn crossing_edges(g: &Graph, a: &VertexSet, b: &VertexSet) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| (a.contains(u) && b.contains(v)) || (a.contains(v) && b.contains(u)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// The first subset (by size, then lexicographically) containing exactly one
/// endpoint of every edge in `conflicts`. Input order does not matter.
pub fn canonical_swap_set(conflicts: &[(usize, usize)]) -> Result<VertexSet, InjectionError> {
    let mut adjacency: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &(u, v) in conflicts {
        adjacency.entry(u).or_default().push(v);
        adjacency.entry(v).or_default().push(u);
    }
    let mut color: std::collections::HashMap<usize, bool> = Default::default();
    let mut swap = VertexSet::new();
    // BTreeMap iteration visits each component first at its smallest vertex.
    for &start in adjacency.keys() {
        if color.contains_key(&start) {
            continue;
        }
        let mut classes = [Vec::new(), Vec::new()];
        color.insert(start, true);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let cu = color[&u];
            classes[usize::from(!cu)].push(u);
            for &w in &adjacency[&u] {
                match color.get(&w) {
                    None => {
                        color.insert(w, !cu);
                        stack.push(w);
                    }
                    Some(&cw) if cw == cu => {
                        return Err(InjectionError::ConflictNotBipartite(u.min(w), u.max(w)));
                    }
                    Some(_) => {}
                }
            }
        }
        // classes[0] holds `start`, the component minimum; it wins ties.
        let pick = if classes[1].len() < classes[0].len() {
            1
        } else {
            0
        };
        swap.extend(classes[pick].iter().copied());
    }
    Ok(swap)
}

fn swap_sides(s0: &VertexSet, s1: &VertexSet, swap: &VertexSet) -> (VertexSet, VertexSet) {
    let side0 = s0.difference(swap).union(&s1.intersection(swap));
    let side1 = s1.difference(swap).union(&s0.intersection(swap));
    (side0, side1)
}

fn to_cover(side0: &VertexSet, side1: &VertexSet) -> VertexSet {
    side0
        .iter()
        .map(|v| cover_vertex(v, 0))
        .chain(side1.iter().map(|v| cover_vertex(v, 1)))
        .collect()
}

fn from_cover(image: &VertexSet) -> (VertexSet, VertexSet) {
    let side = |s| image.iter().filter(|x| x % 2 == s).map(|x| x / 2).collect();
    (side(0), side(1))
}

/// Forward map with all intermediate data.
pub fn injection_state(
    g: &Graph,
    s0: &VertexSet,
    s1: &VertexSet,
) -> Result<InjectionState, InjectionError> {
    let conflicts = conflict_edges(g, s0, s1)?;
    let swap = canonical_swap_set(&conflicts)?;
    let (side0, side1) = swap_sides(s0, s1, &swap);
    Ok(InjectionState {
        s0: s0.clone(),
        s1: s1.clone(),
        conflicts,
        swap,
        image: to_cover(&side0, &side1),
    })
}

/// The image of `(s0, s1)`, an independent set of `G x K_2` in double-cover
/// indexing.
pub fn zhao_map(g: &Graph, s0: &VertexSet, s1: &VertexSet) -> Result<VertexSet, InjectionError> {
    injection_state(g, s0, s1).map(|st| st.image)
}

/// Recovers `(s0, s1)` from an image. Returns `Ok(None)` for independent
/// sets of the double cover that are not images of any pair.
pub fn zhao_inverse(
    g: &Graph,
    image: &VertexSet,
) -> Result<Option<(VertexSet, VertexSet)>, InjectionError> {
    let (side0, side1) = from_cover(image);
    if let Some(&(u, v)) = crossing_edges(g, &side0, &side1).first() {
        return Err(InjectionError::ImageNotIndependent(u, v));
    }
    if side0
        .iter()
        .chain(side1.iter())
        .any(|v| v >= g.vertex_count())
    {
        return Ok(None);
    }
    let inside: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| {
            (side0.contains(u) && side0.contains(v)) || (side1.contains(u) && side1.contains(v))
        })
        .collect();
    let Ok(swap) = canonical_swap_set(&inside) else {
        return Ok(None);
    };
    let (s0, s1) = swap_sides(&side0, &side1, &swap);
    match zhao_map(g, &s0, &s1) {
        Ok(back) if back == *image => Ok(Some((s0, s1))),
        _ => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZhaoCheck {
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub count_squared: BigUint,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub cover_count: BigUint,
    pub pass: bool,
}

/// Exact check of `|I(G)|^2 <= |I(G x K_2)|`.
pub fn verify_zhao_inequality(g: &Graph) -> ZhaoCheck {
    let count = count_independent_sets(g);
    let (cover, _) = bipartite_double_cover(g);
    let cover_count = count_independent_sets(&cover);
    let count_squared = &count * &count;
    let pass = count_squared <= cover_count;
    ZhaoCheck {
        count_squared,
        cover_count,
        pass,
    }
}
