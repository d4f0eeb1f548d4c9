//! Exhaustive sweeps over small labeled graphs.
//!
//! Graphs are enumerated in a fixed order and processed in parallel; every
//! tally is a sum, and recorded failures are sorted by enumeration index, so
//! summaries do not depend on scheduling.

use std::cmp::Ordering;
use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    compare_bound_vs_count, compare_bounds, degree_class_bound, sah_bound, Verdict,
};
use crate::count::{count_independent_sets, enumerate_independent_sets};
use crate::entropy::{audit_bipartite_proof, AuditOptions};
use crate::graph::{bipartite_double_cover, BipartiteView, Graph};
use crate::injection::{verify_zhao_inequality, zhao_inverse, zhao_map};
use crate::{VertexSet, DEFAULT_TOLERANCE};

/// Failure messages kept per summary.
const MAX_RECORDED: usize = 20;

/// Every bipartite graph with left side `0..a` and right side `a..a+b`, one
/// per `a x b` 0/1 matrix (bit `i*b + j` joins `i` and `a + j`), in matrix
/// order.
pub fn bipartite_graphs(a: usize, b: usize) -> impl Iterator<Item = (Graph, BipartiteView)> {
    assert!(a * b < 64, "matrix too large to enumerate");
    (0u64..1 << (a * b)).map(move |mask| bipartite_from_mask(a, b, mask))
}

pub fn bipartite_from_mask(a: usize, b: usize, mask: u64) -> (Graph, BipartiteView) {
    let edges = (0..a * b)
        .filter(|&k| mask >> k & 1 == 1)
        .map(|k| (k / b, a + k % b));
    let g = Graph::new(a + b, edges).expect("matrix edges are simple");
    let left: VertexSet = (0..a).collect();
    let view = BipartiteView::from_left(g.clone(), left).expect("matrix graphs are bipartite");
    (g, view)
}

/// Every labeled simple graph on `n` vertices, one per subset of the
/// `n(n-1)/2` vertex pairs.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    assert!(pairs.len() < 64, "too many pairs to enumerate");
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e);
        Graph::new(n, edges).expect("pairs are simple")
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub tight: u64,
    pub strictly_above: u64,
    pub violated: u64,
}

impl Tally {
    fn of(v: Verdict) -> Self {
        let mut t = Self::default();
        match v {
            Verdict::Tight => t.tight = 1,
            Verdict::StrictlyAbove => t.strictly_above = 1,
            Verdict::Violated => t.violated = 1,
        }
        t
    }

    fn add(self, o: Self) -> Self {
        Self {
            tight: self.tight + o.tight,
            strictly_above: self.strictly_above + o.strictly_above,
            violated: self.violated + o.violated,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BipartiteSweep {
    pub max_left: usize,
    pub max_right: usize,
    /// Matrices enumerated, including those with isolated vertices.
    pub matrices: u64,
    /// Graphs without isolated vertices, the ones actually checked.
    pub graphs_checked: u64,
    pub sah: Tally,
    pub degree_class_default: Tally,
    pub degree_class_flipped: Tally,
    /// Orientations where the degree-class bound fell below the edge bound.
    pub dominance_exceptions: u64,
    /// Left-regular orientations examined for equality of the two bounds.
    pub coincidence_checked: u64,
    pub coincidence_exceptions: u64,
    pub audits: u64,
    pub audit_failures: u64,
    pub violations: u64,
    pub failures: Vec<String>,
}

impl BipartiteSweep {
    pub fn pass(&self) -> bool {
        self.violations == 0
            && self.dominance_exceptions == 0
            && self.coincidence_exceptions == 0
            && self.audit_failures == 0
    }
}

/// Everything checked on one graph of the bipartite sweep.
#[derive(Debug, Clone, Default)]
struct GraphOutcome {
    sah: Tally,
    default: Tally,
    flipped: Tally,
    dominance_exceptions: u64,
    coincidence_checked: u64,
    coincidence_exceptions: u64,
    audits: u64,
    audit_failures: u64,
    failures: Vec<String>,
}

/// Bounds, dominance, left-regular coincidence and (optionally) the
/// entropy audit on one bipartite graph without isolated vertices.
fn check_bipartite(g: &Graph, view: &BipartiteView, audit: bool) -> GraphOutcome {
    let mut out = GraphOutcome::default();
    let tag = || {
        let edges: Vec<String> = g
            .edges()
            .iter()
            .map(|(u, v)| format!("{}-{}", u + 1, v + 1))
            .collect();
        format!("L={:?} E=[{}]", view.left().to_labels(), edges.join(" "))
    };
    let count = count_independent_sets(g);
    let sah = sah_bound(g).expect("no isolated vertices");
    out.sah = Tally::of(compare_bound_vs_count(&sah, &count));
    if out.sah.violated > 0 {
        out.failures.push(format!("edge bound violated: {}", tag()));
    }

    for (i, v) in [view.clone(), view.flip()].into_iter().enumerate() {
        let bound = degree_class_bound(&v).expect("no isolated vertices");
        let tally = Tally::of(compare_bound_vs_count(&bound, &count));
        if tally.violated > 0 {
            out.failures.push(format!(
                "degree-class bound violated ({:?}): {}",
                v.orientation(),
                tag()
            ));
        }
        if i == 0 {
            out.default = tally;
        } else {
            out.flipped = tally;
        }
        let order = compare_bounds(&bound, &sah);
        if order == Ordering::Less {
            out.dominance_exceptions += 1;
            out.failures.push(format!(
                "degree-class below edge bound ({:?}): {}",
                v.orientation(),
                tag()
            ));
        }
        if v.is_left_regular() {
            out.coincidence_checked += 1;
            if order != Ordering::Equal {
                out.coincidence_exceptions += 1;
                out.failures.push(format!(
                    "left-regular bounds differ ({:?}): {}",
                    v.orientation(),
                    tag()
                ));
            }
        }
    }

    if audit {
        out.audits += 1;
        match audit_bipartite_proof::<f64>(view, &AuditOptions::new(DEFAULT_TOLERANCE)) {
            Ok(report) if report.pass => {}
            Ok(report) => {
                out.audit_failures += 1;
                let ids: Vec<_> = report.failed_steps().map(|s| s.id.clone()).collect();
                out.failures
                    .push(format!("audit steps {ids:?} failed: {}", tag()));
            }
            Err(e) => {
                out.audit_failures += 1;
                out.failures.push(format!("audit error {e}: {}", tag()));
            }
        }
    }
    out
}

/// All bipartite adjacency matrices with `1 <= a <= max_left`,
/// `1 <= b <= max_right`, skipping graphs with isolated vertices.
pub fn sweep_bipartite(max_left: usize, max_right: usize, audit: bool) -> BipartiteSweep {
    let shapes: Vec<(usize, usize)> = (1..=max_left)
        .flat_map(|a| (1..=max_right).map(move |b| (a, b)))
        .collect();
    let mut summary = BipartiteSweep {
        max_left,
        max_right,
        ..Default::default()
    };
    for (a, b) in shapes {
        let count = 1u64 << (a * b);
        summary.matrices += count;
        let mut outcomes: Vec<(u64, GraphOutcome)> = (0..count)
            .into_par_iter()
            .filter_map(|mask| {
                let (g, view) = bipartite_from_mask(a, b, mask);
                if !g.isolated_vertices().is_empty() {
                    return None;
                }
                Some((mask, check_bipartite(&g, &view, audit)))
            })
            .collect();
        outcomes.sort_by_key(|(mask, _)| *mask);
        for (_, o) in outcomes {
            summary.graphs_checked += 1;
            summary.sah = summary.sah.add(o.sah);
            summary.degree_class_default = summary.degree_class_default.add(o.default);
            summary.degree_class_flipped = summary.degree_class_flipped.add(o.flipped);
            summary.dominance_exceptions += o.dominance_exceptions;
            summary.coincidence_checked += o.coincidence_checked;
            summary.coincidence_exceptions += o.coincidence_exceptions;
            summary.audits += o.audits;
            summary.audit_failures += o.audit_failures;
            for f in o.failures {
                if summary.failures.len() < MAX_RECORDED {
                    summary.failures.push(f);
                }
            }
        }
    }
    summary.violations = summary.sah.violated
        + summary.degree_class_default.violated
        + summary.degree_class_flipped.violated;
    summary
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ZhaoSweep {
    pub max_n: usize,
    pub injection_max_n: usize,
    pub graphs_checked: u64,
    /// Graphs with `|I(G)|^2 = |I(G x K_2)|`.
    pub tight: u64,
    pub inequality_failures: u64,
    pub injection_graphs: u64,
    pub pairs_checked: u64,
    pub invalid_images: u64,
    pub collisions: u64,
    pub round_trip_failures: u64,
    pub failures: Vec<String>,
}

impl ZhaoSweep {
    pub fn pass(&self) -> bool {
        self.inequality_failures == 0
            && self.invalid_images == 0
            && self.collisions == 0
            && self.round_trip_failures == 0
    }
}

/// Result of pushing every ordered pair of independent sets through the
/// injection on one graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InjectionCheck {
    pub pairs: u64,
    pub invalid_images: u64,
    pub collisions: u64,
    pub round_trip_failures: u64,
}

impl InjectionCheck {
    pub fn pass(&self) -> bool {
        self.invalid_images == 0 && self.collisions == 0 && self.round_trip_failures == 0
    }
}

/// Maps all `|I(G)|^2` ordered pairs, checking image independence,
/// distinctness and the inverse.
pub fn check_injection(g: &Graph) -> InjectionCheck {
    let family = enumerate_independent_sets(g).expect("graph within the enumeration cap");
    let (cover, _) = bipartite_double_cover(g);
    let mut seen = HashSet::with_capacity(family.len() * family.len());
    let mut out = InjectionCheck::default();
    for s0 in family.sets() {
        for s1 in family.sets() {
            out.pairs += 1;
            let image = zhao_map(g, s0, s1).expect("members are independent");
            if !cover.is_independent(&image) {
                out.invalid_images += 1;
            }
            match zhao_inverse(g, &image) {
                Ok(Some((a, b))) if &a == s0 && &b == s1 => {}
                _ => out.round_trip_failures += 1,
            }
            if !seen.insert(image) {
                out.collisions += 1;
            }
        }
    }
    out
}

/// The double-cover inequality on every labeled graph with `1..=max_n`
/// vertices, and the full pair injection on those with at most
/// `injection_max_n` vertices.
pub fn sweep_zhao(max_n: usize, injection_max_n: usize) -> ZhaoSweep {
    let mut summary = ZhaoSweep {
        max_n,
        injection_max_n,
        ..Default::default()
    };
    for n in 1..=max_n {
        let graphs: Vec<Graph> = all_graphs(n).collect();
        let outcomes: Vec<(bool, bool, Option<InjectionCheck>)> = graphs
            .par_iter()
            .map(|g| {
                let check = verify_zhao_inequality(g);
                let tight = check.count_squared == check.cover_count;
                let inj = (n <= injection_max_n).then(|| check_injection(g));
                (check.pass, tight, inj)
            })
            .collect();
        for (g, (pass, tight, inj)) in graphs.iter().zip(outcomes) {
            summary.graphs_checked += 1;
            summary.tight += u64::from(tight);
            let mut bad = !pass;
            if !pass {
                summary.inequality_failures += 1;
            }
            if let Some(inj) = inj {
                summary.injection_graphs += 1;
                summary.pairs_checked += inj.pairs;
                summary.invalid_images += inj.invalid_images;
                summary.collisions += inj.collisions;
                summary.round_trip_failures += inj.round_trip_failures;
                bad |= !inj.pass();
            }
            if bad && summary.failures.len() < MAX_RECORDED {
                summary
                    .failures
                    .push(format!("n={} edges={:?}", n, g.edges()));
            }
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(bipartite_graphs(2, 3).count(), 64);
        assert_eq!(all_graphs(4).count(), 64);
        assert_eq!(all_graphs(1).count(), 1);
        let (g, view) = bipartite_from_mask(2, 2, 0b1001);
        assert_eq!(g.edges(), &[(0, 2), (1, 3)]);
        assert_eq!(view.left().to_labels(), vec![1, 2]);
    }

    #[test]
    fn single_edge_sweep() {
        let s = sweep_bipartite(1, 1, true);
        assert_eq!((s.matrices, s.graphs_checked), (2, 1));
        assert_eq!(
            s.sah,
            Tally {
                tight: 1,
                strictly_above: 0,
                violated: 0
            }
        );
        assert!(s.pass());
    }

    #[test]
    fn small_sweeps_pass() {
        let s = sweep_bipartite(2, 2, true);
        assert_eq!(s.violations, 0);
        assert!(s.pass(), "{s:?}");
        let z = sweep_zhao(4, 4);
        assert!(z.pass(), "{z:?}");
        assert_eq!(z.graphs_checked, 1 + 2 + 8 + 64);
    }
}
