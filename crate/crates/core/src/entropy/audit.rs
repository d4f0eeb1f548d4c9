//! Step-by-step numerical audit of the entropy argument that bounds
//! `log2 |I(G)|` by `sum_{d in D_L} (1/d) sum_{r in R_d} log2(2^d + 2^d(r) - 1)`
//! for a bipartite graph without isolated vertices.
//!
//! Each step records its two sides on the actual uniform distribution over
//! `I(G)`. Step ids follow the order of the argument (`ent01` ... `ent37`),
//! suffixed by the degree class `d` and/or right vertex `r` (1-based).

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::Serialize;
use thiserror::Error;

use super::{
    binary_entropy, conditional_entropy, entropy, f_r_maximizer, f_r_value, log2_pow2_minus_one,
    shearer_check, EntropyError, IndicatorDistribution,
};
use crate::bounds::{degree_class_bound, BoundError};
use crate::count::{enumerate_independent_sets_with_cap, CountError, DEFAULT_ENUMERATION_CAP};
use crate::graph::{BipartiteView, Orientation};
use crate::{Scalar, VertexSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AuditError {
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}

#[derive(Debug, Clone, Copy)]
pub struct AuditOptions<F> {
    pub tolerance: F,
    pub enumeration_cap: usize,
}

impl<F: Scalar> AuditOptions<F> {
    pub fn new(tolerance: F) -> Self {
        Self {
            tolerance,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.enumeration_cap = cap;
        self
    }
}

impl Default for AuditOptions<f64> {
    fn default() -> Self {
        Self::new(crate::DEFAULT_TOLERANCE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    #[serde(rename = "ineq")]
    Inequality,
    #[serde(rename = "eq")]
    Equality,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "F: Serialize")]
pub struct AuditStep<F> {
    pub id: String,
    pub lhs: F,
    pub rhs: F,
    /// `rhs - lhs`.
    pub slack: F,
    pub kind: StepKind,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport<F> {
    pub graph: String,
    pub orientation: Orientation,
    /// `q_r` for every right vertex, as a reduced fraction `(num, den)`.
    pub q: BTreeMap<usize, (u64, u64)>,
    pub steps: Vec<AuditStep<F>>,
    pub final_bound_log2: F,
    pub pass: bool,
}

impl<F: Scalar> AuditReport<F> {
    pub fn step(&self, id: &str) -> Option<&AuditStep<F>> {
        self.steps.iter().find(|s| s.id == id)
    }

    pub fn failed_steps(&self) -> impl Iterator<Item = &AuditStep<F>> {
        self.steps.iter().filter(|s| !s.pass)
    }

    pub fn with_graph_id(mut self, id: impl Into<String>) -> Self {
        self.graph = id.into();
        self
    }
}

struct QMap<'a>(&'a BTreeMap<usize, (u64, u64)>);

impl Serialize for QMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (r, (num, den)) in self.0 {
            map.serialize_entry(&(r + 1).to_string(), &[num, den])?;
        }
        map.end()
    }
}

impl<F: Scalar + Serialize> Serialize for AuditReport<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AuditReport", 6)?;
        st.serialize_field("graph", &self.graph)?;
        st.serialize_field("orientation", &self.orientation)?;
        st.serialize_field("q", &QMap(&self.q))?;
        st.serialize_field("steps", &self.steps)?;
        st.serialize_field("final_bound_log2", &self.final_bound_log2)?;
        st.serialize_field("pass", &self.pass)?;
        st.end()
    }
}

struct Ledger<F> {
    tol: F,
    steps: Vec<AuditStep<F>>,
}

impl<F: Scalar> Ledger<F> {
    fn record(&mut self, id: String, lhs: F, rhs: F, kind: StepKind) {
        let slack = rhs - lhs;
        let pass = match kind {
            StepKind::Inequality => slack >= -self.tol,
            StepKind::Equality => slack.abs() <= self.tol,
        };
        self.steps.push(AuditStep {
            id,
            lhs,
            rhs,
            slack,
            kind,
            pass,
        });
    }

    fn ineq(&mut self, id: impl Into<String>, lhs: F, rhs: F) {
        self.record(id.into(), lhs, rhs, StepKind::Inequality);
    }

    fn eq(&mut self, id: impl Into<String>, lhs: F, rhs: F) {
        self.record(id.into(), lhs, rhs, StepKind::Equality);
    }
}

/// Per right vertex quantities shared by several steps.
struct RightVertex<F> {
    degree: usize,
    q: F,
    /// `H(X_N(r))`.
    hood_entropy: F,
    /// `h(q) + (1 - q) log2(2^deg - 1)`.
    hood_bound: F,
}

/// Materializes `I(G)` for the view's graph and checks every step of the
/// entropy argument, in order. Fails only on precondition violations
/// (isolated vertices, enumeration cap); a failing step is reported in the
/// returned report with `pass = false`.
pub fn audit_bipartite_proof<F: Scalar>(
    view: &BipartiteView,
    options: &AuditOptions<F>,
) -> Result<AuditReport<F>, AuditError> {
    let g = view.graph();
    let isolated = g.isolated_vertices();
    if !isolated.is_empty() {
        return Err(BoundError::IsolatedVertices(isolated).into());
    }
    let family = enumerate_independent_sets_with_cap(g, options.enumeration_cap)?;
    let dist = IndicatorDistribution::new(&family);
    let atoms = dist.atoms();
    let total = F::of_usize(atoms);
    let mut ledger = Ledger {
        tol: options.tolerance,
        steps: Vec::new(),
    };

    let left = view.left();
    let right = view.right();
    let all = g.vertices();
    let log_count = total.log2();

    let h_all: F = entropy(&dist, &all);
    ledger.eq("ent01", h_all, log_count);

    let h_left: F = entropy(&dist, left);
    let h_right_given_left: F = conditional_entropy(&dist, right, left);
    let class_left: BTreeMap<usize, F> = view
        .classes()
        .map(|(d, l, _)| (d, entropy(&dist, l)))
        .collect();
    let class_right_given_left: BTreeMap<usize, F> = view
        .classes()
        .map(|(d, _, r)| (d, conditional_entropy(&dist, r, left)))
        .collect();
    let sum = |m: &BTreeMap<usize, F>| m.values().fold(F::zero(), |a, &b| a + b);
    ledger.ineq("ent04", h_left, sum(&class_left));
    ledger.ineq("ent05", h_right_given_left, sum(&class_right_given_left));
    ledger.ineq(
        "ent06",
        h_all,
        sum(&class_left) + sum(&class_right_given_left),
    );

    // Right-vertex quantities.
    let mut q_exact = BTreeMap::new();
    let mut per_right: BTreeMap<usize, RightVertex<F>> = BTreeMap::new();
    for r in right {
        let hood = g.neighbor_set(r);
        let avoid = |s: &VertexSet| !s.intersects(hood);
        let avoiding = dist.count_where(avoid);
        // The empty set always avoids N(r).
        assert!(avoiding > 0, "q_r = 0 is impossible");
        let gcd = avoiding.gcd(&atoms);
        q_exact.insert(r, ((avoiding / gcd) as u64, (atoms / gcd) as u64));
        let q = F::of_usize(avoiding) / total;

        let single = VertexSet::singleton(r);
        let given_left: F = conditional_entropy(&dist, &single, left);
        let given_hood: F = conditional_entropy(&dist, &single, hood);
        let joint_xq: F = dist.entropy_of(|_| true, |s| (s.contains(r), avoid(s)));
        let h_q: F = dist.entropy_of(|_| true, |s| avoid(s));
        let given_q = joint_xq - h_q;
        let given_q0: F = dist.entropy_of(|s| !avoid(s), |s| s.contains(r));
        let given_q1: F = dist.entropy_of(avoid, |s| s.contains(r));

        let label = r + 1;
        ledger.ineq(format!("ent08-r{label}"), given_left, given_hood);
        ledger.ineq(format!("ent10-r{label}"), given_hood, given_q);
        ledger.eq(format!("ent12-r{label}"), given_q0, F::zero());
        ledger.eq(format!("ent13-r{label}"), given_q1, F::one());
        ledger.eq(format!("ent14-r{label}"), given_q, q);

        let degree = g.degree(r);
        let hood_entropy: F = entropy(&dist, hood);
        let hood_bound = binary_entropy(q)? + (F::one() - q) * log2_pow2_minus_one::<F>(degree);
        ledger.ineq(format!("ent23-r{label}"), hood_entropy, hood_bound);
        per_right.insert(
            r,
            RightVertex {
                degree,
                q,
                hood_entropy,
                hood_bound,
            },
        );
    }

    let mut rhs26 = F::zero();
    let mut rhs28 = F::zero();
    let mut rhs29 = F::zero();
    let mut rhs30 = F::zero();
    let mut rhs37 = F::zero();
    for (d, left_d, right_d) in view.classes() {
        let df = F::of_usize(d);
        let members = || right_d.iter().map(|r| (r, &per_right[&r]));

        let sum_right_given_left = members().fold(F::zero(), |acc, (r, _)| {
            acc + conditional_entropy::<F>(&dist, &VertexSet::singleton(r), left)
        });
        let sum_q = members().fold(F::zero(), |acc, (_, rv)| acc + rv.q);
        ledger.ineq(
            format!("ent07-d{d}"),
            class_right_given_left[&d],
            sum_right_given_left,
        );
        ledger.ineq(format!("ent15-d{d}"), class_right_given_left[&d], sum_q);

        let hoods: Vec<VertexSet> = right_d.iter().map(|r| g.neighbor_set(r).clone()).collect();
        let shearer = shearer_check(&dist.restricted(left_d), &hoods, d, options.tolerance)?;
        ledger.ineq(format!("shearer-d{d}"), shearer.lhs, shearer.rhs);

        let sum_hood = members().fold(F::zero(), |acc, (_, rv)| acc + rv.hood_entropy);
        let sum_hood_bound = members().fold(F::zero(), |acc, (_, rv)| acc + rv.hood_bound);
        ledger.ineq(format!("ent16-d{d}"), class_left[&d], sum_hood / df);
        ledger.ineq(format!("ent24-d{d}"), class_left[&d], sum_hood_bound / df);
        rhs26 = rhs26 + sum_q + sum_hood_bound / df;

        for (r, rv) in members() {
            let label = r + 1;
            let log_right = log2_pow2_minus_one::<F>(rv.degree);
            let at_q = f_r_value(rv.q, d, rv.degree)?;
            let x_star = f_r_maximizer::<F>(d, rv.degree)?;
            let at_max = f_r_value(x_star, d, rv.degree)?;
            let exact =
                F::log2_big(&((BigUint::one() << d) + (BigUint::one() << rv.degree) - 1u32));
            ledger.ineq(format!("ent30-d{d}-r{label}"), at_q, at_max);
            ledger.eq(format!("ent36-d{d}-r{label}"), at_max + log_right, exact);

            rhs28 = rhs28 + (binary_entropy(rv.q)? + rv.q * (df - log_right) + log_right) / df;
            rhs29 = rhs29 + (at_q + log_right) / df;
            rhs30 = rhs30 + (at_max + log_right) / df;
            rhs37 = rhs37 + exact / df;
        }
    }

    ledger.ineq("ent26", h_all, rhs26);
    ledger.eq("ent28", rhs26, rhs28);
    ledger.ineq("ent29", h_all, rhs29);
    ledger.ineq("ent30", h_all, rhs30);
    ledger.ineq("ent37", log_count, rhs37);
    let bound = degree_class_bound(view)?;
    ledger.eq("ent37-bound", rhs37, bound.log2::<F>());

    let pass = ledger.steps.iter().all(|s| s.pass);
    Ok(AuditReport {
        graph: format!("n={} m={}", g.vertex_count(), g.edge_count()),
        orientation: view.orientation(),
        q: q_exact,
        steps: ledger.steps,
        final_bound_log2: rhs37,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bipartition, complete_bipartite, complete_graph, path_graph, Graph};

    fn audit(view: &BipartiteView) -> AuditReport<f64> {
        audit_bipartite_proof(view, &AuditOptions::default()).unwrap()
    }

    fn assert_clean(report: &AuditReport<f64>) {
        let failed: Vec<_> = report.failed_steps().collect();
        assert!(failed.is_empty(), "failed steps: {failed:?}");
        assert!(report.pass);
    }

    #[test]
    fn square_audit() {
        let view = bipartition(&complete_bipartite(2, 2).unwrap()).unwrap();
        let report = audit(&view);
        assert_clean(&report);
        assert_eq!(
            report.q.values().copied().collect::<Vec<_>>(),
            vec![(4, 7); 2]
        );
        assert!((report.final_bound_log2 - 7f64.log2()).abs() < 1e-9);
        assert!(report.step("ent37").unwrap().slack.abs() < 1e-9);
    }

    #[test]
    fn star_audit_center_left() {
        let view = bipartition(&complete_bipartite(1, 2).unwrap()).unwrap();
        let report = audit(&view);
        assert_clean(&report);
        assert_eq!(report.q.get(&1), Some(&(4, 5)));
        assert_eq!(report.q.get(&2), Some(&(4, 5)));
        assert!((report.final_bound_log2 - 5f64.log2()).abs() < 1e-9);
        assert!(report.step("ent37").unwrap().slack.abs() < 1e-9);
    }

    #[test]
    fn edge_audit() {
        let view = bipartition(&complete_graph(2).unwrap()).unwrap();
        let report = audit(&view);
        assert_clean(&report);
        assert_eq!(report.q, BTreeMap::from([(1, (2, 3))]));
        assert!((report.final_bound_log2 - 3f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn path_audit_both_orientations_has_slack() {
        let view = bipartition(&path_graph(4)).unwrap();
        for v in [view.clone(), view.flip()] {
            let report = audit(&v);
            assert_clean(&report);
            assert!(report.step("ent37").unwrap().slack > 1e-3);
        }
    }

    #[test]
    fn step_inventory() {
        let view = bipartition(&path_graph(4)).unwrap();
        let report = audit(&view);
        let ids: Vec<&str> = report.steps.iter().map(|s| s.id.as_str()).collect();
        for id in [
            "ent01",
            "ent04",
            "ent05",
            "ent06",
            "ent08-r2",
            "ent10-r4",
            "ent12-r2",
            "ent13-r2",
            "ent14-r4",
            "ent23-r2",
            "ent07-d1",
            "ent15-d2",
            "shearer-d2",
            "ent16-d1",
            "ent24-d2",
            "ent30-d1-r2",
            "ent36-d2-r4",
            "ent26",
            "ent28",
            "ent29",
            "ent30",
            "ent37",
            "ent37-bound",
        ] {
            assert!(ids.contains(&id), "missing step {id}");
        }
    }

    #[test]
    fn rejects_isolated_vertices_and_big_graphs() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        let view = bipartition(&g).unwrap();
        assert!(matches!(
            audit_bipartite_proof(&view, &AuditOptions::default()),
            Err(AuditError::Bound(BoundError::IsolatedVertices(_)))
        ));
        let view = bipartition(&path_graph(30)).unwrap();
        assert!(matches!(
            audit_bipartite_proof(&view, &AuditOptions::default()),
            Err(AuditError::Count(CountError::CapExceeded {
                n: 30,
                cap: 24
            }))
        ));
    }

    #[test]
    fn single_precision_audit() {
        let view = bipartition(&complete_bipartite(2, 3).unwrap()).unwrap();
        let report = audit_bipartite_proof::<f32>(&view, &AuditOptions::new(1e-4)).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn json_shape() {
        let view = bipartition(&complete_bipartite(2, 2).unwrap()).unwrap();
        let v = serde_json::to_value(audit(&view)).unwrap();
        assert_eq!(v["orientation"], "default");
        assert_eq!(v["q"]["3"], serde_json::json!([4, 7]));
        assert_eq!(v["steps"][0]["id"], "ent01");
        assert_eq!(v["steps"][0]["kind"], "eq");
        assert_eq!(v["steps"][1]["kind"], "ineq");
        assert_eq!(v["pass"], true);
    }
}
