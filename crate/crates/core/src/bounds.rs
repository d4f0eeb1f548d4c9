//! Product-form upper bounds `prod base_i^(num_i / den_i)` on `|I(G)|`.
//!
//! Three families are built here:
//!
//! * the regular bound `(2^(d+1) - 1)^(n / 2d)` for `d`-regular graphs,
//! * the edge bound `prod_{uv in E} (2^d(u) + 2^d(v) - 1)^(1 / d(u) d(v))`,
//! * the degree-class bound of a bipartite view,
//!   `prod_{d in D_L} prod_{r in R_d} (2^d + 2^d(r) - 1)^(1/d)`.
//!
//! Every verdict is exact: exponents are cleared by their common
//! denominator and the resulting integers compared. `log2` values exist
//! only for reports.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{bipartition, BipartiteView, Graph, NotBipartite};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("graph is not regular: vertex {} has degree {du}, vertex {} has degree {dv}", .u + 1, .v + 1)]
    Irregular {
        u: usize,
        du: usize,
        v: usize,
        dv: usize,
    },
    #[error("graph has isolated vertices {}", labels(.0))]
    IsolatedVertices(Vec<usize>),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error(transparent)]
    NotBipartite(#[from] NotBipartite),
}

fn labels(vs: &[usize]) -> String {
    vs.iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// One factor `base^(num/den)`, with `gcd(num, den) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Factor {
    pub base: BigUint,
    pub num: u64,
    pub den: u64,
}

impl Factor {
    pub fn new(base: BigUint, num: u64, den: u64) -> Self {
        assert!(den > 0, "factor denominator must be positive");
        let g = num.gcd(&den);
        Self {
            base,
            num: num / g,
            den: den / g,
        }
    }

    fn sort_key(&self) -> (&BigUint, u64, u64) {
        (&self.base, self.den, self.num)
    }

    fn exponent(&self) -> Ratio<u64> {
        Ratio::new(self.num, self.den)
    }
}

impl Serialize for Factor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Factor", 3)?;
        // Bases beyond u64 are written as decimal strings.
        match self.base.to_u64() {
            Some(b) => st.serialize_field("base", &b)?,
            None => st.serialize_field("base", &self.base.to_string())?,
        }
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}

/// A bound `prod base^(num/den)` kept as a canonical multiset of factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundExpr {
    factors: Vec<Factor>,
    provenance: String,
}

impl BoundExpr {
    pub fn new(factors: impl IntoIterator<Item = Factor>, provenance: impl Into<String>) -> Self {
        let mut factors: Vec<Factor> = factors.into_iter().collect();
        factors.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Self {
            factors,
            provenance: provenance.into(),
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// `sum (num/den) * log2(base)`.
    pub fn log2<F: Scalar>(&self) -> F {
        self.factors.iter().fold(F::zero(), |acc, f| {
            acc + F::log2_big(&f.base) * F::of(f.num as f64) / F::of(f.den as f64)
        })
    }

    /// Total exponent of each distinct base.
    fn exponents(&self) -> BTreeMap<&BigUint, Ratio<u64>> {
        let mut out: BTreeMap<&BigUint, Ratio<u64>> = BTreeMap::new();
        for f in &self.factors {
            let e = out.entry(&f.base).or_insert_with(Ratio::zero);
            *e += f.exponent();
        }
        out
    }
}

impl Serialize for BoundExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BoundExpr", 3)?;
        st.serialize_field("factors", &self.factors)?;
        st.serialize_field("log2", &self.log2::<f64>())?;
        st.serialize_field("provenance", &self.provenance)?;
        st.end()
    }
}

/// Bound versus exact count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    StrictlyAbove,
    Tight,
    #[serde(rename = "VIOLATED")]
    Violated,
}

fn pow2_sum_minus_one(a: usize, b: usize) -> BigUint {
    (BigUint::one() << a) + (BigUint::one() << b) - 1u32
}

fn graph_tag(g: &Graph) -> String {
    format!("n={} m={}", g.vertex_count(), g.edge_count())
}

fn reject_isolated(g: &Graph) -> Result<(), BoundError> {
    let isolated = g.isolated_vertices();
    if isolated.is_empty() {
        Ok(())
    } else {
        Err(BoundError::IsolatedVertices(isolated))
    }
}

/// `(2^(d+1) - 1)^(n / 2d)` for a `d`-regular graph, `d >= 1`. The graph
/// need not be bipartite.
pub fn kahn_bound(g: &Graph) -> Result<BoundExpr, BoundError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(BoundError::EmptyGraph);
    }
    let d = g.degree(0);
    if let Some(v) = (1..n).find(|&v| g.degree(v) != d) {
        return Err(BoundError::Irregular {
            u: 0,
            du: d,
            v,
            dv: g.degree(v),
        });
    }
    reject_isolated(g)?;
    let factor = Factor::new((BigUint::one() << (d + 1)) - 1u32, n as u64, 2 * d as u64);
    Ok(BoundExpr::new([factor], format!("kahn {}", graph_tag(g))))
}

/// One factor `(2^d(u) + 2^d(v) - 1)^(1 / d(u) d(v))` per edge.
pub fn sah_bound(g: &Graph) -> Result<BoundExpr, BoundError> {
    reject_isolated(g)?;
    let factors = g.edges().iter().map(|&(u, v)| {
        let (du, dv) = (g.degree(u), g.degree(v));
        Factor::new(pow2_sum_minus_one(du, dv), 1, (du * dv) as u64)
    });
    Ok(BoundExpr::new(factors, format!("sah {}", graph_tag(g))))
}

/// `prod_{d in D_L} prod_{r in R_d} (2^d + 2^d(r) - 1)^(1/d)` for the view's
/// orientation. A right vertex in several `R_d` contributes once per `d`.
pub fn degree_class_bound(view: &BipartiteView) -> Result<BoundExpr, BoundError> {
    let g = view.graph();
    reject_isolated(g)?;
    let mut factors = Vec::new();
    for (d, _, right) in view.classes() {
        for r in right {
            factors.push(Factor::new(pow2_sum_minus_one(d, g.degree(r)), 1, d as u64));
        }
    }
    let orientation = match view.orientation() {
        crate::graph::Orientation::Default => "default",
        crate::graph::Orientation::Flipped => "flipped",
    };
    Ok(BoundExpr::new(
        factors,
        format!("degree-class[{orientation}] {}", graph_tag(g)),
    ))
}

/// The degree-class bound for the default two-coloring and for its flip.
pub fn degree_class_bound_both(g: &Graph) -> Result<(BoundExpr, BoundExpr), BoundError> {
    reject_isolated(g)?;
    let view = bipartition(g)?;
    Ok((
        degree_class_bound(&view)?,
        degree_class_bound(&view.flip())?,
    ))
}

/// `prod base^(e * q)` over a map of per-base exponents, all `e * q` integral.
fn cleared_product<'a>(exps: impl IntoIterator<Item = (&'a BigUint, BigUint)>) -> BigUint {
    exps.into_iter()
        .fold(BigUint::one(), |acc, (base, e)| acc * Pow::pow(base, &e))
}

/// Exact comparison of `count` against the bound: with `q` the common
/// denominator of the exponents, compares `count^q` with
/// `prod base^(e * q)`.
pub fn compare_bound_vs_count(bound: &BoundExpr, count: &BigUint) -> Verdict {
    let exps = bound.exponents();
    let q = exps.values().fold(1u64, |acc, e| acc.lcm(e.denom()));
    let rhs = cleared_product(
        exps.iter()
            .map(|(b, e)| (*b, BigUint::from(e.numer() * (q / e.denom())))),
    );
    let lhs = Pow::pow(count, q);
    match lhs.cmp(&rhs) {
        Ordering::Less => Verdict::StrictlyAbove,
        Ordering::Equal => Verdict::Tight,
        Ordering::Greater => Verdict::Violated,
    }
}

/// Exact ordering of the values of two bounds. Common bases cancel first;
/// the remaining exponents are cleared by their common denominator.
pub fn compare_bounds(a: &BoundExpr, b: &BoundExpr) -> Ordering {
    let mut diff: BTreeMap<&BigUint, Ratio<BigInt>> = BTreeMap::new();
    let to_big = |e: &Ratio<u64>| Ratio::new(BigInt::from(*e.numer()), BigInt::from(*e.denom()));
    for (base, e) in a.exponents() {
        *diff.entry(base).or_insert_with(Ratio::zero) += to_big(&e);
    }
    for (base, e) in b.exponents() {
        *diff.entry(base).or_insert_with(Ratio::zero) -= to_big(&e);
    }
    diff.retain(|base, e| !e.is_zero() && !base.is_one());
    let q = diff
        .values()
        .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    let cleared = |positive: bool| {
        cleared_product(
            diff.iter()
                .filter(|(_, e)| e.is_positive() == positive)
                .map(|(base, e)| {
                    let k = (e * &q).to_integer().abs();
                    (*base, k.to_biguint().expect("absolute value"))
                }),
        )
    };
    cleared(true).cmp(&cleared(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_independent_sets;
    use crate::graph::{
        complete_bipartite, complete_graph, cycle_graph, disjoint_union, path_graph,
    };

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn factors(b: &BoundExpr) -> Vec<(u64, u64, u64)> {
        b.factors()
            .iter()
            .map(|f| (f.base.to_u64().unwrap(), f.num, f.den))
            .collect()
    }

    #[test]
    fn kahn_examples() {
        let k33 = complete_bipartite(3, 3).unwrap();
        assert_eq!(factors(&kahn_bound(&k33).unwrap()), vec![(15, 1, 1)]);
        let c4 = cycle_graph(4).unwrap();
        let b = kahn_bound(&c4).unwrap();
        assert_eq!(factors(&b), vec![(7, 1, 1)]);
        assert_eq!(compare_bound_vs_count(&b, &big(7)), Verdict::Tight);
        let k2 = complete_graph(2).unwrap();
        assert_eq!(
            factors(&kahn_bound(&disjoint_union([&k2, &k2])).unwrap()),
            vec![(3, 2, 1)]
        );
    }

    #[test]
    fn kahn_applies_to_non_bipartite_regular_graphs() {
        let c5 = cycle_graph(5).unwrap();
        assert_eq!(factors(&kahn_bound(&c5).unwrap()), vec![(7, 5, 4)]);
    }

    #[test]
    fn kahn_errors() {
        assert_eq!(
            kahn_bound(&path_graph(3)),
            Err(BoundError::Irregular {
                u: 0,
                du: 1,
                v: 1,
                dv: 2
            })
        );
        assert_eq!(
            kahn_bound(&Graph::empty(2)),
            Err(BoundError::IsolatedVertices(vec![0, 1]))
        );
        assert_eq!(kahn_bound(&Graph::empty(0)), Err(BoundError::EmptyGraph));
    }

    #[test]
    fn sah_examples() {
        let p3 = complete_bipartite(1, 2).unwrap();
        let b = sah_bound(&p3).unwrap();
        assert_eq!(factors(&b), vec![(5, 1, 2), (5, 1, 2)]);
        assert_eq!(compare_bound_vs_count(&b, &big(5)), Verdict::Tight);
        assert_eq!(
            factors(&sah_bound(&complete_graph(2).unwrap()).unwrap()),
            vec![(3, 1, 1)]
        );
        let k22 = sah_bound(&complete_bipartite(2, 2).unwrap()).unwrap();
        assert_eq!(factors(&k22), vec![(7, 1, 4); 4]);
        assert_eq!(compare_bound_vs_count(&k22, &big(7)), Verdict::Tight);
        assert_eq!(
            sah_bound(&Graph::new(3, [(0, 1)]).unwrap()),
            Err(BoundError::IsolatedVertices(vec![2]))
        );
    }

    #[test]
    fn degree_class_bound_examples() {
        let k22 = complete_bipartite(2, 2).unwrap();
        let (a, b) = degree_class_bound_both(&k22).unwrap();
        assert_eq!(factors(&a), vec![(7, 1, 2), (7, 1, 2)]);
        assert_eq!(compare_bound_vs_count(&a, &big(7)), Verdict::Tight);
        assert_eq!(compare_bounds(&a, &b), Ordering::Equal);

        // Center first: D_L = {2}, two leaves of degree 1.
        let p3 = complete_bipartite(1, 2).unwrap();
        let (center, leaves) = degree_class_bound_both(&p3).unwrap();
        assert_eq!(factors(&center), vec![(5, 1, 2), (5, 1, 2)]);
        assert_eq!(factors(&leaves), vec![(5, 1, 1)]);
        assert_eq!(
            compare_bounds(&center, &sah_bound(&p3).unwrap()),
            Ordering::Equal
        );

        let k13 = complete_bipartite(1, 3).unwrap();
        let (a, b) = degree_class_bound_both(&k13).unwrap();
        assert_eq!(factors(&a), vec![(9, 1, 3); 3]);
        assert_eq!(factors(&b), vec![(9, 1, 1)]);
        for bound in [&a, &b] {
            assert_eq!(compare_bound_vs_count(bound, &big(9)), Verdict::Tight);
        }
    }

    #[test]
    fn path_on_four_vertices_bounds_are_sound() {
        let p4 = path_graph(4);
        let count = count_independent_sets(&p4);
        assert_eq!(count, big(8));
        let (a, b) = degree_class_bound_both(&p4).unwrap();
        // Default: L = {1, 3} with degrees {1, 2}; R_1 = {2}, R_2 = {2, 4}.
        assert_eq!(factors(&a), vec![(5, 1, 1), (5, 1, 2), (7, 1, 2)]);
        // Flipped: L = {2, 4}; the reflection of the path maps it onto the default.
        assert_eq!(factors(&b), factors(&a));
        assert_ne!(a.provenance(), b.provenance());
        for bound in [&a, &b, &sah_bound(&p4).unwrap()] {
            assert_eq!(
                compare_bound_vs_count(bound, &count),
                Verdict::StrictlyAbove
            );
        }
    }

    #[test]
    fn degree_class_bound_rejects_odd_cycles_and_isolated_vertices() {
        assert!(matches!(
            degree_class_bound_both(&cycle_graph(5).unwrap()),
            Err(BoundError::NotBipartite(_))
        ));
        assert!(matches!(
            degree_class_bound_both(&Graph::new(3, [(0, 1)]).unwrap()),
            Err(BoundError::IsolatedVertices(_))
        ));
    }

    #[test]
    fn verdicts() {
        let fifteen = BoundExpr::new([Factor::new(big(15), 1, 1)], "t");
        assert_eq!(compare_bound_vs_count(&fifteen, &big(15)), Verdict::Tight);
        let three = BoundExpr::new([Factor::new(big(3), 1, 1)], "t");
        assert_eq!(
            compare_bound_vs_count(&three, &big(2)),
            Verdict::StrictlyAbove
        );
        assert_eq!(compare_bound_vs_count(&three, &big(4)), Verdict::Violated);
        // sqrt(10) ~ 3.162 sits between 3 and 4.
        let root10 = BoundExpr::new([Factor::new(big(10), 1, 2)], "t");
        assert_eq!(
            compare_bound_vs_count(&root10, &big(3)),
            Verdict::StrictlyAbove
        );
        assert_eq!(compare_bound_vs_count(&root10, &big(4)), Verdict::Violated);
        let empty = BoundExpr::new([], "t");
        assert_eq!(compare_bound_vs_count(&empty, &big(1)), Verdict::Tight);
    }

    #[test]
    fn bound_ordering() {
        let thirds = BoundExpr::new(vec![Factor::new(big(9), 1, 3); 3], "a");
        let nine = BoundExpr::new([Factor::new(big(9), 1, 1)], "b");
        assert_eq!(compare_bounds(&thirds, &nine), Ordering::Equal);
        // 2^(1/2) < 3^(1/3)?  2^3 = 8 < 9 = 3^2, so yes.
        let a = BoundExpr::new([Factor::new(big(2), 1, 2)], "a");
        let b = BoundExpr::new([Factor::new(big(3), 1, 3)], "b");
        assert_eq!(compare_bounds(&a, &b), Ordering::Less);
        assert_eq!(compare_bounds(&b, &a), Ordering::Greater);
        // Different bases, equal value: 4^(1/2) = 2.
        let four = BoundExpr::new([Factor::new(big(4), 1, 2)], "a");
        let two = BoundExpr::new([Factor::new(big(2), 1, 1)], "b");
        assert_eq!(compare_bounds(&four, &two), Ordering::Equal);
    }

    #[test]
    fn canonical_form() {
        let b = BoundExpr::new(
            [
                Factor::new(big(7), 2, 4),
                Factor::new(big(5), 3, 6),
                Factor::new(big(5), 1, 1),
            ],
            "t",
        );
        assert_eq!(factors(&b), vec![(5, 1, 1), (5, 1, 2), (7, 1, 2)]);
        let log2 = b.log2::<f64>();
        let expected = 5f64.log2() * 1.5 + 7f64.log2() * 0.5;
        assert!((log2 - expected).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let b = sah_bound(&complete_graph(2).unwrap()).unwrap();
        let v = serde_json::to_value(&b).unwrap();
        assert_eq!(
            v["factors"],
            serde_json::json!([{"base": 3, "num": 1, "den": 1}])
        );
        assert!((v["log2"].as_f64().unwrap() - 3f64.log2()).abs() < 1e-12);
        assert_eq!(v["provenance"], "sah n=2 m=1");
        let huge = BoundExpr::new([Factor::new(BigUint::one() << 70u32, 1, 1)], "t");
        let v = serde_json::to_value(&huge).unwrap();
        assert_eq!(v["factors"][0]["base"], "1180591620717411303424");
        assert_eq!(serde_json::to_value(Verdict::Violated).unwrap(), "VIOLATED");
    }
}
