//! Entropies of the uniform distribution over independent sets.
//!
//! A uniformly random `S` in `I(G)` gives the indicator vector
//! `X_i = 1{i in S}`. Every entropy here is computed from exact projection
//! counts `c` over `N = |I(G)|` atoms as `log2 N - (1/N) sum c log2 c`;
//! floating point enters only through the logarithm.

mod audit;

pub use audit::{
    audit_bipartite_proof, AuditError, AuditOptions, AuditReport, AuditStep, StepKind,
};

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

use crate::count::IndSetFamily;
use crate::{Scalar, VertexSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("coordinate {} lies in only {found} of the subsets, need {required}", .coordinate + 1)]
    Coverage {
        coordinate: usize,
        found: usize,
        required: usize,
    },
}

fn domain<F: Scalar>(name: &'static str, value: F, domain: &'static str) -> EntropyError {
    EntropyError::Domain {
        name,
        value: value.to_f64_lossy(),
        domain,
    }
}

/// The indicator vector of a uniform member of a materialized family,
/// optionally restricted to a subset of its coordinates.
#[derive(Debug, Clone)]
pub struct IndicatorDistribution<'a> {
    sets: &'a [VertexSet],
    /// Members as bitmasks when every vertex index is below 128.
    bits: Option<Vec<u128>>,
    coords: VertexSet,
}

impl<'a> IndicatorDistribution<'a> {
    pub fn new(family: &'a IndSetFamily<'_>) -> Self {
        let n = family.graph().vertex_count();
        let bits = (n <= 128).then(|| {
            family
                .sets()
                .iter()
                .map(|s| s.to_bits().expect("members below 128"))
                .collect()
        });
        Self {
            sets: family.sets(),
            bits,
            coords: VertexSet::full(n),
        }
    }

    /// The marginal on `coords` (intersected with the current coordinates).
    pub fn restricted(&self, coords: &VertexSet) -> Self {
        Self {
            sets: self.sets,
            bits: self.bits.clone(),
            coords: self.coords.intersection(coords),
        }
    }

    pub fn coords(&self) -> &VertexSet {
        &self.coords
    }

    /// Number of equiprobable atoms, `|I(G)|`.
    pub fn atoms(&self) -> usize {
        self.sets.len()
    }

    /// Number of atoms where `pred` holds.
    pub fn count_where(&self, pred: impl Fn(&VertexSet) -> bool) -> usize {
        self.sets.iter().filter(|s| pred(s)).count()
    }

    /// Entropy of an arbitrary function of the random set, over the atoms
    /// selected by `filter`, each weighted equally.
    pub fn entropy_of<F, K>(
        &self,
        filter: impl Fn(&VertexSet) -> bool,
        key: impl Fn(&VertexSet) -> K,
    ) -> F
    where
        F: Scalar,
        K: Hash + Eq,
    {
        let mut counts: HashMap<K, usize> = HashMap::new();
        let mut total = 0;
        for s in self.sets.iter().filter(|s| filter(s)) {
            *counts.entry(key(s)).or_insert(0) += 1;
            total += 1;
        }
        entropy_from_counts(counts.into_values(), total)
    }

    fn marginal_entropy<F: Scalar>(&self, coords: &VertexSet) -> F {
        let coords = self.coords.intersection(coords);
        if coords.is_empty() {
            return F::zero();
        }
        match (&self.bits, coords.to_bits()) {
            (Some(bits), Some(mask)) => {
                let mut counts: HashMap<u128, usize> = HashMap::with_capacity(bits.len());
                for b in bits {
                    *counts.entry(b & mask).or_insert(0) += 1;
                }
                entropy_from_counts(counts.into_values(), bits.len())
            }
            _ => self.entropy_of(|_| true, |s| s.intersection(&coords)),
        }
    }
}

/// `log2 N - (1/N) sum c log2 c` for atom counts summing to `total`.
fn entropy_from_counts<F: Scalar>(counts: impl IntoIterator<Item = usize>, total: usize) -> F {
    if total == 0 {
        return F::zero();
    }
    let n = F::of_usize(total);
    let weighted = counts
        .into_iter()
        .filter(|&c| c > 1)
        .fold(F::zero(), |acc, c| {
            let c = F::of_usize(c);
            acc + c * c.log2()
        });
    (n.log2() - weighted / n).max(F::zero())
}

/// `H(X_coords)` in bits. Coordinates outside the distribution are ignored.
pub fn entropy<F: Scalar>(dist: &IndicatorDistribution<'_>, coords: &VertexSet) -> F {
    dist.marginal_entropy(coords)
}

/// `H(X_a | X_b) = H(X_{a u b}) - H(X_b)`.
pub fn conditional_entropy<F: Scalar>(
    dist: &IndicatorDistribution<'_>,
    a: &VertexSet,
    b: &VertexSet,
) -> F {
    entropy::<F>(dist, &a.union(b)) - entropy::<F>(dist, b)
}

/// `h(p) = -p log2 p - (1-p) log2 (1-p)`, with `0 log 0 = 0`.
pub fn binary_entropy<F: Scalar>(p: F) -> Result<F, EntropyError> {
    if !(p >= F::zero() && p <= F::one()) {
        return Err(domain("p", p, "[0, 1]"));
    }
    let term = |x: F| {
        if x > F::zero() {
            -x * x.log2()
        } else {
            F::zero()
        }
    };
    Ok(term(p) + term(F::one() - p))
}

/// Outcome of a Shearer-type check `k H(X) <= sum_j H(X_{S_j})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearerOutcome<F> {
    pub lhs: F,
    pub rhs: F,
    pub pass: bool,
}

/// Checks `k H(X) <= sum_j H(X_{S_j})` where every coordinate of `dist` lies
/// in at least `k` of the subsets. Subset members outside the distribution's
/// coordinates are dropped before taking entropies.
pub fn shearer_check<F: Scalar>(
    dist: &IndicatorDistribution<'_>,
    subsets: &[VertexSet],
    k: usize,
    tol: F,
) -> Result<ShearerOutcome<F>, EntropyError> {
    if k == 0 {
        return Err(domain("k", F::zero(), ">= 1"));
    }
    for coordinate in dist.coords() {
        let found = subsets.iter().filter(|s| s.contains(coordinate)).count();
        if found < k {
            return Err(EntropyError::Coverage {
                coordinate,
                found,
                required: k,
            });
        }
    }
    let lhs = F::of_usize(k) * entropy::<F>(dist, dist.coords());
    let rhs = subsets
        .iter()
        .fold(F::zero(), |acc, s| acc + entropy::<F>(dist, s));
    Ok(ShearerOutcome {
        lhs,
        rhs,
        pass: lhs <= rhs + tol,
    })
}

/// `log2(2^k - 1)`, evaluated without forming `2^k`.
pub(crate) fn log2_pow2_minus_one<F: Scalar>(k: usize) -> F {
    let two = F::of(2.0);
    F::of_usize(k) + (F::one() - two.powi(-(k.min(i32::MAX as usize) as i32))).log2()
}

fn check_degrees(d: usize, dr: usize) -> Result<(), EntropyError> {
    if d == 0 {
        return Err(domain("d", 0.0f64, ">= 1"));
    }
    if dr == 0 {
        return Err(domain("dr", 0.0f64, ">= 1"));
    }
    Ok(())
}

/// `f(x) = h(x) + x log2(2^d / (2^dr - 1))` for `x` in `[0, 1]`.
pub fn f_r_value<F: Scalar>(x: F, d: usize, dr: usize) -> Result<F, EntropyError> {
    check_degrees(d, dr)?;
    if !(x >= F::zero() && x <= F::one()) {
        return Err(domain("x", x, "[0, 1]"));
    }
    let slope = F::of_usize(d) - log2_pow2_minus_one::<F>(dr);
    Ok(binary_entropy(x)? + x * slope)
}

/// The maximizer `2^d / (2^d + 2^dr - 1)` of [`f_r_value`] on `[0, 1]`.
pub fn f_r_maximizer<F: Scalar>(d: usize, dr: usize) -> Result<F, EntropyError> {
    check_degrees(d, dr)?;
    let two = F::of(2.0);
    // 2^d / (2^d + 2^dr - 1) = 1 / (1 + 2^(dr-d) - 2^-d)
    let denom = F::one() + two.powi(dr as i32 - d as i32) - two.powi(-(d as i32));
    Ok(F::one() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::enumerate_independent_sets;
    use crate::graph::{complete_bipartite, complete_graph, path_graph, Graph};

    const TOL: f64 = 1e-9;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn h(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn entropy_examples() {
        let k2 = complete_graph(2).unwrap();
        let family = enumerate_independent_sets(&k2).unwrap();
        let dist = IndicatorDistribution::new(&family);
        let e: f64 = entropy(&dist, &set(&[0]));
        assert!((e - h(1.0 / 3.0)).abs() < TOL);
        assert!((e - 0.918_295_834_054_489_6).abs() < TOL);
        let all: f64 = entropy(&dist, &k2.vertices());
        assert!((all - 3f64.log2()).abs() < TOL);
        assert_eq!(entropy::<f64>(&dist, &VertexSet::new()), 0.0);

        let g = Graph::empty(2);
        let family = enumerate_independent_sets(&g).unwrap();
        let dist = IndicatorDistribution::new(&family);
        assert!((entropy::<f64>(&dist, &set(&[0, 1])) - 2.0).abs() < TOL);
    }

    #[test]
    fn conditional_entropy_examples() {
        let p3 = path_graph(3);
        let family = enumerate_independent_sets(&p3).unwrap();
        let dist = IndicatorDistribution::new(&family);
        let a = set(&[0]);
        let plain: f64 = entropy(&dist, &a);
        assert!((conditional_entropy::<f64>(&dist, &a, &VertexSet::new()) - plain).abs() < TOL);
        assert!(conditional_entropy::<f64>(&dist, &a, &set(&[0, 2])).abs() < TOL);
        // Atoms {}, {1}, {2}, {3}, {1,3}: given X_2 = 1 (1 atom) X_1 = 0;
        // given X_2 = 0 (4 atoms) X_1 is a fair bit. H(X_1 | X_2) = 4/5.
        let c: f64 = conditional_entropy(&dist, &a, &set(&[1]));
        assert!((c - 0.8).abs() < TOL);
        assert!(c <= plain);
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0f64).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0f64).unwrap(), 0.0);
        assert!((binary_entropy(0.5f64).unwrap() - 1.0).abs() < 1e-15);
        // Two-atom distribution with masses 4/7, 3/7.
        let direct = entropy_from_counts::<f64>([4, 3], 7);
        let h47 = binary_entropy(4.0f64 / 7.0).unwrap();
        assert!((h47 - direct).abs() < 1e-12);
        assert!((h47 - 0.985_228_136_034_252).abs() < 1e-12);
        assert!(binary_entropy(1.5f64).is_err());
        assert!(binary_entropy(-0.1f64).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn shearer_with_singletons_is_subadditivity() {
        let g = path_graph(5);
        let family = enumerate_independent_sets(&g).unwrap();
        let dist = IndicatorDistribution::new(&family);
        let singletons: Vec<VertexSet> = (0..5).map(VertexSet::singleton).collect();
        let out = shearer_check::<f64>(&dist, &singletons, 1, TOL).unwrap();
        let sum: f64 = (0..5)
            .map(|i| entropy::<f64>(&dist, &VertexSet::singleton(i)))
            .sum();
        assert!((out.rhs - sum).abs() < TOL);
        assert!((out.lhs - (13f64).log2()).abs() < TOL);
        assert!(out.pass);
    }

    #[test]
    fn shearer_is_tight_for_independent_bits() {
        let g = Graph::empty(3);
        let family = enumerate_independent_sets(&g).unwrap();
        let dist = IndicatorDistribution::new(&family);
        let pairs = [set(&[0, 1]), set(&[1, 2]), set(&[0, 2])];
        let out = shearer_check::<f64>(&dist, &pairs, 2, TOL).unwrap();
        assert!((out.lhs - 6.0).abs() < TOL);
        assert!((out.rhs - 6.0).abs() < TOL);
        assert!(out.pass);
    }

    #[test]
    fn shearer_on_neighborhoods_of_a_square() {
        // K_{2,2}: left {0, 1}, right {2, 3}; each N(r) = {0, 1}.
        let g = complete_bipartite(2, 2).unwrap();
        let family = enumerate_independent_sets(&g).unwrap();
        let left = IndicatorDistribution::new(&family).restricted(&set(&[0, 1]));
        let hoods = [g.neighbor_set(2).clone(), g.neighbor_set(3).clone()];
        let out = shearer_check::<f64>(&left, &hoods, 2, TOL).unwrap();
        assert!(out.pass);
        assert!((out.lhs - out.rhs).abs() < TOL);
    }

    #[test]
    fn shearer_ignores_outside_coordinates_and_checks_coverage() {
        let g = path_graph(3);
        let family = enumerate_independent_sets(&g).unwrap();
        let dist = IndicatorDistribution::new(&family).restricted(&set(&[0]));
        // Coordinate 7 does not exist; coordinate 2 is outside the marginal.
        let subsets = [set(&[0, 2, 7])];
        let out = shearer_check::<f64>(&dist, &subsets, 1, TOL).unwrap();
        assert!((out.lhs - out.rhs).abs() < TOL);
        let err = shearer_check::<f64>(&dist, &subsets, 2, TOL).unwrap_err();
        assert_eq!(
            err,
            EntropyError::Coverage {
                coordinate: 0,
                found: 1,
                required: 2
            }
        );
    }

    #[test]
    fn f_r_examples() {
        let x = f_r_maximizer::<f64>(2, 2).unwrap();
        assert!((x - 4.0 / 7.0).abs() < 1e-15);
        let v = f_r_value(x, 2, 2).unwrap() + 3f64.log2();
        assert!((v - 7f64.log2()).abs() < 1e-12);
        assert_eq!(f_r_value(0.0f64, 3, 5).unwrap(), 0.0);

        let x = f_r_maximizer::<f64>(2, 1).unwrap();
        assert!((x - 0.8).abs() < 1e-15);
        let v = f_r_value(x, 2, 1).unwrap();
        assert!((v - 5f64.log2()).abs() < 1e-12);
        // Grid search oracle at step 1e-6.
        let best = (0..=1_000_000)
            .map(|i| f_r_value(i as f64 * 1e-6, 2, 1).unwrap())
            .fold(f64::MIN, f64::max);
        assert!(best <= v + 1e-12 && best >= v - 1e-9);
    }

    #[test]
    fn f_r_domain_errors() {
        assert!(f_r_value(1.1f64, 1, 1).is_err());
        assert!(f_r_value(0.5f64, 0, 1).is_err());
        assert!(f_r_value(0.5f64, 1, 0).is_err());
        assert!(f_r_maximizer::<f64>(0, 1).is_err());
    }

    #[test]
    fn log2_pow2_minus_one_matches_direct() {
        for k in 1..40 {
            let direct = ((1u64 << k) as f64 - 1.0).log2();
            assert!(
                (log2_pow2_minus_one::<f64>(k) - direct).abs() < 1e-12,
                "k = {k}"
            );
        }
    }

    #[test]
    fn works_in_single_precision() {
        let g = complete_bipartite(2, 3).unwrap();
        let family = enumerate_independent_sets(&g).unwrap();
        let dist = IndicatorDistribution::new(&family);
        let e: f32 = entropy(&dist, &g.vertices());
        assert!((e - 11f32.log2()).abs() < 1e-5);
    }
}
