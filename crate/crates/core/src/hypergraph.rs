//! Indexed hypergraphs over [`EpSet`] edges and the family operators on them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epset::{Card, EpSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("edge {0} is empty")]
    EmptyEdge(usize),
    #[error("arity must be at least 1, got {0}")]
    BadArity(usize),
    #[error("intersection bound must be at least 1")]
    BadBound,
}

/// Selection predicates on edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    /// Edges containing the point.
    ContainsPoint(u64),
    /// Edges meeting the set.
    Meets(EpSet),
    /// Edges disjoint from the set.
    Avoids(EpSet),
}

/// Outcome of a property C(k, rho) test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Ok,
    /// Ascending edge indices of `k` distinct edges whose intersection is
    /// at least rho.
    Violation(Vec<usize>),
}

impl CheckOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, CheckOutcome::Ok)
    }
}

/// Traces of a hypergraph on a set, with `provenance[i]` naming the source
/// edge of trace `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub hypergraph: Hypergraph,
    pub provenance: Vec<usize>,
}

/// A finite indexed family of nonempty edges. The vertex universe is the
/// union of the edges.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "HypergraphRepr", into = "HypergraphRepr")]
pub struct Hypergraph {
    edges: Vec<EpSet>,
}

#[derive(Serialize, Deserialize)]
struct HypergraphRepr {
    edges: Vec<EpSet>,
}

impl TryFrom<HypergraphRepr> for Hypergraph {
    type Error = HypergraphError;

    fn try_from(r: HypergraphRepr) -> Result<Self, Self::Error> {
        Hypergraph::new(r.edges)
    }
}

impl From<Hypergraph> for HypergraphRepr {
    fn from(h: Hypergraph) -> Self {
        HypergraphRepr { edges: h.edges }
    }
}

impl Hypergraph {
    pub fn new(edges: Vec<EpSet>) -> Result<Self, HypergraphError> {
        if let Some(i) = edges.iter().position(EpSet::is_empty) {
            return Err(HypergraphError::EmptyEdge(i));
        }
        Ok(Hypergraph { edges })
    }

    /// Convenience constructor for finite edges.
    pub fn from_finite<I, E>(edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = u64>,
    {
        Self::new(edges.into_iter().map(EpSet::finite).collect())
    }

    pub fn edges(&self) -> &[EpSet] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &EpSet {
        &self.edges[index]
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn universe(&self) -> EpSet {
        EpSet::union_all(&self.edges)
    }

    pub fn has_finite_edges(&self) -> bool {
        self.edges.iter().all(EpSet::is_finite)
    }

    /// The sub-family at `indices`, in the given order.
    pub fn subfamily(&self, indices: &[usize]) -> Hypergraph {
        Hypergraph {
            edges: indices.iter().map(|&i| self.edges[i].clone()).collect(),
        }
    }

    /// Pairs `(later, first)` of edges with the same denotation.
    pub fn duplicate_edges(&self) -> Vec<(usize, usize)> {
        let mut first: BTreeMap<&EpSet, usize> = BTreeMap::new();
        let mut dups = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            match first.get(e) {
                Some(&j) => dups.push((i, j)),
                None => {
                    first.insert(e, i);
                }
            }
        }
        dups
    }

    /// Lowest index of each distinct edge, ascending.
    pub fn distinct_indices(&self) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        (0..self.edges.len())
            .filter(|&i| seen.insert(&self.edges[i]))
            .collect()
    }

    pub fn spectrum(&self) -> BTreeSet<Card> {
        self.edges.iter().map(EpSet::cardinality).collect()
    }

    pub fn select(&self, selector: &Selector) -> Vec<usize> {
        let keep = |e: &EpSet| match selector {
            Selector::ContainsPoint(x) => e.contains(*x),
            Selector::Meets(y) => e.intersects(y),
            Selector::Avoids(y) => !e.intersects(y),
        };
        (0..self.edges.len())
            .filter(|&i| keep(&self.edges[i]))
            .collect()
    }

    /// Distinct edges containing every point of `points`.
    pub fn containing_all(&self, points: &[u64]) -> Vec<usize> {
        self.distinct_indices()
            .into_iter()
            .filter(|&i| points.iter().all(|&x| self.edges[i].contains(x)))
            .collect()
    }

    /// Nonempty traces `F ∩ Y` of the edges meeting `Y`.
    pub fn restrict(&self, y: &EpSet) -> Restriction {
        let mut edges = Vec::new();
        let mut provenance = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let trace = e.intersect(y);
            if !trace.is_empty() {
                edges.push(trace);
                provenance.push(i);
            }
        }
        Restriction {
            hypergraph: Hypergraph { edges },
            provenance,
        }
    }

    /// Indices of the edges contained in `Y`.
    pub fn confine(&self, y: &EpSet) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].is_subset(y))
            .collect()
    }

    /// Tests property C(k, rho): every `k` distinct edges meet in fewer
    /// than `rho` points. Duplicate edges count once. On failure the
    /// lexicographically first violating tuple is returned.
    pub fn check_c(&self, k: usize, rho: Card) -> Result<CheckOutcome, HypergraphError> {
        if k == 0 {
            return Err(HypergraphError::BadArity(k));
        }
        if rho == Card::Finite(0) {
            return Err(HypergraphError::BadBound);
        }
        let distinct = self.distinct_indices();
        let mut chosen = Vec::with_capacity(k);
        if self.find_heavy_tuple(&distinct, k, rho, 0, None, &mut chosen) {
            Ok(CheckOutcome::Violation(chosen))
        } else {
            Ok(CheckOutcome::Ok)
        }
    }

    fn find_heavy_tuple(
        &self,
        distinct: &[usize],
        k: usize,
        rho: Card,
        start: usize,
        current: Option<&EpSet>,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == k {
            return true;
        }
        let needed = k - chosen.len();
        for pos in start..distinct.len() {
            if distinct.len() - pos < needed {
                break;
            }
            let i = distinct[pos];
            let next = match current {
                Some(c) => c.intersect(&self.edges[i]),
                None => self.edges[i].clone(),
            };
            // Extensions only shrink the intersection.
            if next.cardinality() < rho {
                continue;
            }
            chosen.push(i);
            if self.find_heavy_tuple(distinct, k, rho, pos + 1, Some(&next), chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// Indices of the inclusion-minimal edges; duplicates keep their lowest
    /// index.
    pub fn min_family(&self) -> Vec<usize> {
        let distinct = self.distinct_indices();
        distinct
            .iter()
            .copied()
            .filter(|&i| {
                distinct
                    .iter()
                    .all(|&j| j == i || !self.edges[j].is_subset(&self.edges[i]))
            })
            .collect()
    }

    /// Whether `self` is a shrink of `a`: each edge sits inside an edge of
    /// `a` that loses fewer points than its own size.
    pub fn is_shrink_of(&self, a: &Hypergraph) -> bool {
        self.edges.iter().all(|b| {
            a.edges
                .iter()
                .any(|big| b.is_subset(big) && big.difference(b).cardinality() < big.cardinality())
        })
    }
}

/// Free-function form of [`Hypergraph::is_shrink_of`].
pub fn is_shrink(b: &Hypergraph, a: &Hypergraph) -> bool {
    b.is_shrink_of(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fin(xs: &[u64]) -> EpSet {
        EpSet::finite(xs.iter().copied())
    }

    fn finite_graph(edges: &[&[u64]]) -> Hypergraph {
        Hypergraph::new(edges.iter().map(|e| fin(e)).collect()).unwrap()
    }

    #[test]
    fn rejects_empty_edges() {
        assert_eq!(
            Hypergraph::new(vec![fin(&[1]), EpSet::empty()]),
            Err(HypergraphError::EmptyEdge(1))
        );
        let parsed: Result<Hypergraph, _> = serde_json::from_str(r#"{"edges":[{"fin":[]}]}"#);
        assert!(parsed.is_err());
    }

    #[test]
    fn spectrum_examples() {
        let h = Hypergraph::new(vec![fin(&[1]), fin(&[2, 3]), EpSet::ap(0, 2)]).unwrap();
        assert_eq!(
            h.spectrum().into_iter().collect::<Vec<_>>(),
            vec![Card::Finite(1), Card::Finite(2), Card::Aleph0]
        );
        assert_eq!(
            finite_graph(&[&[0]])
                .spectrum()
                .into_iter()
                .collect::<Vec<_>>(),
            vec![Card::Finite(1)]
        );
        let h = Hypergraph::new(vec![EpSet::ap(0, 2), EpSet::ap(1, 2)]).unwrap();
        assert_eq!(
            h.spectrum().into_iter().collect::<Vec<_>>(),
            vec![Card::Aleph0]
        );
    }

    #[test]
    fn selectors() {
        let h = finite_graph(&[&[1, 2, 3], &[2, 3, 4], &[1, 4]]);
        let with2: BTreeSet<usize> = h.select(&Selector::ContainsPoint(2)).into_iter().collect();
        let with3: BTreeSet<usize> = h.select(&Selector::ContainsPoint(3)).into_iter().collect();
        assert_eq!(
            with2.intersection(&with3).copied().collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert_eq!(h.containing_all(&[2, 3]), vec![0, 1]);

        let h = finite_graph(&[&[1], &[2]]);
        assert_eq!(h.select(&Selector::Meets(fin(&[2]))), vec![1]);

        let h = Hypergraph::new(vec![EpSet::ap(0, 2), fin(&[1])]).unwrap();
        assert_eq!(h.select(&Selector::Avoids(fin(&[0, 2]))), vec![1]);
    }

    #[test]
    fn restriction_and_confinement() {
        let r = finite_graph(&[&[1, 2], &[3]]).restrict(&fin(&[1]));
        assert_eq!(r.hypergraph, finite_graph(&[&[1]]));
        assert_eq!(r.provenance, vec![0]);
        assert!(finite_graph(&[&[1, 2]])
            .restrict(&fin(&[3]))
            .hypergraph
            .is_empty());
        let h = Hypergraph::new(vec![EpSet::ap(0, 2), EpSet::ap(1, 2)]).unwrap();
        let r = h.restrict(&EpSet::ap(0, 4));
        assert_eq!(r.hypergraph.edges(), &[EpSet::ap(0, 4)]);
        assert_eq!(r.provenance, vec![0]);

        assert_eq!(finite_graph(&[&[1], &[1, 2]]).confine(&fin(&[1])), vec![0]);
        assert!(finite_graph(&[&[1]]).confine(&EpSet::empty()).is_empty());
        let h = Hypergraph::new(vec![EpSet::ap(0, 6), EpSet::ap(1, 2)]).unwrap();
        assert_eq!(h.confine(&EpSet::ap(0, 2)), vec![0]);
    }

    #[test]
    fn property_c_examples() {
        let h = finite_graph(&[&[1, 2], &[3, 4]]);
        assert_eq!(h.check_c(2, Card::Finite(1)), Ok(CheckOutcome::Ok));
        let h = finite_graph(&[&[1, 2, 3, 4], &[2, 3, 4, 5]]);
        assert_eq!(
            h.check_c(2, Card::Finite(3)),
            Ok(CheckOutcome::Violation(vec![0, 1]))
        );
        let h = Hypergraph::new(vec![EpSet::ap(0, 2), EpSet::ap(0, 3), EpSet::ap(0, 5)]).unwrap();
        assert_eq!(
            h.check_c(3, Card::Finite(4)),
            Ok(CheckOutcome::Violation(vec![0, 1, 2]))
        );
        assert_eq!(
            h.check_c(3, Card::Aleph0),
            Ok(CheckOutcome::Violation(vec![0, 1, 2]))
        );
        assert_eq!(
            h.check_c(0, Card::Aleph0),
            Err(HypergraphError::BadArity(0))
        );
        assert_eq!(
            h.check_c(2, Card::Finite(0)),
            Err(HypergraphError::BadBound)
        );
    }

    #[test]
    fn duplicates_collapse_in_property_c() {
        let h = finite_graph(&[&[1, 2], &[1, 2], &[3]]);
        assert_eq!(h.duplicate_edges(), vec![(1, 0)]);
        assert_eq!(h.check_c(2, Card::Finite(1)), Ok(CheckOutcome::Ok));
    }

    #[test]
    fn min_family_examples() {
        assert_eq!(finite_graph(&[&[1], &[1, 2]]).min_family(), vec![0]);
        assert_eq!(finite_graph(&[&[1], &[2]]).min_family(), vec![0, 1]);
        let h = Hypergraph::new(vec![EpSet::ap(0, 2), EpSet::ap(0, 6), EpSet::ap(1, 2)]).unwrap();
        assert_eq!(h.min_family(), vec![1, 2]);
        assert_eq!(finite_graph(&[&[4], &[4], &[4, 5]]).min_family(), vec![0]);
    }

    #[test]
    fn shrink_examples() {
        assert!(is_shrink(
            &finite_graph(&[&[1, 2]]),
            &finite_graph(&[&[1, 2, 3]])
        ));
        assert!(is_shrink(&finite_graph(&[&[1]]), &finite_graph(&[&[1, 2]])));
        assert!(is_shrink(
            &finite_graph(&[&[1]]),
            &finite_graph(&[&[1, 2, 3, 4]])
        ));
        assert!(!is_shrink(
            &finite_graph(&[&[1]]),
            &finite_graph(&[&[2, 3]])
        ));
        let b = Hypergraph::new(vec![EpSet::ap(0, 2).difference(&fin(&[0]))]).unwrap();
        let a = Hypergraph::new(vec![EpSet::ap(0, 2)]).unwrap();
        assert!(is_shrink(&b, &a));
        let b = Hypergraph::new(vec![EpSet::ap(0, 4)]).unwrap();
        assert!(!is_shrink(&b, &a));
    }

    fn brute_check(h: &Hypergraph, k: usize, rho: Card) -> bool {
        let distinct = h.distinct_indices();
        let n = distinct.len();
        if n < k {
            return true;
        }
        // every k-subset, by bitmask
        (0u32..(1 << n))
            .filter(|m| m.count_ones() as usize == k)
            .all(|m| {
                let mut acc = EpSet::naturals();
                for (bit, &i) in distinct.iter().enumerate() {
                    if m & (1 << bit) != 0 {
                        acc = acc.intersect(h.edge(i));
                    }
                }
                acc.cardinality() < rho
            })
    }

    fn arb_small_graph() -> impl Strategy<Value = Hypergraph> {
        prop::collection::vec(
            prop_oneof![
                prop::collection::btree_set(0u64..8, 1..5).prop_map(EpSet::finite),
                (0u64..6, 1u64..5).prop_map(|(a, d)| EpSet::ap(a, d)),
            ],
            0..6,
        )
        .prop_map(|edges| Hypergraph::new(edges).unwrap())
    }

    fn arb_bound() -> impl Strategy<Value = Card> {
        prop_oneof![(1u64..5).prop_map(Card::Finite), Just(Card::Aleph0)]
    }

    proptest! {
        #[test]
        fn check_c_matches_brute_force(h in arb_small_graph(), k in 1usize..5, rho in arb_bound()) {
            let out = h.check_c(k, rho).unwrap();
            prop_assert_eq!(out.is_ok(), brute_check(&h, k, rho));
            if let CheckOutcome::Violation(t) = out {
                prop_assert_eq!(t.len(), k);
                let meet = t.iter().fold(EpSet::naturals(), |acc, &i| acc.intersect(h.edge(i)));
                prop_assert!(meet.cardinality() >= rho);
            }
        }

        #[test]
        fn check_c_is_monotone(h in arb_small_graph(), k in 1usize..4, r in 1u64..4) {
            if h.check_c(k, Card::Finite(r)).unwrap().is_ok() {
                prop_assert!(h.check_c(k + 1, Card::Finite(r)).unwrap().is_ok());
                prop_assert!(h.check_c(k, Card::Finite(r + 1)).unwrap().is_ok());
                prop_assert!(h.check_c(k, Card::Aleph0).unwrap().is_ok());
            }
        }

        #[test]
        fn meets_and_avoids_partition(h in arb_small_graph(), y in prop::collection::btree_set(0u64..10, 0..4)) {
            let y = EpSet::finite(y);
            let mut all = h.select(&Selector::Meets(y.clone()));
            let avoid = h.select(&Selector::Avoids(y));
            prop_assert!(all.iter().all(|i| !avoid.contains(i)));
            all.extend(avoid);
            all.sort_unstable();
            prop_assert_eq!(all, (0..h.len()).collect::<Vec<_>>());
        }

        #[test]
        fn restriction_has_no_empty_edge(h in arb_small_graph(), y in prop::collection::btree_set(0u64..10, 0..4)) {
            let r = h.restrict(&EpSet::finite(y));
            prop_assert!(r.hypergraph.edges().iter().all(|e| !e.is_empty()));
            prop_assert!(r.hypergraph.edges().iter().zip(&r.provenance)
                .all(|(t, &i)| t.is_subset(h.edge(i))));
        }

        #[test]
        fn min_family_lies_below_every_edge(h in arb_small_graph()) {
            let mins = h.min_family();
            for e in h.edges() {
                prop_assert!(mins.iter().any(|&i| h.edge(i).is_subset(e)));
            }
        }

        #[test]
        fn deleting_few_points_is_a_shrink(
            edges in prop::collection::vec(prop::collection::btree_set(0u64..12, 2..6), 1..5),
            drop in 0usize..4,
        ) {
            let a = Hypergraph::new(edges.iter().cloned().map(EpSet::finite).collect()).unwrap();
            let b = Hypergraph::new(edges.iter().map(|e| {
                let keep = e.len() - drop.min(e.len() - 1);
                EpSet::finite(e.iter().copied().take(keep))
            }).collect()).unwrap();
            prop_assert!(is_shrink(&b, &a));
        }
    }
}
