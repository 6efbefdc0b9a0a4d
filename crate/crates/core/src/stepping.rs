//! Good cuts and the layered constructions built on them.
//!
//! A [`Cut`] is an increasing chain of vertex sets starting at ∅. Given a
//! good cut, [`layered_cover`] and [`layered_order`] solve each fresh layer
//! separately and glue the pieces into a minimal vertex cover or a
//! maximizing order of the whole hypergraph. [`two_tier_cover`] covers a
//! mix of finite and infinite edges stage by stage over the infinite ones.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{
    brute_minimal_covers, find_witness, CertificateError, CoverError, WitnessedCover,
};
use crate::epset::{Card, EpSet};
use crate::hypergraph::{CheckOutcome, Hypergraph, HypergraphError};
use crate::wellorder::{build_maximizing, klimo_extract, Block, BlockOrder, OrderError};

/// Structural hypotheses of the two-tier construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Infinite edges meet pairwise in finitely many points.
    PairwiseFinite,
    /// No edge is contained in another.
    Antichain,
    /// Every edge is infinite.
    InfiniteEdges,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("bad cut: {0}")]
    BadCut(String),
    #[error("solver failed at layer {stage}: {reason}")]
    SolverFailure { stage: usize, reason: String },
    #[error("builder failed at layer {stage}: {reason}")]
    BuilderFailure { stage: usize, reason: String },
    #[error("property C(k,r) fails on edges {0:?}")]
    PropertyViolated(Vec<usize>),
    #[error("hypothesis {hypothesis:?} fails on edges {edges:?}")]
    HypothesisViolated {
        hypothesis: Hypothesis,
        edges: Vec<usize>,
    },
    #[error("edge {0} is infinite")]
    InfiniteEdge(usize),
    #[error("assembled certificate is invalid: {0}")]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Produces a witnessed minimal vertex cover of a hypergraph piece.
pub trait CoverSolver {
    fn solve(&self, h: &Hypergraph) -> Result<WitnessedCover, StepError>;
}

impl<F> CoverSolver for F
where
    F: Fn(&Hypergraph) -> Result<WitnessedCover, StepError>,
{
    fn solve(&self, h: &Hypergraph) -> Result<WitnessedCover, StepError> {
        self(h)
    }
}

/// Produces a maximizing block order of a hypergraph piece.
pub trait OrderBuilder {
    fn build(&self, h: &Hypergraph) -> Result<BlockOrder, StepError>;
}

impl<F> OrderBuilder for F
where
    F: Fn(&Hypergraph) -> Result<BlockOrder, StepError>,
{
    fn build(&self, h: &Hypergraph) -> Result<BlockOrder, StepError> {
        self(h)
    }
}

/// Lexicographically first minimal cover from the exhaustive oracle.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteSolver;

impl CoverSolver for BruteSolver {
    fn solve(&self, h: &Hypergraph) -> Result<WitnessedCover, StepError> {
        let covers = brute_minimal_covers(h)?;
        let first = covers
            .first()
            .expect("every hypergraph has a minimal cover");
        Ok(find_witness(h, first)?)
    }
}

/// Maximizing order for C(k, r) followed by extraction of a cover.
#[derive(Debug, Clone, Copy)]
pub struct MaxWoSolver {
    pub k: usize,
    pub r: u64,
}

impl CoverSolver for MaxWoSolver {
    fn solve(&self, h: &Hypergraph) -> Result<WitnessedCover, StepError> {
        let order = build_maximizing(h, self.k, self.r)?;
        Ok(klimo_extract(&order, h)?)
    }
}

impl OrderBuilder for MaxWoSolver {
    fn build(&self, h: &Hypergraph) -> Result<BlockOrder, StepError> {
        Ok(build_maximizing(h, self.k, self.r)?)
    }
}

/// An increasing chain `G_0 = ∅ ⊆ G_1 ⊆ … ⊆ G_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CutRepr", into = "CutRepr")]
pub struct Cut {
    layers: Vec<EpSet>,
}

#[derive(Serialize, Deserialize)]
struct CutRepr {
    layers: Vec<EpSet>,
}

impl TryFrom<CutRepr> for Cut {
    type Error = StepError;

    fn try_from(r: CutRepr) -> Result<Self, Self::Error> {
        Cut::new(r.layers)
    }
}

impl From<Cut> for CutRepr {
    fn from(c: Cut) -> Self {
        CutRepr { layers: c.layers }
    }
}

impl Cut {
    pub fn new(layers: Vec<EpSet>) -> Result<Self, StepError> {
        match layers.first() {
            None => return Err(StepError::BadCut("no layers".into())),
            Some(g0) if !g0.is_empty() => {
                return Err(StepError::BadCut("first layer is not empty".into()))
            }
            _ => {}
        }
        if let Some(i) = layers.windows(2).position(|w| !w[0].is_subset(&w[1])) {
            return Err(StepError::BadCut(format!(
                "layer {} is not contained in layer {}",
                i,
                i + 1
            )));
        }
        Ok(Cut { layers })
    }

    /// The two-layer cut `[∅, top]`.
    pub fn trivial(top: EpSet) -> Self {
        Cut {
            layers: vec![EpSet::empty(), top],
        }
    }

    pub fn layers(&self) -> &[EpSet] {
        &self.layers
    }

    pub fn last(&self) -> &EpSet {
        self.layers.last().expect("cut has a layer")
    }

    /// `G_{α+1} ∖ G_α` for each α.
    pub fn fresh_layers(&self) -> Vec<EpSet> {
        self.layers
            .windows(2)
            .map(|w| w[1].difference(&w[0]))
            .collect()
    }
}

/// `X_{<β}` for `β = 0..=seq.len()`.
pub fn prefix_unions(seq: &[EpSet]) -> Vec<EpSet> {
    let mut out = Vec::with_capacity(seq.len() + 1);
    let mut acc = EpSet::empty();
    out.push(acc.clone());
    for x in seq {
        acc = acc.union(x);
        out.push(acc.clone());
    }
    out
}

/// The layer `α` at which `edge` is captured: `edge ⊆ G_{α+1}` while
/// `|G_α ∩ edge| < |edge|`.
fn capture_layer(cut: &Cut, edge: &EpSet) -> Option<usize> {
    let size = edge.cardinality();
    cut.layers
        .windows(2)
        .position(|w| edge.is_subset(&w[1]) && w[0].intersect(edge).cardinality() < size)
}

pub fn is_good_cut(h: &Hypergraph, cut: &Cut) -> bool {
    h.universe().is_subset(cut.last()) && h.edges().iter().all(|e| capture_layer(cut, e).is_some())
}

/// `|F(x)|`: the number of distinct edges containing every point of `x`.
pub fn multiplicity(h: &Hypergraph, x: &[u64]) -> usize {
    h.containing_all(x).len()
}

/// The least superset of `m0` that absorbs every edge meeting it in at
/// least `r` points. Edges must be finite.
pub fn r_closure(small: &Hypergraph, m0: &EpSet, r: u64) -> Result<EpSet, StepError> {
    if let Some(i) = small.edges().iter().position(|e| !e.is_finite()) {
        return Err(StepError::InfiniteEdge(i));
    }
    let mut m = m0.clone();
    let mut absorbed = vec![false; small.len()];
    loop {
        let mut changed = false;
        for (i, e) in small.edges().iter().enumerate() {
            if absorbed[i] {
                continue;
            }
            if e.is_subset(&m) {
                absorbed[i] = true;
            } else if e.intersect(&m).cardinality() >= Card::Finite(r) {
                m = m.union(e);
                absorbed[i] = true;
                changed = true;
            }
        }
        if !changed {
            return Ok(m);
        }
    }
}

/// Singleton seeds sweeping a finite universe in ascending order.
pub fn default_seeds(h: &Hypergraph) -> Vec<EpSet> {
    h.universe().iter().map(EpSet::singleton).collect()
}

/// Closure chain for a finite C(k, r) hypergraph: each layer adds its seed
/// to the previous one and closes under absorbing every edge with at least
/// `r` points already inside. A final layer holding the universe is added
/// if the seeds run out first.
pub fn build_closure_chain(
    h: &Hypergraph,
    k: usize,
    r: u64,
    seeds: &[EpSet],
) -> Result<Cut, StepError> {
    if let CheckOutcome::Violation(t) = h.check_c(k, Card::Finite(r))? {
        return Err(StepError::PropertyViolated(t));
    }
    if let Some(i) = h.edges().iter().position(|e| !e.is_finite()) {
        return Err(StepError::InfiniteEdge(i));
    }
    let universe = h.universe();
    let mut layers = vec![EpSet::empty()];
    let mut current = EpSet::empty();
    for seed in seeds {
        if universe.is_subset(&current) {
            break;
        }
        current = r_closure(h, &current.union(seed), r)?;
        layers.push(current.clone());
    }
    if !universe.is_subset(&current) {
        layers.push(current.union(&universe));
    }
    Cut::new(layers)
}

fn check_cut(h: &Hypergraph, cut: &Cut) -> Result<(), StepError> {
    if !h.universe().is_subset(cut.last()) {
        return Err(StepError::BadCut(
            "last layer misses part of the universe".into(),
        ));
    }
    if let Some(i) = h
        .edges()
        .iter()
        .position(|e| capture_layer(cut, e).is_none())
    {
        return Err(StepError::BadCut(format!("edge {i} is never captured")));
    }
    Ok(())
}

fn meets_finite(edge: &EpSet, points: &BTreeSet<u64>) -> bool {
    points.iter().any(|&y| edge.contains(y))
}

/// Covers `h` layer by layer: at layer α the solver gets the edges that
/// avoid the cover so far and lie inside `G_{α+1}`, traced onto the fresh
/// part `G_{α+1} ∖ G_α`.
pub fn layered_cover<S: CoverSolver + ?Sized>(
    h: &Hypergraph,
    cut: &Cut,
    solver: &S,
) -> Result<WitnessedCover, StepError> {
    check_cut(h, cut)?;
    let mut result = WitnessedCover::default();
    for (stage, w) in cut.layers.windows(2).enumerate() {
        let fresh = w[1].difference(&w[0]);
        let open: Vec<usize> = (0..h.len())
            .filter(|&i| !meets_finite(h.edge(i), &result.cover) && h.edge(i).is_subset(&w[1]))
            .collect();
        let traced = h.subfamily(&open).restrict(&fresh);
        if traced.hypergraph.is_empty() {
            continue;
        }
        let failure = |reason: String| StepError::SolverFailure { stage, reason };
        let piece = solver
            .solve(&traced.hypergraph)
            .map_err(|e| failure(e.to_string()))?;
        piece
            .verify(&traced.hypergraph)
            .map_err(|e| failure(e.to_string()))?;
        for (&y, &j) in &piece.witness {
            result.cover.insert(y);
            result.witness.insert(y, open[traced.provenance[j]]);
        }
    }
    result.verify(h)?;
    Ok(result)
}

/// Orders `h` layer by layer: layer α orders `G_{α+1} ∖ G_α`, maximizing
/// the tails `A ∖ G_α` of the edges captured there, with the uncovered
/// part of the layer placed first in numeric order.
pub fn layered_order<B: OrderBuilder + ?Sized>(
    h: &Hypergraph,
    cut: &Cut,
    builder: &B,
) -> Result<BlockOrder, StepError> {
    check_cut(h, cut)?;
    let mut blocks: Vec<Block> = Vec::new();
    for (stage, w) in cut.layers.windows(2).enumerate() {
        let fresh = w[1].difference(&w[0]);
        if fresh.is_empty() {
            continue;
        }
        let mut tails: Vec<EpSet> = Vec::new();
        for a in h.edges() {
            if a.is_subset(&w[1]) && a.intersect(&w[0]).cardinality() < a.cardinality() {
                let t = a.difference(&w[0]);
                if !tails.contains(&t) {
                    tails.push(t);
                }
            }
        }
        let failure = |reason: String| StepError::BuilderFailure { stage, reason };
        let piece = Hypergraph::new(tails)?;
        let order = builder.build(&piece).map_err(|e| failure(e.to_string()))?;
        let covered = order.universe();
        if !covered.is_subset(&fresh) {
            return Err(failure("order leaves its layer".into()));
        }
        match order.first_unmaximized(&piece) {
            Ok(None) => {}
            Ok(Some(i)) => return Err(failure(format!("piece edge {i} has no maximum"))),
            Err(e) => return Err(failure(e.to_string())),
        }
        let leftover = fresh.difference(&covered);
        if !leftover.is_empty() {
            blocks.push(Block::natural(leftover));
        }
        blocks.extend(order.blocks().iter().cloned());
    }
    let order = BlockOrder::new(blocks)?;
    if let Some(i) = order.first_unmaximized(h)? {
        return Err(StepError::Order(OrderError::NotMaximizing(i)));
    }
    Ok(order)
}

fn check_two_tier_hypotheses(h: &Hypergraph, k: usize, r: u64) -> Result<(), StepError> {
    if let CheckOutcome::Violation(t) = h.check_c(k, Card::Finite(r))? {
        return Err(StepError::PropertyViolated(t));
    }
    for i in 0..h.len() {
        for j in 0..h.len() {
            if i == j {
                continue;
            }
            if i < j
                && !h.edge(i).is_finite()
                && !h.edge(j).is_finite()
                && !h.edge(i).intersect(h.edge(j)).is_finite()
            {
                return Err(StepError::HypothesisViolated {
                    hypothesis: Hypothesis::PairwiseFinite,
                    edges: vec![i, j],
                });
            }
            if h.edge(i).is_subset(h.edge(j)) {
                return Err(StepError::HypothesisViolated {
                    hypothesis: Hypothesis::Antichain,
                    edges: vec![i, j],
                });
            }
        }
    }
    Ok(())
}

/// Covers the traces `(edge ∖ cut_away)` of the listed finite edges with
/// `solver` and merges the result into `cover`, lifting witnesses back to
/// indices of `h`.
fn cover_residual(
    h: &Hypergraph,
    members: &[usize],
    cut_away: &EpSet,
    solver: &MaxWoSolver,
    stage: usize,
    cover: &mut WitnessedCover,
) -> Result<(), StepError> {
    let mut traces = Vec::with_capacity(members.len());
    for &b in members {
        let t = h.edge(b).difference(cut_away);
        if t.is_empty() {
            return Err(StepError::SolverFailure {
                stage,
                reason: format!("finite edge {b} has an empty residual trace"),
            });
        }
        traces.push(t);
    }
    let residual = Hypergraph::new(traces)?;
    let piece = solver.solve(&residual)?;
    piece
        .verify(&residual)
        .map_err(|e| StepError::SolverFailure {
            stage,
            reason: e.to_string(),
        })?;
    for (&z, &j) in &piece.witness {
        cover.cover.insert(z);
        cover.witness.insert(z, members[j]);
    }
    Ok(())
}

/// Minimal vertex cover of a hypergraph with property C(k, r), pairwise
/// finite intersections among its infinite edges and no edge inside
/// another.
///
/// The infinite edges are handled one per stage. An infinite edge already
/// met by the cover is skipped. Otherwise it receives a fresh point: either
/// the least point it shares with a minimal trace of an open finite edge
/// (witnessed by that finite edge), or, when it shares none, its least point
/// outside every earlier infinite edge and the processed region (witnessed
/// by the infinite edge itself). The processed region is then closed under
/// absorbing finite edges with at least `r` points inside, and the finite
/// edges newly inside it are covered through build_maximizing and
/// klimo_extract. The finite edges left at the end are covered the same way.
pub fn two_tier_cover(h: &Hypergraph, k: usize, r: u64) -> Result<WitnessedCover, StepError> {
    check_two_tier_hypotheses(h, k, r)?;
    let solver = MaxWoSolver { k, r };
    let finite: Vec<usize> = (0..h.len()).filter(|&i| h.edge(i).is_finite()).collect();
    let infinite: Vec<usize> = (0..h.len()).filter(|&i| !h.edge(i).is_finite()).collect();
    let small = h.subfamily(&finite);

    let mut region = EpSet::empty();
    let mut earlier_infinite = EpSet::empty();
    let mut result = WitnessedCover::default();

    for (stage, &c) in infinite.iter().enumerate() {
        let edge = h.edge(c);
        if meets_finite(edge, &result.cover) {
            earlier_infinite = earlier_infinite.union(edge);
            continue;
        }
        let open: Vec<usize> = finite
            .iter()
            .copied()
            .filter(|&b| !meets_finite(h.edge(b), &result.cover))
            .collect();
        let traces: Vec<EpSet> = open
            .iter()
            .map(|&b| h.edge(b).difference(&region))
            .collect();
        let minimal: Vec<usize> = (0..open.len())
            .filter(|&i| {
                (0..open.len()).all(|j| traces[j] == traces[i] || !traces[j].is_subset(&traces[i]))
            })
            .collect();
        let minimal_union = EpSet::union_all(minimal.iter().map(|&i| &traces[i]));
        let shared = edge.intersect(&minimal_union);

        let (y, witness, removed, grown) = if shared.is_empty() {
            let y = edge
                .difference(&earlier_infinite)
                .difference(&region)
                .min_element()
                .map_err(|_| StepError::HypothesisViolated {
                    hypothesis: Hypothesis::PairwiseFinite,
                    edges: vec![c],
                })?;
            // Keep the open finite edges' contact with this edge inside the
            // region, so later points never land on it.
            let contact = edge.intersect(&EpSet::union_all(&traces));
            let grown = region.union(&EpSet::singleton(y)).union(&contact);
            (y, c, EpSet::empty(), grown)
        } else {
            let y = shared.min_element().expect("nonempty");
            let pick = minimal
                .iter()
                .copied()
                .find(|&i| traces[i].contains(y))
                .expect("y lies in a minimal trace");
            let b = open[pick];
            let grown = region.union(&EpSet::singleton(y)).union(h.edge(b));
            (y, b, h.edge(b).clone(), grown)
        };
        result.cover.insert(y);
        result.witness.insert(y, witness);

        let closed = r_closure(&small, &grown, r)?;
        let fresh_inside: Vec<usize> = finite
            .iter()
            .copied()
            .filter(|&b| h.edge(b).is_subset(&closed) && !meets_finite(h.edge(b), &result.cover))
            .collect();
        cover_residual(
            h,
            &fresh_inside,
            &region.union(&removed),
            &solver,
            stage,
            &mut result,
        )?;
        region = closed;
        earlier_infinite = earlier_infinite.union(edge);
    }

    let rest: Vec<usize> = finite
        .iter()
        .copied()
        .filter(|&b| !meets_finite(h.edge(b), &result.cover))
        .collect();
    cover_residual(h, &rest, &region, &solver, infinite.len(), &mut result)?;
    result.verify(h)?;
    Ok(result)
}

/// Picks `y_α ∈ D_α` avoiding every `D_ξ ∩ D_ζ` with `ξ < ζ < α`, least
/// possible. Edges must be infinite with pairwise finite intersections.
pub fn pairwise_transversal(h: &Hypergraph) -> Result<Vec<u64>, StepError> {
    if let Some(i) = h.edges().iter().position(EpSet::is_finite) {
        return Err(StepError::HypothesisViolated {
            hypothesis: Hypothesis::InfiniteEdges,
            edges: vec![i],
        });
    }
    let mut pair_meets: BTreeMap<(usize, usize), EpSet> = BTreeMap::new();
    for j in 0..h.len() {
        for i in 0..j {
            let meet = h.edge(i).intersect(h.edge(j));
            if !meet.is_finite() {
                return Err(StepError::HypothesisViolated {
                    hypothesis: Hypothesis::PairwiseFinite,
                    edges: vec![i, j],
                });
            }
            pair_meets.insert((i, j), meet);
        }
    }
    let mut avoided = EpSet::empty();
    let mut picks = Vec::with_capacity(h.len());
    for alpha in 0..h.len() {
        let y = h
            .edge(alpha)
            .difference(&avoided)
            .min_element()
            .map_err(|_| StepError::HypothesisViolated {
                hypothesis: Hypothesis::PairwiseFinite,
                edges: vec![alpha],
            })?;
        picks.push(y);
        for xi in 0..alpha {
            avoided = avoided.union(&pair_meets[&(xi, alpha)]);
        }
    }
    Ok(picks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::brute_minimal_covers;
    use proptest::prelude::*;

    fn fin(xs: &[u64]) -> EpSet {
        EpSet::finite(xs.iter().copied())
    }

    fn graph(edges: &[&[u64]]) -> Hypergraph {
        Hypergraph::from_finite(edges.iter().map(|e| e.iter().copied())).unwrap()
    }

    fn cut(layers: &[EpSet]) -> Cut {
        Cut::new(layers.to_vec()).unwrap()
    }

    #[test]
    fn cut_validation() {
        assert!(Cut::new(vec![]).is_err());
        assert!(Cut::new(vec![fin(&[1])]).is_err());
        assert!(Cut::new(vec![EpSet::empty(), fin(&[1, 2]), fin(&[1])]).is_err());
        let text = r#"{"layers":[{"fin":[]},{"fin":[0,1]}]}"#;
        let c: Cut = serde_json::from_str(text).unwrap();
        assert_eq!(c, Cut::trivial(fin(&[0, 1])));
        assert_eq!(serde_json::to_string(&c).unwrap(), text);
    }

    #[test]
    fn prefix_union_helper() {
        let p = prefix_unions(&[fin(&[1]), fin(&[2]), fin(&[1, 3])]);
        assert_eq!(
            p,
            vec![EpSet::empty(), fin(&[1]), fin(&[1, 2]), fin(&[1, 2, 3])]
        );
    }

    #[test]
    fn good_cut_examples() {
        let h = graph(&[&[0, 1], &[2, 3]]);
        assert!(is_good_cut(
            &h,
            &cut(&[EpSet::empty(), fin(&[0, 1]), fin(&[0, 1, 2, 3])])
        ));
        let h = graph(&[&[0, 1]]);
        assert!(is_good_cut(
            &h,
            &cut(&[EpSet::empty(), fin(&[0]), fin(&[0, 1])])
        ));
        let h = Hypergraph::new(vec![EpSet::ap(0, 2)]).unwrap();
        assert!(!is_good_cut(
            &h,
            &cut(&[EpSet::empty(), EpSet::ap(0, 4), EpSet::ap(0, 2)])
        ));
        assert!(is_good_cut(
            &graph(&[&[0]]),
            &cut(&[EpSet::empty(), fin(&[0])])
        ));
        assert!(!is_good_cut(
            &graph(&[&[0, 5]]),
            &cut(&[EpSet::empty(), fin(&[0])])
        ));
    }

    #[test]
    fn closure_chain_examples() {
        let h = graph(&[&[0, 1], &[1, 2]]);
        let c = build_closure_chain(&h, 2, 2, &[fin(&[0]), fin(&[2])]).unwrap();
        assert_eq!(
            c.layers(),
            &[EpSet::empty(), fin(&[0]), fin(&[0, 2]), fin(&[0, 1, 2])]
        );
        assert!(is_good_cut(&h, &c));

        let c = build_closure_chain(&Hypergraph::default(), 2, 1, &[]).unwrap();
        assert_eq!(c.layers(), &[EpSet::empty()]);

        let c = build_closure_chain(&graph(&[&[0, 1]]), 2, 2, &[fin(&[0, 1])]).unwrap();
        assert_eq!(c.layers(), &[EpSet::empty(), fin(&[0, 1])]);

        let h = graph(&[&[0, 1, 2], &[1, 2, 3]]);
        assert_eq!(
            build_closure_chain(&h, 2, 2, &[]),
            Err(StepError::PropertyViolated(vec![0, 1]))
        );
        let c = build_closure_chain(&h, 2, 3, &default_seeds(&h)).unwrap();
        assert!(is_good_cut(&h, &c));
    }

    #[test]
    fn closure_absorbs_on_reaching_r() {
        let h = graph(&[&[0, 1, 5], &[5, 6, 7]]);
        let c = build_closure_chain(&h, 2, 2, &[fin(&[0, 1])]).unwrap();
        assert_eq!(c.layers()[1], fin(&[0, 1, 5]));
    }

    #[test]
    fn layered_cover_examples() {
        let h = graph(&[&[0, 1], &[2, 3]]);
        let c = cut(&[EpSet::empty(), fin(&[0, 1]), fin(&[0, 1, 2, 3])]);
        let w = layered_cover(&h, &c, &BruteSolver).unwrap();
        assert_eq!(w.cover, BTreeSet::from([0, 2]));
        assert_eq!(w.witness, BTreeMap::from([(0, 0), (2, 1)]));

        let w = layered_cover(
            &Hypergraph::default(),
            &Cut::trivial(EpSet::empty()),
            &BruteSolver,
        )
        .unwrap();
        assert!(w.is_empty());

        let h = graph(&[&[0, 1], &[1, 2], &[2, 3]]);
        let w = layered_cover(&h, &Cut::trivial(fin(&[0, 1, 2, 3])), &BruteSolver).unwrap();
        assert_eq!(w, BruteSolver.solve(&h).unwrap());

        let bad = cut(&[EpSet::empty(), fin(&[0])]);
        assert!(matches!(
            layered_cover(&h, &bad, &BruteSolver),
            Err(StepError::BadCut(_))
        ));
    }

    #[test]
    fn layered_cover_reports_solver_failure() {
        let h = graph(&[&[0, 1]]);
        let lazy = |_: &Hypergraph| Ok(WitnessedCover::default());
        assert!(matches!(
            layered_cover(&h, &Cut::trivial(fin(&[0, 1])), &lazy),
            Err(StepError::SolverFailure { stage: 0, .. })
        ));
    }

    #[test]
    fn layered_order_examples() {
        let maxwo = MaxWoSolver { k: 2, r: 1 };
        let h = Hypergraph::new(vec![EpSet::ap(0, 2)]).unwrap();
        let o = layered_order(&h, &Cut::trivial(EpSet::naturals()), &maxwo).unwrap();
        assert_eq!(o.edge_max(&EpSet::ap(0, 2)), Ok(Some(0)));
        assert_eq!(o.universe(), EpSet::naturals());

        let h = graph(&[&[0, 1], &[2, 3]]);
        let c = cut(&[EpSet::empty(), fin(&[0, 1]), fin(&[0, 1, 2, 3])]);
        let o = layered_order(&h, &c, &maxwo).unwrap();
        let mut vs = vec![3, 1, 2, 0];
        vs.sort_by(|&a, &b| o.compare(a, b).unwrap());
        assert_eq!(vs, vec![0, 1, 2, 3]);
        assert_eq!(o.edge_max(h.edge(0)), Ok(Some(1)));
        assert_eq!(o.edge_max(h.edge(1)), Ok(Some(3)));

        let h = Hypergraph::new(vec![EpSet::ap(0, 2), fin(&[1, 3])]).unwrap();
        let c = cut(&[EpSet::empty(), fin(&[1, 3]), EpSet::naturals()]);
        let o = layered_order(&h, &c, &maxwo).unwrap();
        assert_eq!(o.edge_max(h.edge(0)), Ok(Some(0)));
        assert_eq!(o.edge_max(h.edge(1)), Ok(Some(3)));
        assert!(o.is_maximizing(&h).unwrap());
    }

    #[test]
    fn r_closure_examples() {
        let h = graph(&[&[0, 1, 2]]);
        assert_eq!(r_closure(&h, &fin(&[0, 1]), 2).unwrap(), fin(&[0, 1, 2]));
        assert_eq!(r_closure(&h, &fin(&[0]), 2).unwrap(), fin(&[0]));
        let h = graph(&[&[0, 1, 2], &[2, 3, 4]]);
        assert_eq!(r_closure(&h, &fin(&[0, 1]), 2).unwrap(), fin(&[0, 1, 2]));
        let h = graph(&[&[2, 3, 4], &[0, 1, 2]]);
        assert_eq!(
            r_closure(&h, &fin(&[0, 1, 3]), 2).unwrap(),
            fin(&[0, 1, 2, 3, 4])
        );
        let inf = Hypergraph::new(vec![EpSet::ap(0, 2)]).unwrap();
        assert_eq!(
            r_closure(&inf, &fin(&[0]), 1),
            Err(StepError::InfiniteEdge(0))
        );
    }

    #[test]
    fn two_tier_examples() {
        let h = Hypergraph::new(vec![EpSet::ap(0, 2)]).unwrap();
        let w = two_tier_cover(&h, 2, 1).unwrap();
        assert_eq!(w.cover, BTreeSet::from([0]));
        assert_eq!(w.witness, BTreeMap::from([(0, 0)]));

        let h = Hypergraph::new(vec![EpSet::ap(0, 2), fin(&[1, 5])]).unwrap();
        let w = two_tier_cover(&h, 2, 1).unwrap();
        assert_eq!(w.cover, BTreeSet::from([0, 5]));
        assert_eq!(w.verify(&h), Ok(()));

        assert!(two_tier_cover(&Hypergraph::default(), 2, 1)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn two_tier_case_shared_point() {
        // The infinite edge meets the open finite edge {3, 4}, so it takes 4
        // and the finite edge witnesses it.
        let h = Hypergraph::new(vec![EpSet::ap(0, 4), fin(&[3, 4])]).unwrap();
        let w = two_tier_cover(&h, 2, 2).unwrap();
        assert_eq!(w.cover, BTreeSet::from([4]));
        assert_eq!(w.witness, BTreeMap::from([(4, 1)]));
    }

    #[test]
    fn two_tier_hypotheses() {
        let h = Hypergraph::new(vec![EpSet::ap(0, 2), EpSet::ap(0, 3)]).unwrap();
        assert_eq!(
            two_tier_cover(&h, 3, 1),
            Err(StepError::HypothesisViolated {
                hypothesis: Hypothesis::PairwiseFinite,
                edges: vec![0, 1]
            })
        );
        let h = Hypergraph::new(vec![EpSet::ap(0, 2), fin(&[0, 2])]).unwrap();
        assert_eq!(
            two_tier_cover(&h, 2, 3),
            Err(StepError::HypothesisViolated {
                hypothesis: Hypothesis::Antichain,
                edges: vec![1, 0]
            })
        );
        let h = graph(&[&[0, 1], &[0, 2]]);
        assert_eq!(
            two_tier_cover(&h, 2, 1),
            Err(StepError::PropertyViolated(vec![0, 1]))
        );
    }

    #[test]
    fn two_tier_matches_oracle_on_finite_instances() {
        let h = graph(&[&[0, 1, 2], &[2, 3], &[3, 4, 5], &[5, 0]]);
        let w = two_tier_cover(&h, 2, 2).unwrap();
        assert!(brute_minimal_covers(&h).unwrap().contains(&w.cover));
    }

    #[test]
    fn transversal_examples() {
        let h = Hypergraph::new(vec![EpSet::ap(0, 2), EpSet::ap(1, 2)]).unwrap();
        assert_eq!(pairwise_transversal(&h).unwrap(), vec![0, 1]);
        let h = Hypergraph::new(vec![EpSet::ap(0, 2), EpSet::ap(0, 3)]).unwrap();
        assert!(matches!(
            pairwise_transversal(&h),
            Err(StepError::HypothesisViolated {
                hypothesis: Hypothesis::PairwiseFinite,
                ..
            })
        ));
        // Only pairs strictly before α are avoided, so y_1 may reuse 0.
        let h = Hypergraph::new(vec![EpSet::ap(0, 4), fin(&[0]).union(&EpSet::ap(1, 4))]).unwrap();
        assert_eq!(pairwise_transversal(&h).unwrap(), vec![0, 0]);
        let h = Hypergraph::new(vec![
            EpSet::ap(0, 4),
            fin(&[0]).union(&EpSet::ap(1, 4)),
            fin(&[0, 1]).union(&EpSet::ap(2, 4)),
        ])
        .unwrap();
        assert_eq!(pairwise_transversal(&h).unwrap(), vec![0, 0, 1]);
        let h = graph(&[&[1]]);
        assert!(matches!(
            pairwise_transversal(&h),
            Err(StepError::HypothesisViolated {
                hypothesis: Hypothesis::InfiniteEdges,
                ..
            })
        ));
    }

    fn arb_finite_graph() -> impl Strategy<Value = Hypergraph> {
        prop::collection::vec(prop::collection::btree_set(0u64..8, 1..4), 0..6)
            .prop_map(|es| Hypergraph::from_finite(es).unwrap())
    }

    fn arb_points() -> impl Strategy<Value = EpSet> {
        prop::collection::btree_set(0u64..8, 0..5).prop_map(EpSet::finite)
    }

    /// Smallest r with C(2, r): one more than the largest pairwise meet.
    fn pairwise_r(h: &Hypergraph) -> u64 {
        let mut r = 1;
        for i in 0..h.len() {
            for j in 0..i {
                if h.edge(i) != h.edge(j) {
                    if let Card::Finite(n) = h.edge(i).intersect(h.edge(j)).cardinality() {
                        r = r.max(n + 1);
                    }
                }
            }
        }
        r
    }

    proptest! {
        #[test]
        fn r_closure_is_a_closure(h in arb_finite_graph(), m in arb_points(), extra in arb_points(), r in 1u64..4) {
            let c = r_closure(&h, &m, r).unwrap();
            prop_assert!(m.is_subset(&c));
            prop_assert_eq!(r_closure(&h, &c, r).unwrap(), c.clone());
            let bigger = r_closure(&h, &m.union(&extra), r).unwrap();
            prop_assert!(c.is_subset(&bigger));
            for e in h.edges() {
                prop_assert!(e.is_subset(&c) || e.intersect(&c).cardinality() < Card::Finite(r));
            }
        }

        #[test]
        fn closure_chains_are_good_cuts(h in arb_finite_graph()) {
            let r = pairwise_r(&h);
            let c = build_closure_chain(&h, 2, r, &default_seeds(&h)).unwrap();
            prop_assert!(is_good_cut(&h, &c));
            let w = layered_cover(&h, &c, &BruteSolver).unwrap();
            prop_assert!(brute_minimal_covers(&h).unwrap().contains(&w.cover));
            let o = layered_order(&h, &c, &MaxWoSolver { k: 2, r }).unwrap();
            prop_assert!(o.is_maximizing(&h).unwrap());
        }

        #[test]
        fn two_tier_on_finite_antichains(h in arb_finite_graph()) {
            let r = pairwise_r(&h);
            match two_tier_cover(&h, 2, r) {
                Ok(w) => prop_assert!(brute_minimal_covers(&h).unwrap().contains(&w.cover)),
                Err(StepError::HypothesisViolated { hypothesis, edges }) => {
                    prop_assert_eq!(hypothesis, Hypothesis::Antichain);
                    prop_assert!(h.edge(edges[0]).is_subset(h.edge(edges[1])));
                }
                Err(e) => prop_assert!(false, "unexpected {}", e),
            }
        }
    }
}
