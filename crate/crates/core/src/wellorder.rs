//! Block well-orders of the vertex universe.
//!
//! A [`BlockOrder`] stacks disjoint [`Block`]s: every vertex of an earlier
//! block precedes every vertex of a later one, and inside a block the
//! [`InnerOrder`] decides. Inner orders are numeric (type at most ω), numeric
//! with one promoted top vertex (type at most ω+1), or a nested block order,
//! so every order built here is a well-order and edge maxima are decidable.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::WitnessedCover;
use crate::epset::{Card, EpSet};
use crate::hypergraph::{CheckOutcome, Hypergraph, HypergraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("vertex {0} is not ordered")]
    UnknownVertex(u64),
    #[error("edge is empty")]
    EmptyEdge,
    #[error("edge has vertices outside the ordered universe")]
    UnknownVertices,
    #[error("hypergraph universe is not contained in the ordered universe")]
    UniverseMismatch,
    #[error("property C(k,r) fails on edges {0:?}")]
    PropertyViolated(Vec<usize>),
    #[error("edge {0} has no maximum")]
    NotMaximizing(usize),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("invalid block order: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerOrder {
    /// Ascending numeric order.
    #[serde(rename = "nat")]
    Natural,
    /// Numeric order with the given vertex lifted above all others.
    Promoted(u64),
    /// A block order on the block's ground set.
    Nested(BlockOrder),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub ground: EpSet,
    pub inner: InnerOrder,
}

impl Block {
    pub fn natural(ground: EpSet) -> Self {
        Block {
            ground,
            inner: InnerOrder::Natural,
        }
    }

    fn compare(&self, u: u64, v: u64) -> Ordering {
        match &self.inner {
            InnerOrder::Natural => u.cmp(&v),
            InnerOrder::Promoted(p) => match (u == *p, v == *p) {
                (true, true) => Ordering::Equal,
                (true, false) => Ordering::Greater,
                (false, true) => Ordering::Less,
                (false, false) => u.cmp(&v),
            },
            InnerOrder::Nested(sub) => sub.compare(u, v).expect("nested order covers its block"),
        }
    }

    /// Maximum of a nonempty trace `t ⊆ ground`.
    fn trace_max(&self, t: &EpSet) -> Option<u64> {
        match &self.inner {
            InnerOrder::Natural => t.max_element(),
            InnerOrder::Promoted(p) if t.contains(*p) => Some(*p),
            InnerOrder::Promoted(_) => t.max_element(),
            InnerOrder::Nested(sub) => sub.edge_max(t).expect("nested order covers its block"),
        }
    }

    fn without(&self, v: u64) -> Option<Block> {
        if !self.ground.contains(v) {
            return Some(self.clone());
        }
        let ground = self.ground.difference(&EpSet::singleton(v));
        if ground.is_empty() {
            return None;
        }
        let inner = match &self.inner {
            InnerOrder::Natural => InnerOrder::Natural,
            InnerOrder::Promoted(p) if *p == v => InnerOrder::Natural,
            InnerOrder::Promoted(p) => InnerOrder::Promoted(*p),
            InnerOrder::Nested(sub) => return Some(BlockOrder::wrap(ground, sub.without(v))),
        };
        Some(Block { ground, inner })
    }
}

/// A stacked-block well-order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Block>", into = "Vec<Block>")]
pub struct BlockOrder {
    blocks: Vec<Block>,
}

impl TryFrom<Vec<Block>> for BlockOrder {
    type Error = OrderError;

    fn try_from(blocks: Vec<Block>) -> Result<Self, Self::Error> {
        BlockOrder::new(blocks)
    }
}

impl From<BlockOrder> for Vec<Block> {
    fn from(o: BlockOrder) -> Self {
        o.blocks
    }
}

impl BlockOrder {
    /// Validates the block invariants: nonempty pairwise disjoint grounds,
    /// promoted vertices inside their block, nested orders exactly on their
    /// block.
    pub fn new(blocks: Vec<Block>) -> Result<Self, OrderError> {
        let mut seen = EpSet::empty();
        for (i, b) in blocks.iter().enumerate() {
            if b.ground.is_empty() {
                return Err(OrderError::Invalid(format!("block {i} is empty")));
            }
            if b.ground.intersects(&seen) {
                return Err(OrderError::Invalid(format!(
                    "block {i} overlaps an earlier block"
                )));
            }
            seen = seen.union(&b.ground);
            match &b.inner {
                InnerOrder::Natural => {}
                InnerOrder::Promoted(p) => {
                    if !b.ground.contains(*p) {
                        return Err(OrderError::Invalid(format!(
                            "promoted vertex {p} is outside block {i}"
                        )));
                    }
                }
                InnerOrder::Nested(sub) => {
                    if sub.universe() != b.ground {
                        return Err(OrderError::Invalid(format!(
                            "nested order of block {i} does not cover exactly its ground"
                        )));
                    }
                }
            }
        }
        Ok(BlockOrder { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn universe(&self) -> EpSet {
        EpSet::union_all(self.blocks.iter().map(|b| &b.ground))
    }

    /// Appends the blocks of `other`, which must be disjoint from `self`.
    pub fn concat(mut self, other: BlockOrder) -> Result<Self, OrderError> {
        self.blocks.extend(other.blocks);
        BlockOrder::new(self.blocks)
    }

    fn locate(&self, x: u64) -> Option<usize> {
        self.blocks.iter().position(|b| b.ground.contains(x))
    }

    pub fn compare(&self, u: u64, v: u64) -> Result<Ordering, OrderError> {
        let i = self.locate(u).ok_or(OrderError::UnknownVertex(u))?;
        let j = self.locate(v).ok_or(OrderError::UnknownVertex(v))?;
        Ok(match i.cmp(&j) {
            Ordering::Equal => self.blocks[i].compare(u, v),
            other => other,
        })
    }

    /// The maximum of `edge`, or `None` when it has none. The last block
    /// meeting the edge holds the maximum if there is one.
    pub fn edge_max(&self, edge: &EpSet) -> Result<Option<u64>, OrderError> {
        if edge.is_empty() {
            return Err(OrderError::EmptyEdge);
        }
        if !edge.is_subset(&self.universe()) {
            return Err(OrderError::UnknownVertices);
        }
        for block in self.blocks.iter().rev() {
            let trace = edge.intersect(&block.ground);
            if !trace.is_empty() {
                return Ok(block.trace_max(&trace));
            }
        }
        unreachable!("nonempty edge inside the universe meets some block")
    }

    /// First edge of `h` without a maximum.
    pub fn first_unmaximized(&self, h: &Hypergraph) -> Result<Option<usize>, OrderError> {
        if !h.universe().is_subset(&self.universe()) {
            return Err(OrderError::UniverseMismatch);
        }
        for (i, e) in h.edges().iter().enumerate() {
            if self.edge_max(e)?.is_none() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn is_maximizing(&self, h: &Hypergraph) -> Result<bool, OrderError> {
        Ok(self.first_unmaximized(h)?.is_none())
    }

    /// The same order with `v` removed.
    fn without(&self, v: u64) -> BlockOrder {
        BlockOrder {
            blocks: self.blocks.iter().filter_map(|b| b.without(v)).collect(),
        }
    }

    /// The same order with `v` moved above everything else.
    fn promote(&self, v: u64) -> BlockOrder {
        if let [only] = self.blocks.as_slice() {
            if only.inner == InnerOrder::Natural {
                return BlockOrder {
                    blocks: vec![Block {
                        ground: only.ground.clone(),
                        inner: InnerOrder::Promoted(v),
                    }],
                };
            }
        }
        let mut lowered = self.without(v);
        lowered.blocks.push(Block::natural(EpSet::singleton(v)));
        lowered
    }

    /// A block on `ground` ordered by `order`, collapsing a single block.
    fn wrap(ground: EpSet, mut order: BlockOrder) -> Block {
        if order.blocks.len() == 1 {
            let only = order.blocks.pop().expect("one block");
            debug_assert_eq!(only.ground, ground);
            return only;
        }
        Block {
            ground,
            inner: InnerOrder::Nested(order),
        }
    }
}

/// `B_n = A_n ∖ ⋃_{i<n} A_i`; entries may be empty.
pub fn disjointify(h: &Hypergraph) -> Vec<EpSet> {
    let mut seen = EpSet::empty();
    h.edges()
        .iter()
        .map(|a| {
            let b = a.difference(&seen);
            seen = seen.union(a);
            b
        })
        .collect()
}

/// For each `n` with `B_n` nonempty, the distinct nonempty traces
/// `A_m ∩ B_n` with `m > n` and `A_m ≠ A_n`.
pub fn subsystems(h: &Hypergraph) -> Vec<(usize, EpSet, Hypergraph)> {
    let pieces = disjointify(h);
    let edges = h.edges();
    pieces
        .into_iter()
        .enumerate()
        .filter(|(_, b)| !b.is_empty())
        .map(|(n, b)| {
            let mut traces: Vec<EpSet> = Vec::new();
            for a in &edges[n + 1..] {
                if *a == edges[n] {
                    continue;
                }
                let t = a.intersect(&b);
                if !t.is_empty() && !traces.contains(&t) {
                    traces.push(t);
                }
            }
            let sub = Hypergraph::new(traces).expect("traces are nonempty");
            (n, b, sub)
        })
        .collect()
}

/// Builds a maximizing block order for a hypergraph with property C(k, r)
/// by induction on `k`.
pub fn build_maximizing(h: &Hypergraph, k: usize, r: u64) -> Result<BlockOrder, OrderError> {
    if let CheckOutcome::Violation(t) = h.check_c(k, Card::Finite(r))? {
        return Err(OrderError::PropertyViolated(t));
    }
    Ok(build_unchecked(h, k))
}

fn build_unchecked(h: &Hypergraph, k: usize) -> BlockOrder {
    if h.is_empty() {
        return BlockOrder::default();
    }
    if k <= 1 {
        // all edges are smaller than r
        return BlockOrder {
            blocks: vec![Block::natural(h.universe())],
        };
    }
    let mut blocks = Vec::new();
    for (_, piece, sub) in subsystems(h) {
        let sub_order = build_unchecked(&sub, k - 1);
        let leftover = piece.difference(&sub_order.universe());
        let mut inner = BlockOrder::default();
        if !leftover.is_empty() {
            inner.blocks.push(Block::natural(leftover));
        }
        inner.blocks.extend(sub_order.blocks);
        if inner.edge_max(&piece).expect("piece is ordered").is_none() {
            let top = piece.min_element().expect("piece is nonempty");
            inner = inner.promote(top);
        }
        blocks.push(BlockOrder::wrap(piece, inner));
    }
    BlockOrder { blocks }
}

/// Reads a minimal vertex cover off a maximizing order: walking the edge
/// maxima upward, admit a maximum when one of its edges is still
/// uncovered, and let that edge witness it.
pub fn klimo_extract(order: &BlockOrder, h: &Hypergraph) -> Result<WitnessedCover, OrderError> {
    if let Some(i) = order.first_unmaximized(h)? {
        return Err(OrderError::NotMaximizing(i));
    }
    let maxima: Vec<u64> = h
        .edges()
        .iter()
        .map(|e| order.edge_max(e).map(|m| m.expect("maximizing order")))
        .collect::<Result<_, _>>()?;
    let mut tops: Vec<u64> = maxima
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    tops.sort_by(|&u, &v| order.compare(u, v).expect("maxima are ordered"));
    let mut result = WitnessedCover::default();
    for v in tops {
        let open = (0..h.len())
            .find(|&i| maxima[i] == v && !result.cover.iter().any(|&y| h.edge(i).contains(y)));
        if let Some(i) = open {
            result.cover.insert(v);
            result.witness.insert(v, i);
        }
    }
    Ok(result)
}
