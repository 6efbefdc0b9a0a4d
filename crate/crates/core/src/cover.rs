//! Vertex covers, witnessing functions and the exhaustive cover oracle.
//!
//! A cover `Y` of a hypergraph is minimal exactly when every `y ∈ Y` has a
//! witness edge `w(y)` with `w(y) ∩ Y = {y}`. [`WitnessedCover`] stores such
//! a pair and [`WitnessedCover::verify`] re-checks it against a hypergraph.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epset::EpSet;
use crate::hypergraph::Hypergraph;

/// Default universe bound for [`brute_minimal_covers`].
pub const DEFAULT_BRUTE_BOUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("not a vertex cover: edge {edge} is missed")]
    NotACover { edge: usize },
    #[error("no witness edge for vertex {0}")]
    NoWitness(u64),
    #[error("universe has {size} vertices, oracle bound is {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("edge {0} is infinite")]
    InfiniteEdge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("edge {0} is not covered")]
    Uncovered(usize),
    #[error("vertex {0} has no witness")]
    MissingWitness(u64),
    #[error("witness for vertex {0} is not in the cover")]
    StrayWitness(u64),
    #[error("edge index {edge} (witness of {vertex}) is out of range")]
    UnknownEdge { vertex: u64, edge: usize },
    #[error("witness edge {edge} of vertex {vertex} meets the cover outside {vertex}")]
    BadWitness { vertex: u64, edge: usize },
    #[error("edge {0} witnesses two vertices")]
    SharedWitness(usize),
}

/// A finite vertex cover together with a witnessing map into edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WitnessedCover {
    #[serde(rename = "Y")]
    pub cover: BTreeSet<u64>,
    #[serde(rename = "w")]
    pub witness: BTreeMap<u64, usize>,
}

impl WitnessedCover {
    pub fn len(&self) -> usize {
        self.cover.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cover.is_empty()
    }

    pub fn cover_set(&self) -> EpSet {
        EpSet::finite(self.cover.iter().copied())
    }

    /// Checks the cover property, every witness condition and injectivity.
    pub fn verify(&self, h: &Hypergraph) -> Result<(), CertificateError> {
        if let Some(edge) = first_uncovered(h, &self.cover) {
            return Err(CertificateError::Uncovered(edge));
        }
        if let Some(&y) = self.witness.keys().find(|y| !self.cover.contains(y)) {
            return Err(CertificateError::StrayWitness(y));
        }
        let mut used = BTreeSet::new();
        for &y in &self.cover {
            let &edge = self
                .witness
                .get(&y)
                .ok_or(CertificateError::MissingWitness(y))?;
            if edge >= h.len() {
                return Err(CertificateError::UnknownEdge { vertex: y, edge });
            }
            if !isolates(h.edge(edge), &self.cover, y) {
                return Err(CertificateError::BadWitness { vertex: y, edge });
            }
            if !used.insert(edge) {
                return Err(CertificateError::SharedWitness(edge));
            }
        }
        Ok(())
    }
}

/// `edge ∩ cover = {y}`.
pub(crate) fn isolates(edge: &EpSet, cover: &BTreeSet<u64>, y: u64) -> bool {
    edge.contains(y) && cover.iter().all(|&z| z == y || !edge.contains(z))
}

pub(crate) fn first_uncovered(h: &Hypergraph, cover: &BTreeSet<u64>) -> Option<usize> {
    (0..h.len()).find(|&i| !cover.iter().any(|&y| h.edge(i).contains(y)))
}

pub fn is_cover(h: &Hypergraph, y: &EpSet) -> bool {
    h.edges().iter().all(|e| e.intersects(y))
}

/// Finds a witnessing map for the finite cover `y`, choosing the lowest
/// admissible edge for each vertex.
pub fn find_witness(h: &Hypergraph, y: &BTreeSet<u64>) -> Result<WitnessedCover, CoverError> {
    if let Some(edge) = first_uncovered(h, y) {
        return Err(CoverError::NotACover { edge });
    }
    let mut witness = BTreeMap::new();
    for &v in y {
        let edge = (0..h.len())
            .find(|&i| isolates(h.edge(i), y, v))
            .ok_or(CoverError::NoWitness(v))?;
        witness.insert(v, edge);
    }
    Ok(WitnessedCover {
        cover: y.clone(),
        witness,
    })
}

/// Prunes a finite cover to a minimal one by repeatedly dropping the largest
/// vertex whose removal keeps the cover property.
pub fn minimalize(h: &Hypergraph, y: &BTreeSet<u64>) -> Result<WitnessedCover, CoverError> {
    if let Some(edge) = first_uncovered(h, y) {
        return Err(CoverError::NotACover { edge });
    }
    let mut current = y.clone();
    loop {
        let removable = current.iter().rev().copied().find(|&v| {
            let mut trial = current.clone();
            trial.remove(&v);
            first_uncovered(h, &trial).is_none()
        });
        match removable {
            Some(v) => {
                current.remove(&v);
            }
            None => break,
        }
    }
    find_witness(h, &current)
}

/// All minimal vertex covers of a finite hypergraph, by enumerating every
/// subset of the universe. Sorted lexicographically.
pub fn brute_minimal_covers(h: &Hypergraph) -> Result<Vec<BTreeSet<u64>>, CoverError> {
    brute_minimal_covers_bounded(h, DEFAULT_BRUTE_BOUND)
}

pub fn brute_minimal_covers_bounded(
    h: &Hypergraph,
    bound: usize,
) -> Result<Vec<BTreeSet<u64>>, CoverError> {
    if let Some(i) = h.edges().iter().position(|e| !e.is_finite()) {
        return Err(CoverError::InfiniteEdge(i));
    }
    let vertices: Vec<u64> = h.universe().iter().collect();
    let n = vertices.len();
    if n > bound || n > 30 {
        return Err(CoverError::TooLarge {
            size: n,
            bound: bound.min(30),
        });
    }
    let masks: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| {
            e.iter().fold(0u32, |m, x| {
                m | 1 << vertices.binary_search(&x).expect("edge vertex in universe")
            })
        })
        .collect();
    let is_cover: Vec<bool> = (0u32..1 << n)
        .into_par_iter()
        .map(|s| masks.iter().all(|&e| e & s != 0))
        .collect();
    let mut covers: Vec<BTreeSet<u64>> = (0u32..1 << n)
        .into_par_iter()
        .filter(|&s| {
            // covers are upward closed, so single deletions decide minimality
            is_cover[s as usize]
                && (0..n).all(|b| s & (1 << b) == 0 || !is_cover[(s ^ (1 << b)) as usize])
        })
        .map(|s| {
            (0..n)
                .filter(|b| s & (1 << b) != 0)
                .map(|b| vertices[b])
                .collect()
        })
        .collect();
    covers.sort_by(|a, b| a.iter().cmp(b.iter()));
    Ok(covers)
}
