//! Finite and eventually periodic subsets of the naturals.
//!
//! An [`EpSet`] is stored as a finite part below a threshold `t` and a
//! residue mask modulo a period `p` that decides membership from `t` on.
//! Every constructor returns the canonical form (minimal period, then
//! minimal threshold), so structural equality is equality of denotations.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpSetError {
    #[error("set is empty")]
    EmptySet,
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("residue {residue} is not below period {period}")]
    ResidueOutOfRange { residue: u64, period: u64 },
    #[error("finite element {value} is not below threshold {threshold}")]
    FiniteAboveThreshold { value: u64, threshold: u64 },
    #[error("malformed set: {0}")]
    Malformed(String),
}

/// Cardinality of a subset of the naturals.
///
/// The derived order puts every `Finite(n)` below `Aleph0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Card {
    Finite(u64),
    Aleph0,
}

impl Card {
    pub fn is_finite(self) -> bool {
        matches!(self, Card::Finite(_))
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Aleph0 => f.write_str("omega"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    Difference,
}

impl BoolOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::Union => a || b,
            BoolOp::Intersect => a && b,
            BoolOp::Difference => a && !b,
        }
    }
}

/// A finite or eventually periodic set of naturals in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpSet {
    // sorted, all < threshold
    finite: Vec<u64>,
    threshold: u64,
    // mask.len() is the period
    mask: Vec<bool>,
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    (a / gcd(a, b))
        .checked_mul(b)
        .expect("period lcm overflows u64")
}

impl EpSet {
    pub fn empty() -> Self {
        EpSet {
            finite: Vec::new(),
            threshold: 0,
            mask: vec![false],
        }
    }

    /// All naturals.
    pub fn naturals() -> Self {
        EpSet {
            finite: Vec::new(),
            threshold: 0,
            mask: vec![true],
        }
    }

    pub fn finite<I: IntoIterator<Item = u64>>(items: I) -> Self {
        let mut finite: Vec<u64> = items.into_iter().collect();
        finite.sort_unstable();
        finite.dedup();
        let threshold = finite.last().map_or(0, |m| m + 1);
        EpSet {
            finite,
            threshold,
            mask: vec![false],
        }
    }

    pub fn singleton(x: u64) -> Self {
        Self::finite([x])
    }

    /// The half-open interval `[lo, hi)`.
    pub fn range(lo: u64, hi: u64) -> Self {
        Self::finite(lo..hi)
    }

    /// The arithmetic progression `{start, start + step, ...}`. A zero step
    /// gives the singleton `{start}`.
    pub fn ap(start: u64, step: u64) -> Self {
        if step == 0 {
            return Self::singleton(start);
        }
        let mut mask = vec![false; step as usize];
        mask[(start % step) as usize] = true;
        Self::canonical(Vec::new(), start, mask)
    }

    /// Builds a set from raw parts, validating and canonicalizing them.
    pub fn from_parts(
        finite: Vec<u64>,
        threshold: u64,
        period: u64,
        residues: &[u64],
    ) -> Result<Self, EpSetError> {
        if period == 0 {
            return Err(EpSetError::ZeroPeriod);
        }
        let mut finite = finite;
        finite.sort_unstable();
        finite.dedup();
        if let Some(&value) = finite.last() {
            if value >= threshold {
                return Err(EpSetError::FiniteAboveThreshold { value, threshold });
            }
        }
        let mut mask = vec![false; period as usize];
        for &residue in residues {
            if residue >= period {
                return Err(EpSetError::ResidueOutOfRange { residue, period });
            }
            mask[residue as usize] = true;
        }
        Ok(Self::canonical(finite, threshold, mask))
    }

    fn canonical(mut finite: Vec<u64>, mut threshold: u64, mask: Vec<bool>) -> Self {
        let p = mask.len();
        let d = (1..=p)
            .filter(|d| p.is_multiple_of(*d))
            .find(|&d| (d..p).all(|i| mask[i] == mask[i % d]))
            .unwrap_or(p);
        let mask = mask[..d].to_vec();
        while threshold > 0 {
            let x = threshold - 1;
            let in_finite = finite.last() == Some(&x);
            if in_finite != mask[(x % d as u64) as usize] {
                break;
            }
            if in_finite {
                finite.pop();
            }
            threshold -= 1;
        }
        EpSet {
            finite,
            threshold,
            mask,
        }
    }

    pub fn finite_part(&self) -> &[u64] {
        &self.finite
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn period(&self) -> u64 {
        self.mask.len() as u64
    }

    pub fn residues(&self) -> impl Iterator<Item = u64> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(r, _)| r as u64)
    }

    fn tail_contains(&self, x: u64) -> bool {
        self.mask[(x % self.period()) as usize]
    }

    pub fn contains(&self, x: u64) -> bool {
        if x < self.threshold {
            self.finite.binary_search(&x).is_ok()
        } else {
            self.tail_contains(x)
        }
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && !self.has_tail()
    }

    fn has_tail(&self) -> bool {
        self.mask.iter().any(|&b| b)
    }

    pub fn is_finite(&self) -> bool {
        !self.has_tail()
    }

    pub fn cardinality(&self) -> Card {
        if self.has_tail() {
            Card::Aleph0
        } else {
            Card::Finite(self.finite.len() as u64)
        }
    }

    /// Least element.
    pub fn min_element(&self) -> Result<u64, EpSetError> {
        self.iter().next().ok_or(EpSetError::EmptySet)
    }

    /// Greatest element of a nonempty finite set.
    pub fn max_element(&self) -> Option<u64> {
        if self.has_tail() {
            None
        } else {
            self.finite.last().copied()
        }
    }

    /// Ascending iterator over the elements; infinite when the set is.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            set: self,
            pos: 0,
            next_tail: self.threshold,
        }
    }

    /// The first `n` elements in ascending order.
    pub fn enumerate(&self, n: usize) -> Vec<u64> {
        self.iter().take(n).collect()
    }

    pub fn boolean(&self, op: BoolOp, other: &EpSet) -> EpSet {
        let threshold = self.threshold.max(other.threshold);
        let period = lcm(self.period(), other.period());
        let mut finite = Vec::new();
        // Only elements of either finite part or either tail can appear below
        // the joint threshold; the scan is over the window itself.
        for x in 0..threshold {
            if op.apply(self.contains(x), other.contains(x)) {
                finite.push(x);
            }
        }
        let mask = (0..period)
            .map(|r| op.apply(self.tail_contains(r), other.tail_contains(r)))
            .collect();
        Self::canonical(finite, threshold, mask)
    }

    pub fn union(&self, other: &EpSet) -> EpSet {
        self.boolean(BoolOp::Union, other)
    }

    pub fn intersect(&self, other: &EpSet) -> EpSet {
        self.boolean(BoolOp::Intersect, other)
    }

    pub fn difference(&self, other: &EpSet) -> EpSet {
        self.boolean(BoolOp::Difference, other)
    }

    pub fn is_subset(&self, other: &EpSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn intersects(&self, other: &EpSet) -> bool {
        !self.intersect(other).is_empty()
    }

    /// Union of a sequence of sets.
    pub fn union_all<'a, I: IntoIterator<Item = &'a EpSet>>(sets: I) -> EpSet {
        sets.into_iter().fold(EpSet::empty(), |acc, s| acc.union(s))
    }

    /// End of a window past which membership in any Boolean combination of
    /// `self` and `other` is determined by residues alone.
    pub fn joint_window(&self, other: &EpSet) -> u64 {
        self.threshold.max(other.threshold) + 2 * lcm(self.period(), other.period())
    }
}

impl Default for EpSet {
    fn default() -> Self {
        EpSet::empty()
    }
}

impl PartialOrd for EpSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order on canonical forms; used only to sort and deduplicate.
impl Ord for EpSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.finite
            .cmp(&other.finite)
            .then(self.threshold.cmp(&other.threshold))
            .then(self.mask.cmp(&other.mask))
    }
}

pub struct Iter<'a> {
    set: &'a EpSet,
    pos: usize,
    next_tail: u64,
}

impl Iterator for Iter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if let Some(&x) = self.set.finite.get(self.pos) {
            self.pos += 1;
            return Some(x);
        }
        if !self.set.has_tail() {
            return None;
        }
        loop {
            let x = self.next_tail;
            self.next_tail += 1;
            if self.set.tail_contains(x) {
                return Some(x);
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EpSetRepr {
    #[serde(default)]
    fin: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    res: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ap: Option<(u64, u64)>,
}

impl TryFrom<EpSetRepr> for EpSet {
    type Error = EpSetError;

    fn try_from(r: EpSetRepr) -> Result<Self, Self::Error> {
        if let Some((start, step)) = r.ap {
            if r.t.is_some() || r.p.is_some() || r.res.is_some() {
                return Err(EpSetError::Malformed(
                    "\"ap\" cannot be combined with \"t\", \"p\" or \"res\"".into(),
                ));
            }
            if step == 0 {
                return Err(EpSetError::ZeroPeriod);
            }
            return Ok(EpSet::ap(start, step).union(&EpSet::finite(r.fin)));
        }
        match (r.t, r.p, r.res) {
            (None, None, None) => Ok(EpSet::finite(r.fin)),
            (Some(t), Some(p), Some(res)) => EpSet::from_parts(r.fin, t, p, &res),
            _ => Err(EpSetError::Malformed(
                "\"t\", \"p\" and \"res\" must be given together".into(),
            )),
        }
    }
}

impl From<EpSet> for EpSetRepr {
    fn from(s: EpSet) -> Self {
        if s.is_finite() {
            return EpSetRepr {
                fin: s.finite,
                t: None,
                p: None,
                res: None,
                ap: None,
            };
        }
        let res = s.residues().collect();
        EpSetRepr {
            t: Some(s.threshold),
            p: Some(s.period()),
            res: Some(res),
            fin: s.finite,
            ap: None,
        }
    }
}

impl Serialize for EpSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        EpSetRepr::from(self.clone()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EpSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = EpSetRepr::deserialize(deserializer)?;
        EpSet::try_from(repr).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for EpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = serde_json::to_string(self).map_err(|_| fmt::Error)?;
        f.write_str(&text)
    }
}

impl fmt::Debug for EpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpSet({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fin(xs: &[u64]) -> EpSet {
        EpSet::finite(xs.iter().copied())
    }

    #[test]
    fn membership() {
        assert!(EpSet::ap(0, 2).contains(4));
        assert!(!fin(&[1, 3]).contains(2));
        assert!(EpSet::ap(1, 3).contains(100));
        assert!(!EpSet::ap(1, 3).contains(0));
    }

    #[test]
    fn boolean_examples() {
        assert_eq!(EpSet::ap(0, 2).intersect(&EpSet::ap(0, 3)), EpSet::ap(0, 6));
        assert_eq!(
            EpSet::ap(0, 1).difference(&EpSet::ap(0, 2)),
            EpSet::ap(1, 2)
        );
        assert_eq!(fin(&[0]).union(&EpSet::ap(2, 2)), EpSet::ap(0, 2));
    }

    #[test]
    fn cardinality_examples() {
        assert_eq!(fin(&[1, 2]).cardinality(), Card::Finite(2));
        assert_eq!(EpSet::ap(0, 2).cardinality(), Card::Aleph0);
        assert_eq!(
            EpSet::ap(0, 2).intersect(&EpSet::ap(1, 2)).cardinality(),
            Card::Finite(0)
        );
        assert!(Card::Finite(u64::MAX) < Card::Aleph0);
    }

    #[test]
    fn minimum() {
        assert_eq!(EpSet::ap(5, 3).min_element(), Ok(5));
        assert_eq!(EpSet::empty().min_element(), Err(EpSetError::EmptySet));
        assert_eq!(fin(&[7]).union(&EpSet::ap(9, 2)).min_element(), Ok(7));
    }

    #[test]
    fn enumeration() {
        assert_eq!(EpSet::ap(0, 2).enumerate(3), vec![0, 2, 4]);
        assert_eq!(fin(&[5]).enumerate(10), vec![5]);
        assert_eq!(
            EpSet::ap(0, 3).difference(&fin(&[0])).enumerate(3),
            vec![3, 6, 9]
        );
    }

    #[test]
    fn subsets() {
        assert!(EpSet::ap(0, 6).is_subset(&EpSet::ap(0, 2)));
        assert!(!EpSet::ap(0, 2).is_subset(&EpSet::ap(0, 6)));
        assert!(fin(&[4, 10]).is_subset(&EpSet::ap(4, 6)));
    }

    #[test]
    fn canonical_forms() {
        let odd_tail = EpSet::from_parts(vec![1, 3], 4, 4, &[1, 3]).unwrap();
        assert_eq!(odd_tail, EpSet::ap(1, 2));
        assert_eq!(odd_tail.threshold(), 0);
        assert_eq!(odd_tail.period(), 2);

        let empty = EpSet::from_parts(vec![], 9, 6, &[]).unwrap();
        assert_eq!(empty, EpSet::empty());
        assert_eq!(empty.period(), 1);
        assert_eq!(empty.threshold(), 0);

        let cofinite = EpSet::from_parts(vec![0, 1, 3], 4, 3, &[0, 1, 2]).unwrap();
        assert_eq!(cofinite, EpSet::naturals().difference(&fin(&[2])));
        assert_eq!(cofinite.period(), 1);
        assert_eq!(cofinite.threshold(), 3);
    }

    #[test]
    fn rejects_invalid_parts() {
        assert_eq!(
            EpSet::from_parts(vec![], 0, 0, &[]),
            Err(EpSetError::ZeroPeriod)
        );
        assert_eq!(
            EpSet::from_parts(vec![], 0, 3, &[3]),
            Err(EpSetError::ResidueOutOfRange {
                residue: 3,
                period: 3
            })
        );
        assert_eq!(
            EpSet::from_parts(vec![5], 5, 1, &[]),
            Err(EpSetError::FiniteAboveThreshold {
                value: 5,
                threshold: 5
            })
        );
    }

    #[test]
    fn text_forms() {
        let s: EpSet = serde_json::from_str(r#"{"ap":[1,3]}"#).unwrap();
        assert_eq!(s, EpSet::ap(1, 3));
        let s: EpSet = serde_json::from_str(r#"{"fin":[3,1,1]}"#).unwrap();
        assert_eq!(s, fin(&[1, 3]));
        let s: EpSet = serde_json::from_str(r#"{"fin":[0],"t":2,"p":2,"res":[0]}"#).unwrap();
        assert_eq!(s, EpSet::ap(0, 2));
        assert_eq!(
            serde_json::to_string(&EpSet::ap(1, 3)).unwrap(),
            r#"{"fin":[],"t":0,"p":3,"res":[1]}"#
        );
        assert_eq!(
            serde_json::to_string(&fin(&[2, 4])).unwrap(),
            r#"{"fin":[2,4]}"#
        );
        assert!(serde_json::from_str::<EpSet>(r#"{"t":1,"p":3}"#).is_err());
        assert!(serde_json::from_str::<EpSet>(r#"{"ap":[1,0]}"#).is_err());
        assert!(serde_json::from_str::<EpSet>(r#"{"fin":[1],"bogus":2}"#).is_err());
    }

    pub(crate) fn arb_epset() -> impl Strategy<Value = EpSet> {
        (
            prop::collection::vec(0u64..40, 0..6),
            0u64..40,
            1u64..13,
            prop::collection::vec(any::<bool>(), 12),
        )
            .prop_map(|(fin, t, p, bits)| {
                let fin: Vec<u64> = fin.into_iter().filter(|&x| x < t).collect();
                let res: Vec<u64> = (0..p).filter(|&r| bits[r as usize]).collect();
                EpSet::from_parts(fin, t, p, &res).unwrap()
            })
    }

    proptest! {
        #[test]
        fn boolean_ops_agree_pointwise(a in arb_epset(), b in arb_epset()) {
            let window = a.joint_window(&b);
            for op in [BoolOp::Union, BoolOp::Intersect, BoolOp::Difference] {
                let c = a.boolean(op, &b);
                for x in 0..window {
                    prop_assert_eq!(c.contains(x), op.apply(a.contains(x), b.contains(x)));
                }
            }
        }

        #[test]
        fn canonical_equality_matches_denotation(a in arb_epset(), b in arb_epset()) {
            let window = a.joint_window(&b);
            let same = (0..window).all(|x| a.contains(x) == b.contains(x));
            prop_assert_eq!(same, a == b);
            let again = EpSet::from_parts(
                a.finite_part().to_vec(), a.threshold(), a.period(),
                &a.residues().collect::<Vec<_>>(),
            ).unwrap();
            prop_assert_eq!(again, a);
        }

        #[test]
        fn cardinality_and_minimum(a in arb_epset()) {
            if let Card::Finite(n) = a.cardinality() {
                prop_assert_eq!(a.enumerate(n as usize + 1).len() as u64, n);
            }
            if let Ok(m) = a.min_element() {
                prop_assert!(a.contains(m));
                prop_assert!((0..m).all(|x| !a.contains(x)));
            } else {
                prop_assert!(a.is_empty());
            }
        }

        #[test]
        fn text_round_trip(a in arb_epset()) {
            let text = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<EpSet>(&text).unwrap(), a);
        }
    }
}
