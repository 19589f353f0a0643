//! Total orders on edge sets and the interval machinery used by composition.
//!
//! Ranks are dense and 1-based: an order on `n` edges assigns each edge a
//! distinct rank in `1..=n`.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::graph::{EdgeId, ProgressiveGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("edge {0} appears more than once")]
    DuplicateEdge(EdgeId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("markers are not strictly increasing at {0}")]
    MarkersNotSorted(EdgeId),
    #[error("edge {0} belongs to more than one block")]
    OverlappingDomains(EdgeId),
}

#[derive(Debug, Clone, Default)]
pub struct EdgeOrder {
    sequence: Vec<EdgeId>,
    ranks: HashMap<EdgeId, usize>,
}

impl PartialEq for EdgeOrder {
    fn eq(&self, other: &Self) -> bool {
        self.sequence == other.sequence
    }
}

impl Eq for EdgeOrder {}

impl EdgeOrder {
    /// Builds the order listing `sequence` from lowest to highest rank.
    pub fn from_sequence(sequence: impl IntoIterator<Item = EdgeId>) -> Result<Self, OrderError> {
        let sequence: Vec<EdgeId> = sequence.into_iter().collect();
        let mut ranks = HashMap::with_capacity(sequence.len());
        for (i, e) in sequence.iter().enumerate() {
            if ranks.insert(e.clone(), i + 1).is_some() {
                return Err(OrderError::DuplicateEdge(e.clone()));
            }
        }
        Ok(Self { sequence, ranks })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// Edges from lowest to highest rank.
    pub fn sequence(&self) -> &[EdgeId] {
        &self.sequence
    }

    pub fn rank(&self, e: &EdgeId) -> Option<usize> {
        self.ranks.get(e).copied()
    }

    pub fn edge_at(&self, rank: usize) -> Option<&EdgeId> {
        rank.checked_sub(1).and_then(|i| self.sequence.get(i))
    }

    pub fn contains(&self, e: &EdgeId) -> bool {
        self.ranks.contains_key(e)
    }

    /// True iff the order ranks exactly the edges of `graph`.
    pub fn covers(&self, graph: &ProgressiveGraph) -> bool {
        self.len() == graph.edge_count() && graph.edges().iter().all(|e| self.contains(e))
    }

    fn rank_of(&self, e: &EdgeId) -> Result<usize, OrderError> {
        self.rank(e).ok_or_else(|| OrderError::UnknownEdge(e.clone()))
    }

    /// Smallest rank interval containing every edge of `set`.
    pub fn hull<'a>(&self, set: impl IntoIterator<Item = &'a EdgeId>) -> Result<Interval, OrderError> {
        let mut hull = Interval::Empty;
        for e in set {
            hull = hull.including(self.rank_of(e)?);
        }
        Ok(hull)
    }

    /// The same relative order on `subset`, with ranks compacted to
    /// `1..=|subset|`.
    pub fn restrict<'a>(&self, subset: impl IntoIterator<Item = &'a EdgeId>) -> Result<EdgeOrder, OrderError> {
        let mut ranked = Vec::new();
        for e in subset {
            ranked.push((self.rank_of(e)?, e));
        }
        ranked.sort_unstable_by_key(|&(r, _)| r);
        ranked.dedup_by_key(|&mut (r, _)| r);
        EdgeOrder::from_sequence(ranked.into_iter().map(|(_, e)| e.clone()))
    }

    /// Chains orders with disjoint domains: every edge of block `k` is ranked
    /// below every edge of block `k + 1`.
    pub fn concat<'a>(blocks: impl IntoIterator<Item = &'a EdgeOrder>) -> Result<EdgeOrder, OrderError> {
        let sequence: Vec<EdgeId> = blocks
            .into_iter()
            .flat_map(|b| b.sequence.iter().cloned())
            .collect();
        EdgeOrder::from_sequence(sequence).map_err(|err| match err {
            OrderError::DuplicateEdge(e) => OrderError::OverlappingDomains(e),
            other => other,
        })
    }

    /// Cuts the order at `markers` into `B0 ◁ {m1} ◁ B1 ◁ … ◁ {mn} ◁ Bn`.
    pub fn partition_by_markers(&self, markers: &[EdgeId]) -> Result<IntervalPartition, OrderError> {
        let mut cuts = Vec::with_capacity(markers.len());
        for m in markers {
            let r = self.rank_of(m)?;
            if cuts.last().is_some_and(|&prev| prev >= r) {
                return Err(OrderError::MarkersNotSorted(m.clone()));
            }
            cuts.push(r);
        }

        let mut blocks = Vec::with_capacity(2 * markers.len() + 1);
        let mut start = 0;
        for (k, &r) in cuts.iter().enumerate() {
            blocks.push(Block {
                label: BlockLabel::Basic(k),
                edges: self.sequence[start..r - 1].to_vec(),
            });
            blocks.push(Block {
                label: BlockLabel::Marker(k + 1),
                edges: vec![self.sequence[r - 1].clone()],
            });
            start = r;
        }
        blocks.push(Block {
            label: BlockLabel::Basic(cuts.len()),
            edges: self.sequence[start..].to_vec(),
        });
        Ok(IntervalPartition { blocks })
    }
}

/// A closed rank interval `[lo, hi]`, or the empty interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interval {
    Empty,
    Span { lo: usize, hi: usize },
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        assert!(lo <= hi, "interval bounds out of order: [{lo}, {hi}]");
        Interval::Span { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Interval::Empty)
    }

    pub fn len(&self) -> usize {
        match *self {
            Interval::Empty => 0,
            Interval::Span { lo, hi } => hi - lo + 1,
        }
    }

    pub fn bounds(&self) -> Option<(usize, usize)> {
        match *self {
            Interval::Empty => None,
            Interval::Span { lo, hi } => Some((lo, hi)),
        }
    }

    pub fn contains(&self, rank: usize) -> bool {
        matches!(*self, Interval::Span { lo, hi } if lo <= rank && rank <= hi)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        match (*self, *other) {
            (Interval::Empty, _) => true,
            (_, Interval::Empty) => false,
            (Interval::Span { lo, hi }, Interval::Span { lo: a, hi: b }) => a <= lo && hi <= b,
        }
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        match (*self, *other) {
            (Interval::Span { lo, hi }, Interval::Span { lo: a, hi: b }) => lo <= b && a <= hi,
            _ => false,
        }
    }

    pub fn including(self, rank: usize) -> Interval {
        match self {
            Interval::Empty => Interval::Span { lo: rank, hi: rank },
            Interval::Span { lo, hi } => Interval::Span {
                lo: lo.min(rank),
                hi: hi.max(rank),
            },
        }
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Interval::Empty => f.write_str("∅"),
            Interval::Span { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockLabel {
    /// `B_k`: edges strictly between markers `k` and `k + 1`.
    Basic(usize),
    /// `{m_k}`, 1-based.
    Marker(usize),
    /// `J_k = B_{k-1} ◁ {m_k}`, 1-based; the last one has no marker.
    RightClosure(usize),
    /// `I_k = {m_k} ◁ B_k`; `I_0 = B_0`.
    LeftClosure(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub label: BlockLabel,
    /// Edges of the block from lowest to highest rank.
    pub edges: Vec<EdgeId>,
}

/// Which neighbor each marker is merged with by [`IntervalPartition::closures`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Consecutive, pairwise disjoint blocks of a total order, listed from low to
/// high.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    blocks: Vec<Block>,
}

impl IntervalPartition {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, label: BlockLabel) -> Option<&[EdgeId]> {
        self.blocks
            .iter()
            .find(|b| b.label == label)
            .map(|b| b.edges.as_slice())
    }

    /// Edges of all blocks in order.
    pub fn flatten(&self) -> Vec<EdgeId> {
        self.blocks.iter().flat_map(|b| b.edges.iter().cloned()).collect()
    }

    /// Merges each marker into its neighbor: `Right` gives
    /// `J_k = B_{k-1} ◁ {m_k}` (and `J_{n+1} = B_n`), `Left` gives
    /// `I_0 = B_0`, `I_k = {m_k} ◁ B_k`.
    ///
    /// Partitions that are not marker partitions are returned unchanged.
    pub fn closures(&self, side: Side) -> IntervalPartition {
        let is_marker_partition = self.blocks.iter().enumerate().all(|(i, b)| match b.label {
            BlockLabel::Basic(k) => i == 2 * k,
            BlockLabel::Marker(k) => i == 2 * k - 1,
            _ => false,
        });
        if !is_marker_partition {
            return self.clone();
        }

        let n = self.blocks.len() / 2;
        let basic = |k: usize| &self.blocks[2 * k].edges;
        let marker = |k: usize| &self.blocks[2 * k - 1].edges;
        let blocks = match side {
            Side::Right => (1..=n + 1)
                .map(|k| {
                    let mut edges = basic(k - 1).clone();
                    if k <= n {
                        edges.extend(marker(k).iter().cloned());
                    }
                    Block { label: BlockLabel::RightClosure(k), edges }
                })
                .collect(),
            Side::Left => (0..=n)
                .map(|k| {
                    let mut edges = if k == 0 { Vec::new() } else { marker(k).clone() };
                    edges.extend(basic(k).iter().cloned());
                    Block { label: BlockLabel::LeftClosure(k), edges }
                })
                .collect(),
        };
        IntervalPartition { blocks }
    }

    /// True iff the blocks are disjoint, cover exactly the edges of `order`,
    /// and every block lies entirely below the next nonempty one.
    pub fn is_interval_partition_of(&self, order: &EdgeOrder) -> bool {
        let mut seen = BTreeSet::new();
        let mut last_rank = 0;
        for e in self.blocks.iter().flat_map(|b| &b.edges) {
            let Some(r) = order.rank(e) else { return false };
            if !seen.insert(e) || r <= last_rank {
                return false;
            }
            last_rank = r;
        }
        seen.len() == order.len()
    }
}
