//! Brute-force ground truth for small graphs.
//!
//! [`enumerate_upos`] walks the linear extensions of the reachable order by
//! backtracking and filters complete orders through a checker.
//! [`definitions_agree`] runs both checkers over every permutation of the
//! edges.

use itertools::Itertools;
use thiserror::Error;

use crate::axioms::{check, check_admissible, check_q, check_u, Definition};
use crate::graph::{EdgeId, ProgressiveGraph};
use crate::order::EdgeOrder;

/// Default edge cap for [`enumerate_upos`].
pub const ENUMERATION_CAP: usize = 12;
/// Default edge cap for [`definitions_agree`].
pub const PERMUTATION_CAP: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {edges} edges, above the cap of {cap}")]
    TooLarge { edges: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub require_admissible: bool,
    pub definition: Definition,
    /// Stop after this many orders.
    pub limit: Option<usize>,
    /// Ignore [`ENUMERATION_CAP`].
    pub force: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            require_admissible: false,
            definition: Definition::Q,
            limit: None,
            force: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    /// Matching orders, lexicographic in their edge-id sequences.
    pub orders: Vec<EdgeOrder>,
    /// False if the search stopped at the limit.
    pub exhausted: bool,
}

/// Every upward planar order of `graph` (admissible ones only, if
/// requested), according to `options.definition`.
///
/// Besides the linear-extension constraint, partial orders are pruned by two
/// necessary conditions: a processive vertex's first outgoing edge directly
/// follows its last incoming edge, and (when admissibility is required) no
/// boundary edge lands inside a partially placed hull of an inner vertex.
pub fn enumerate_upos(graph: &ProgressiveGraph, options: EnumerateOptions) -> Result<EnumerationResult, OracleError> {
    let m = graph.edge_count();
    if m > ENUMERATION_CAP && !options.force {
        return Err(OracleError::TooLarge { edges: m, cap: ENUMERATION_CAP });
    }
    let mut search = Search::new(graph, options);
    let exhausted = search.extend();
    Ok(EnumerationResult {
        orders: search.found,
        exhausted,
    })
}

struct Search<'g> {
    graph: &'g ProgressiveGraph,
    options: EnumerateOptions,
    placed: Vec<bool>,
    sequence: Vec<usize>,
    in_placed: Vec<usize>,
    out_placed: Vec<usize>,
    is_input: Vec<bool>,
    is_output: Vec<bool>,
    found: Vec<EdgeOrder>,
}

impl<'g> Search<'g> {
    fn new(graph: &'g ProgressiveGraph, options: EnumerateOptions) -> Self {
        let m = graph.edge_count();
        let n = graph.vertex_count();
        let is_input = (0..m).map(|e| graph.boundary_at(graph.ends_of(e).0)).collect();
        let is_output = (0..m).map(|e| graph.boundary_at(graph.ends_of(e).1)).collect();
        Self {
            graph,
            options,
            placed: vec![false; m],
            sequence: Vec::with_capacity(m),
            in_placed: vec![0; n],
            out_placed: vec![0; n],
            is_input,
            is_output,
            found: Vec::new(),
        }
    }

    /// Returns false once the limit is hit.
    fn extend(&mut self) -> bool {
        let g = self.graph;
        let m = g.edge_count();
        if self.sequence.len() == m {
            self.accept();
            return self.options.limit.is_none_or(|limit| self.found.len() < limit);
        }
        if self.options.limit == Some(0) {
            return false;
        }

        // A processive vertex whose incoming edges were just completed must
        // continue with one of its outgoing edges.
        let forced_source = self.sequence.last().map(|&prev| g.ends_of(prev).1).filter(|&v| {
            !g.out_of(v).is_empty() && self.in_placed[v] == g.in_of(v).len() && self.out_placed[v] == 0
        });

        for e in 0..m {
            if self.placed[e] {
                continue;
            }
            let (s, t) = g.ends_of(e);
            if self.in_placed[s] < g.in_of(s).len() {
                continue;
            }
            if forced_source.is_some_and(|v| v != s) {
                continue;
            }
            if self.options.require_admissible && self.breaks_boundary(e) {
                continue;
            }

            self.placed[e] = true;
            self.sequence.push(e);
            self.out_placed[s] += 1;
            self.in_placed[t] += 1;
            let go_on = self.extend();
            self.in_placed[t] -= 1;
            self.out_placed[s] -= 1;
            self.sequence.pop();
            self.placed[e] = false;
            if !go_on {
                return false;
            }
        }
        true
    }

    fn breaks_boundary(&self, e: usize) -> bool {
        let g = self.graph;
        let open = |placed: usize, total: usize| placed > 0 && placed < total;
        (0..g.vertex_count()).filter(|&v| !g.boundary_at(v)).any(|v| {
            (self.is_output[e] && open(self.in_placed[v], g.in_of(v).len()))
                || (self.is_input[e] && open(self.out_placed[v], g.out_of(v).len()))
        })
    }

    fn accept(&mut self) {
        let g = self.graph;
        let order = EdgeOrder::from_sequence(self.sequence.iter().map(|&e| g.edges()[e].clone()))
            .expect("each edge placed once");
        let valid = check(g, &order, self.options.definition).expect("order covers graph").passed()
            && (!self.options.require_admissible || check_admissible(g, &order).expect("order covers graph").passed());
        if valid {
            self.found.push(order);
        }
    }
}

/// True iff [`check_u`] and [`check_q`] give the same verdict on every
/// permutation of the edges, including those that are not linear extensions.
pub fn definitions_agree(graph: &ProgressiveGraph) -> Result<bool, OracleError> {
    definitions_agree_with(graph, false)
}

pub fn definitions_agree_with(graph: &ProgressiveGraph, force: bool) -> Result<bool, OracleError> {
    Ok(first_disagreement(graph, force)?.is_none())
}

/// The first permutation (in lexicographic order) on which the two checkers
/// disagree.
pub fn first_disagreement(graph: &ProgressiveGraph, force: bool) -> Result<Option<EdgeOrder>, OracleError> {
    let m = graph.edge_count();
    if m > PERMUTATION_CAP && !force {
        return Err(OracleError::TooLarge { edges: m, cap: PERMUTATION_CAP });
    }
    let edges: &[EdgeId] = graph.edges();
    for perm in edges.iter().cloned().permutations(m) {
        let order = EdgeOrder::from_sequence(perm).expect("permutation of distinct edges");
        let u = check_u(graph, &order).expect("order covers graph").passed();
        let q = check_q(graph, &order).expect("order covers graph").passed();
        if u != q {
            return Ok(Some(order));
        }
    }
    Ok(None)
}
