//! Checkers for upward planar orders.
//!
//! Two equivalent axiom systems are checked by separate code paths:
//!
//! - [`check_u`]: linear extension (U1), the hull split at every vertex (U2)
//!   and nesting of incoming/outgoing hulls between vertices (U3);
//! - [`check_q`]: linear extension (Q1) and the nesting condition on triples
//!   `e1 ≺ e ≺ e2` with `e1`, `e2` adjacent (Q2).
//!
//! [`check_admissible`] adds the boundary condition for progressive graphs.
//! Every checker reports all violations it finds, up to
//! [`MAX_DIAGNOSTICS`].

use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, ProgressiveGraph, VertexId};
use crate::order::{EdgeOrder, Interval};

/// Reports stop collecting diagnostics after this many.
pub const MAX_DIAGNOSTICS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    U1,
    U2,
    U3,
    Q1,
    Q2,
    Admissible,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::U1 => "U1",
            Axiom::U2 => "U2",
            Axiom::U3 => "U3",
            Axiom::Q1 => "Q1",
            Axiom::Q2 => "Q2",
            Axiom::Admissible => "ADM",
        };
        f.write_str(name)
    }
}

/// Which axiom system to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Definition {
    U,
    Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness {
    Edge(EdgeId),
    Vertex(VertexId),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Edge(e) => write!(f, "edge {e}"),
            Witness::Vertex(v) => write!(f, "vertex {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub axiom: Axiom,
    pub witness: Vec<Witness>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    diagnostics: Vec<Diagnostic>,
    truncated: bool,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    /// True if more violations existed than were recorded.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// True if some diagnostic is about `axiom`.
    pub fn violates(&self, axiom: Axiom) -> bool {
        self.diagnostics.iter().any(|d| d.axiom == axiom)
    }

    pub fn merge(mut self, other: CheckReport) -> CheckReport {
        for d in other.diagnostics {
            self.push(d);
        }
        self.truncated |= other.truncated;
        self
    }

    fn push(&mut self, diagnostic: Diagnostic) {
        if self.diagnostics.len() < MAX_DIAGNOSTICS {
            self.diagnostics.push(diagnostic);
        } else {
            self.truncated = true;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("order does not rank exactly the edges of the graph")]
    DomainMismatch,
}

/// Ranks indexed by graph edge index, plus the inverse.
struct Ranked<'g> {
    graph: &'g ProgressiveGraph,
    rank: Vec<usize>,
    by_rank: Vec<usize>,
}

impl<'g> Ranked<'g> {
    fn new(graph: &'g ProgressiveGraph, order: &EdgeOrder) -> Result<Self, CheckError> {
        if !order.covers(graph) {
            return Err(CheckError::DomainMismatch);
        }
        let rank: Vec<usize> = graph
            .edges()
            .iter()
            .map(|e| order.rank(e).expect("covered"))
            .collect();
        let mut by_rank = vec![usize::MAX; rank.len() + 1];
        for (e, &r) in rank.iter().enumerate() {
            by_rank[r] = e;
        }
        Ok(Self { graph, rank, by_rank })
    }

    fn hull(&self, edges: &[usize]) -> Interval {
        edges
            .iter()
            .fold(Interval::Empty, |h, &e| h.including(self.rank[e]))
    }

    fn edge(&self, e: usize) -> Witness {
        Witness::Edge(self.graph.edges()[e].clone())
    }

    fn vertex(&self, v: usize) -> Witness {
        Witness::Vertex(self.graph.vertices()[v].clone())
    }

    fn edge_name(&self, e: usize) -> &str {
        self.graph.edges()[e].as_str()
    }

    fn vertex_name(&self, v: usize) -> &str {
        self.graph.vertices()[v].as_str()
    }
}

/// How U3's inclusion is tested. Both forms give the same verdicts, since
/// `X ⊆ hull(Y)` iff `hull(X) ⊆ hull(Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum U3Form {
    /// `hull(I(v1)) ⊆ hull(I(v2))`.
    #[default]
    HullInclusion,
    /// `I(v1) ⊆ hull(I(v2))`.
    MemberInclusion,
}

pub fn check_u(graph: &ProgressiveGraph, order: &EdgeOrder) -> Result<CheckReport, CheckError> {
    check_u_with(graph, order, U3Form::default())
}

pub fn check_u_with(
    graph: &ProgressiveGraph,
    order: &EdgeOrder,
    form: U3Form,
) -> Result<CheckReport, CheckError> {
    let ranked = Ranked::new(graph, order)?;
    let mut report = CheckReport::default();
    u1(&ranked, &mut report);
    u2(&ranked, &mut report);
    u3(&ranked, form, &mut report);
    Ok(report)
}

fn u1(r: &Ranked, report: &mut CheckReport) {
    let m = r.rank.len();
    for a in 0..m {
        for b in 0..m {
            if a != b && r.graph.reaches(a, b) && r.rank[a] > r.rank[b] {
                report.push(Diagnostic {
                    axiom: Axiom::U1,
                    witness: vec![r.edge(a), r.edge(b)],
                    message: format!(
                        "{} reaches {} but is ranked after it ({} > {})",
                        r.edge_name(a),
                        r.edge_name(b),
                        r.rank[a],
                        r.rank[b]
                    ),
                });
            }
        }
    }
}

fn u2(r: &Ranked, report: &mut CheckReport) {
    for v in 0..r.graph.vertex_count() {
        let (ins, outs) = (r.graph.in_of(v), r.graph.out_of(v));
        if ins.is_empty() || outs.is_empty() {
            continue;
        }
        let hull_in = r.hull(ins);
        let hull_out = r.hull(outs);
        let all: Vec<usize> = ins.iter().chain(outs).copied().collect();
        let hull_all = r.hull(&all);
        // Both hulls sit inside hull_all, so once they are disjoint their
        // union fills it iff the sizes add up.
        let split = !hull_in.intersects(&hull_out) && hull_in.len() + hull_out.len() == hull_all.len();
        if !split {
            report.push(Diagnostic {
                axiom: Axiom::U2,
                witness: vec![r.vertex(v)],
                message: format!(
                    "at {}: hull of incoming edges {hull_in} and hull of outgoing edges {hull_out} \
                     do not split the hull of incident edges {hull_all}",
                    r.vertex_name(v)
                ),
            });
        }
    }
}

type EdgesOf = fn(&ProgressiveGraph, usize) -> &[usize];

fn u3(r: &Ranked, form: U3Form, report: &mut CheckReport) {
    let n = r.graph.vertex_count();
    let sides: [(&str, EdgesOf); 2] = [
        ("incoming", ProgressiveGraph::in_of),
        ("outgoing", ProgressiveGraph::out_of),
    ];
    for (side, edges_of) in sides {
        for v1 in 0..n {
            let set1 = edges_of(r.graph, v1);
            if set1.is_empty() {
                continue;
            }
            for v2 in (0..n).filter(|&v2| v2 != v1) {
                let hull2 = r.hull(edges_of(r.graph, v2));
                if !set1.iter().any(|&e| hull2.contains(r.rank[e])) {
                    continue;
                }
                let nested = match form {
                    U3Form::HullInclusion => r.hull(set1).is_subset_of(&hull2),
                    U3Form::MemberInclusion => set1.iter().all(|&e| hull2.contains(r.rank[e])),
                };
                if !nested {
                    report.push(Diagnostic {
                        axiom: Axiom::U3,
                        witness: vec![r.vertex(v1), r.vertex(v2)],
                        message: format!(
                            "{side} edges of {} meet the {side} hull {hull2} of {} without nesting in it",
                            r.vertex_name(v1),
                            r.vertex_name(v2)
                        ),
                    });
                }
            }
        }
    }
}

pub fn check_q(graph: &ProgressiveGraph, order: &EdgeOrder) -> Result<CheckReport, CheckError> {
    let ranked = Ranked::new(graph, order)?;
    let mut report = CheckReport::default();
    q1(&ranked, &mut report);
    q2(&ranked, &mut report);
    Ok(report)
}

fn q1(r: &Ranked, report: &mut CheckReport) {
    let m = r.rank.len();
    for lower in 1..=m {
        for higher in lower + 1..=m {
            let (a, b) = (r.by_rank[lower], r.by_rank[higher]);
            if r.graph.reaches(b, a) {
                report.push(Diagnostic {
                    axiom: Axiom::Q1,
                    witness: vec![r.edge(b), r.edge(a)],
                    message: format!(
                        "{} reaches {} but has rank {higher} > {lower}",
                        r.edge_name(b),
                        r.edge_name(a)
                    ),
                });
            }
        }
    }
}

fn q2(r: &Ranked, report: &mut CheckReport) {
    let g = r.graph;
    let m = r.rank.len();
    // Every member of `set` lies within [lo, hi] of the hull of `of`.
    let inside = |set: &[usize], of: &[usize]| {
        let h = r.hull(of);
        set.iter().all(|&e| h.contains(r.rank[e]))
    };
    for lo in 1..=m {
        for hi in lo + 2..=m {
            let (e1, e2) = (r.by_rank[lo], r.by_rank[hi]);
            let (s1, t1) = g.ends_of(e1);
            let (s2, t2) = g.ends_of(e2);
            for mid in lo + 1..hi {
                let e = r.by_rank[mid];
                let (s, t) = g.ends_of(e);
                let mut failures = Vec::new();
                if t1 == t2 && !inside(g.in_of(t), g.in_of(t1)) {
                    failures.push((t1, "incoming edges of its target are not inside the incoming hull"));
                }
                if s1 == s2 && !inside(g.out_of(s), g.out_of(s1)) {
                    failures.push((s1, "outgoing edges of its source are not inside the outgoing hull"));
                }
                if t1 == s2 && !inside(g.in_of(t), g.in_of(t1)) && !inside(g.out_of(s), g.out_of(t1)) {
                    failures.push((t1, "neither its target's incoming edges nor its source's outgoing edges nest"));
                }
                for (v, why) in failures {
                    report.push(Diagnostic {
                        axiom: Axiom::Q2,
                        witness: vec![r.edge(e1), r.edge(e), r.edge(e2), r.vertex(v)],
                        message: format!(
                            "{} lies between {} and {} (adjacent at {}), but {why} of {}",
                            r.edge_name(e),
                            r.edge_name(e1),
                            r.edge_name(e2),
                            r.vertex_name(v),
                            r.vertex_name(v)
                        ),
                    });
                }
            }
        }
    }
}

/// The boundary condition: no input edge of the graph inside the outgoing
/// hull of an inner vertex, no output edge inside an incoming hull. Does not
/// check the order axioms themselves.
pub fn check_admissible(graph: &ProgressiveGraph, order: &EdgeOrder) -> Result<CheckReport, CheckError> {
    let r = Ranked::new(graph, order)?;
    let mut report = CheckReport::default();
    let m = graph.edge_count();
    let inputs: Vec<usize> = (0..m).filter(|&e| graph.boundary_at(graph.ends_of(e).0)).collect();
    let outputs: Vec<usize> = (0..m).filter(|&e| graph.boundary_at(graph.ends_of(e).1)).collect();
    for v in (0..graph.vertex_count()).filter(|&v| !graph.boundary_at(v)) {
        let checks = [
            (&inputs, r.hull(graph.out_of(v)), "input", "outgoing"),
            (&outputs, r.hull(graph.in_of(v)), "output", "incoming"),
        ];
        for (boundary_edges, hull, kind, side) in checks {
            for &e in boundary_edges.iter().filter(|&&e| hull.contains(r.rank[e])) {
                report.push(Diagnostic {
                    axiom: Axiom::Admissible,
                    witness: vec![r.vertex(v), r.edge(e)],
                    message: format!(
                        "{kind} edge {} (rank {}) lies inside the {side} hull {hull} of inner vertex {}",
                        r.edge_name(e),
                        r.rank[e],
                        r.vertex_name(v)
                    ),
                });
            }
        }
    }
    Ok(report)
}

/// Runs the checker for `definition`.
pub fn check(
    graph: &ProgressiveGraph,
    order: &EdgeOrder,
    definition: Definition,
) -> Result<CheckReport, CheckError> {
    match definition {
        Definition::U => check_u(graph, order),
        Definition::Q => check_q(graph, order),
    }
}

/// An admissible UPO: passes [`check_q`] and [`check_admissible`].
pub fn is_admissible_upo(graph: &ProgressiveGraph, order: &EdgeOrder) -> Result<bool, CheckError> {
    Ok(check_q(graph, order)?.passed() && check_admissible(graph, order)?.passed())
}
