//! Sequential composition of admissible UPO-graphs.
//!
//! `compose(first, second)` stacks `first` on top of `second`: the k-th output
//! edge of `first` (in its order) is fused with the k-th input edge of
//! `second`, and the two orders are shuffled into
//!
//! ```text
//! P_0 ◁ Q_1 ◁ {ē_1} ◁ P_1 ◁ … ◁ Q_n ◁ {ē_n} ◁ P_n ◁ Q_{n+1}
//! ```
//!
//! where the `Q_k` cut `first` at its outputs and the `P_k` cut `second` at
//! its inputs. A fused edge keeps the id of the output edge it came from.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::axioms::{check_admissible, check_q, CheckReport};
use crate::graph::{EdgeId, GraphError, ProgressiveGraph, VertexId};
use crate::order::{BlockLabel, EdgeOrder};

/// A progressive graph together with an order on its edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UpoGraph {
    pub graph: ProgressiveGraph,
    pub order: EdgeOrder,
}

impl UpoGraph {
    pub fn new(graph: ProgressiveGraph, order: EdgeOrder) -> Self {
        Self { graph, order }
    }
}

/// Which operand of a composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("first graph has {outputs} output edges but second has {inputs} input edges")]
    ArityMismatch { outputs: usize, inputs: usize },
    #[error("{factor:?} operand is not an admissible UPO-graph ({} violations)", report.diagnostics().len())]
    NotAdmissibleUpo { factor: Factor, report: CheckReport },
    #[error("{0:?} operand's order does not rank exactly its edges")]
    DomainMismatch(Factor),
    #[error("id {0:?} is used by both operands")]
    IdCollision(String),
    #[error("stage {stage}: {source}")]
    AtStage {
        stage: usize,
        #[source]
        source: Box<ComposeError>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Whether operands are verified to be admissible UPO-graphs first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Checking {
    #[default]
    Checked,
    /// Skip the admissibility checks; for callers that construct known-good
    /// operands.
    Unchecked,
}

/// One original edge: its id in the stage it came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StageEdge {
    pub stage: usize,
    pub edge: EdgeId,
}

/// The original edges merged into one edge of a composite, by stage.
///
/// For a two-factor composition stage 0 is the first operand and stage 1 the
/// second; a fused edge has one source in each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub sources: Vec<StageEdge>,
}

impl Provenance {
    pub fn is_fused(&self) -> bool {
        self.sources.len() > 1
    }

    /// Id of this edge in `stage`, if it has a part there.
    pub fn edge_in(&self, stage: usize) -> Option<&EdgeId> {
        self.sources.iter().find(|s| s.stage == stage).map(|s| &s.edge)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposedGraph {
    pub graph: ProgressiveGraph,
    pub order: EdgeOrder,
    pub provenance: BTreeMap<EdgeId, Provenance>,
    /// `ē_1, …, ē_n` of the last fusion step, in order.
    pub fused: Vec<EdgeId>,
}

impl ComposedGraph {
    pub fn to_upo(&self) -> UpoGraph {
        UpoGraph::new(self.graph.clone(), self.order.clone())
    }

    pub fn into_upo(self) -> UpoGraph {
        UpoGraph::new(self.graph, self.order)
    }

    /// Edges of the composite that carry a part of `stage`, keyed by their id
    /// in that stage.
    pub fn stage_image(&self, stage: usize) -> BTreeMap<EdgeId, EdgeId> {
        self.provenance
            .iter()
            .filter_map(|(e, p)| p.edge_in(stage).map(|orig| (orig.clone(), e.clone())))
            .collect()
    }

    fn identity(stage: &UpoGraph) -> Self {
        let provenance = stage
            .graph
            .edges()
            .iter()
            .map(|e| {
                let sources = vec![StageEdge { stage: 0, edge: e.clone() }];
                (e.clone(), Provenance { sources })
            })
            .collect();
        Self {
            graph: stage.graph.clone(),
            order: stage.order.clone(),
            provenance,
            fused: Vec::new(),
        }
    }
}

/// Composes `first` (on top) with `second` (below), checking both operands.
pub fn compose(first: &UpoGraph, second: &UpoGraph) -> Result<ComposedGraph, ComposeError> {
    compose_with(first, second, Checking::Checked)
}

pub fn compose_with(
    first: &UpoGraph,
    second: &UpoGraph,
    checking: Checking,
) -> Result<ComposedGraph, ComposeError> {
    if checking == Checking::Checked {
        ensure_admissible(first, Factor::First)?;
        ensure_admissible(second, Factor::Second)?;
    }
    let glued = glue(first, second)?;
    let provenance = glued
        .origins
        .into_iter()
        .map(|(e, origin)| {
            let sources = origin
                .first
                .map(|edge| StageEdge { stage: 0, edge })
                .into_iter()
                .chain(origin.second.map(|edge| StageEdge { stage: 1, edge }))
                .collect();
            (e, Provenance { sources })
        })
        .collect();
    Ok(ComposedGraph {
        graph: glued.upo.graph,
        order: glued.upo.order,
        provenance,
        fused: glued.fused,
    })
}

/// Left fold of [`compose`] over `stages`, top stage first.
pub fn compose_many(stages: &[UpoGraph]) -> Result<ComposedGraph, ComposeError> {
    compose_many_with(stages, Checking::Checked)
}

pub fn compose_many_with(stages: &[UpoGraph], checking: Checking) -> Result<ComposedGraph, ComposeError> {
    let at = |stage: usize| move |err: ComposeError| ComposeError::AtStage { stage, source: Box::new(err) };
    if checking == Checking::Checked {
        // Composites of admissible UPO-graphs are admissible, so checking each
        // stage once covers every step of the fold.
        for (k, stage) in stages.iter().enumerate() {
            ensure_admissible(stage, Factor::Second).map_err(at(k))?;
        }
    }
    let Some((head, rest)) = stages.split_first() else {
        return Ok(ComposedGraph::identity(&UpoGraph::default()));
    };
    let mut acc = ComposedGraph::identity(head);
    for (k, stage) in rest.iter().enumerate().map(|(i, s)| (i + 1, s)) {
        let glued = glue(&acc.to_upo(), stage).map_err(at(k))?;
        let provenance = glued
            .origins
            .into_iter()
            .map(|(e, origin)| {
                let mut sources = origin
                    .first
                    .map(|prev| acc.provenance[&prev].sources.clone())
                    .unwrap_or_default();
                sources.extend(origin.second.map(|edge| StageEdge { stage: k, edge }));
                (e, Provenance { sources })
            })
            .collect();
        acc = ComposedGraph {
            graph: glued.upo.graph,
            order: glued.upo.order,
            provenance,
            fused: glued.fused,
        };
    }
    Ok(acc)
}

fn ensure_admissible(upo: &UpoGraph, factor: Factor) -> Result<(), ComposeError> {
    let mismatch = |_| ComposeError::DomainMismatch(factor);
    let report = check_q(&upo.graph, &upo.order)
        .map_err(mismatch)?
        .merge(check_admissible(&upo.graph, &upo.order).map_err(mismatch)?);
    if report.passed() {
        Ok(())
    } else {
        Err(ComposeError::NotAdmissibleUpo { factor, report })
    }
}

#[derive(Default)]
struct Origin {
    first: Option<EdgeId>,
    second: Option<EdgeId>,
}

struct Glued {
    upo: UpoGraph,
    origins: BTreeMap<EdgeId, Origin>,
    fused: Vec<EdgeId>,
}

fn sorted_by_rank(set: BTreeSet<EdgeId>, order: &EdgeOrder) -> Vec<EdgeId> {
    let mut list: Vec<EdgeId> = set.into_iter().collect();
    list.sort_by_key(|e| order.rank(e));
    list
}

fn glue(first: &UpoGraph, second: &UpoGraph) -> Result<Glued, ComposeError> {
    if !first.order.covers(&first.graph) {
        return Err(ComposeError::DomainMismatch(Factor::First));
    }
    if !second.order.covers(&second.graph) {
        return Err(ComposeError::DomainMismatch(Factor::Second));
    }
    let outputs = sorted_by_rank(first.graph.domain_codomain().1, &first.order);
    let inputs = sorted_by_rank(second.graph.domain_codomain().0, &second.order);
    if outputs.len() != inputs.len() {
        return Err(ComposeError::ArityMismatch {
            outputs: outputs.len(),
            inputs: inputs.len(),
        });
    }

    let mut removed: BTreeSet<&VertexId> = BTreeSet::new();
    let mut fused_target: BTreeMap<&EdgeId, &VertexId> = BTreeMap::new();
    let mut renamed: BTreeMap<&EdgeId, &EdgeId> = BTreeMap::new();
    for (o, i) in outputs.iter().zip(&inputs) {
        removed.insert(first.graph.target(o)?);
        removed.insert(second.graph.source(i)?);
        fused_target.insert(o, second.graph.target(i)?);
        renamed.insert(i, o);
    }

    let mut taken = BTreeSet::new();
    let mut claim = |name: &str| {
        if taken.insert(name.to_owned()) {
            Ok(())
        } else {
            Err(ComposeError::IdCollision(name.to_owned()))
        }
    };

    let mut vertices = Vec::new();
    let mut boundary = Vec::new();
    for g in [&first.graph, &second.graph] {
        for v in g.vertices().iter().filter(|v| !removed.contains(v)) {
            claim(v.as_str())?;
            vertices.push(v.clone());
        }
        boundary.extend(g.boundary().filter(|v| !removed.contains(v)).cloned());
    }

    let mut edges = Vec::new();
    let mut origins: BTreeMap<EdgeId, Origin> = BTreeMap::new();
    for (e, s, t) in first.graph.edge_triples() {
        claim(e.as_str())?;
        let t = fused_target.get(e).copied().unwrap_or(t);
        edges.push((e.clone(), s.clone(), t.clone()));
        origins.entry(e.clone()).or_default().first = Some(e.clone());
    }
    for (e, s, t) in second.graph.edge_triples() {
        match renamed.get(e) {
            Some(&fused) => {
                origins.entry(fused.clone()).or_default().second = Some(e.clone());
            }
            None => {
                claim(e.as_str())?;
                edges.push((e.clone(), s.clone(), t.clone()));
                origins.entry(e.clone()).or_default().second = Some(e.clone());
            }
        }
    }
    let graph = ProgressiveGraph::build(vertices, edges, boundary).map_err(|err| match err {
        GraphError::DuplicateId(id) => ComposeError::IdCollision(id),
        other => ComposeError::Graph(other),
    })?;

    let q = first.order.partition_by_markers(&outputs).expect("outputs are ranked");
    let p = second.order.partition_by_markers(&inputs).expect("inputs are ranked");
    let block = |part: &crate::order::IntervalPartition, k| part.block(BlockLabel::Basic(k)).expect("basic block").to_vec();
    let n = outputs.len();
    let mut sequence = block(&p, 0);
    for k in 1..=n {
        sequence.extend(block(&q, k - 1));
        sequence.push(outputs[k - 1].clone());
        sequence.extend(block(&p, k));
    }
    sequence.extend(block(&q, n));
    let order = EdgeOrder::from_sequence(sequence).expect("blocks are disjoint");

    Ok(Glued {
        upo: UpoGraph::new(graph, order),
        origins,
        fused: outputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::is_admissible_upo;

    fn upo(vertices: &[&str], edges: &[(&str, &str, &str)], boundary: &[&str], order: &[&str]) -> UpoGraph {
        let graph = ProgressiveGraph::build(
            vertices.iter().copied().map(VertexId::from),
            edges.iter().map(|&(e, s, t)| (e.into(), s.into(), t.into())),
            boundary.iter().copied().map(VertexId::from),
        )
        .unwrap();
        let order = EdgeOrder::from_sequence(order.iter().copied().map(EdgeId::from)).unwrap();
        UpoGraph::new(graph, order)
    }

    fn fork() -> UpoGraph {
        upo(
            &["t", "x", "b1", "b2"],
            &[("in", "t", "x"), ("o1", "x", "b1"), ("o2", "x", "b2")],
            &["t", "b1", "b2"],
            &["in", "o1", "o2"],
        )
    }

    fn merge() -> UpoGraph {
        upo(
            &["t1", "t2", "y", "b"],
            &[("i1", "t1", "y"), ("i2", "t2", "y"), ("out", "y", "b")],
            &["t1", "t2", "b"],
            &["i1", "i2", "out"],
        )
    }

    fn names(order: &EdgeOrder) -> Vec<&str> {
        order.sequence().iter().map(EdgeId::as_str).collect()
    }

    #[test]
    fn fork_then_merge() {
        let c = compose(&fork(), &merge()).unwrap();
        assert_eq!(names(&c.order), ["in", "o1", "o2", "out"]);
        assert_eq!(c.graph.inner_vertices().cloned().collect::<Vec<_>>(), ["x", "y"].map(VertexId::from));
        for fused in ["o1", "o2"] {
            let e = EdgeId::from(fused);
            assert_eq!(c.graph.source(&e).unwrap().as_str(), "x");
            assert_eq!(c.graph.target(&e).unwrap().as_str(), "y");
        }
        assert_eq!(c.fused, ["o1", "o2"].map(EdgeId::from));
        assert_eq!(c.provenance[&EdgeId::from("o2")].edge_in(1), Some(&EdgeId::from("i2")));
        assert!(!c.provenance[&EdgeId::from("in")].is_fused());
        assert!(is_admissible_upo(&c.graph, &c.order).unwrap());
        assert_eq!(c.graph.boundary().cloned().collect::<Vec<_>>(), ["b", "t"].map(VertexId::from));
    }

    #[test]
    fn nothing_to_fuse_puts_second_first() {
        let top = upo(&["s", "k"], &[("a", "s", "k")], &[], &["a"]);
        let bottom = upo(&["p", "q"], &[("z", "p", "q")], &[], &["z"]);
        let c = compose(&top, &bottom).unwrap();
        assert_eq!(names(&c.order), ["z", "a"]);
        assert!(c.fused.is_empty());
    }

    #[test]
    fn identity_wires_are_absorbed() {
        let wires = upo(
            &["a", "a'", "c", "c'"],
            &[("w1", "a", "a'"), ("w2", "c", "c'")],
            &["a", "a'", "c", "c'"],
            &["w1", "w2"],
        );
        let c = compose(&wires, &merge()).unwrap();
        // w_k keeps its id but takes over i_k's endpoints.
        assert_eq!(names(&c.order), ["w1", "w2", "out"]);
        assert_eq!(c.graph.target(&"w1".into()).unwrap().as_str(), "y");
        assert_eq!(c.graph.source(&"w1".into()).unwrap().as_str(), "a");
        let rename = c.stage_image(1);
        let restricted = c.order.restrict(merge().order.sequence().iter().map(|e| &rename[e])).unwrap();
        assert_eq!(names(&restricted), ["w1", "w2", "out"]);
    }

    #[test]
    fn wire_onto_wire_stays_a_wire() {
        let top = upo(&["a", "b"], &[("w", "a", "b")], &["a", "b"], &["w"]);
        let bottom = upo(&["c", "d"], &[("v", "c", "d")], &["c", "d"], &["v"]);
        let c = compose(&top, &bottom).unwrap();
        assert_eq!(c.graph.edge_count(), 1);
        assert_eq!(c.graph.vertices(), ["a", "d"].map(VertexId::from));
        let (inputs, outputs) = c.graph.domain_codomain();
        assert_eq!(inputs, outputs);
    }

    #[test]
    fn arity_mismatch() {
        assert_eq!(
            compose(&merge(), &merge()),
            Err(ComposeError::ArityMismatch { outputs: 1, inputs: 2 })
        );
    }

    #[test]
    fn rejects_non_admissible_operand() {
        let mut bad = merge();
        bad.order = EdgeOrder::from_sequence(["i1", "out", "i2"].map(EdgeId::from)).unwrap();
        let err = compose(&fork(), &bad).unwrap_err();
        assert!(matches!(err, ComposeError::NotAdmissibleUpo { factor: Factor::Second, .. }));
        // The unchecked path glues whatever it is given.
        assert!(compose_with(&fork(), &bad, Checking::Unchecked).is_ok());
    }

    #[test]
    fn id_collisions_are_reported() {
        let clash = upo(
            &["t1", "t2", "x", "b"],
            &[("i1", "t1", "x"), ("i2", "t2", "x"), ("out", "x", "b")],
            &["t1", "t2", "b"],
            &["i1", "i2", "out"],
        );
        assert_eq!(compose(&fork(), &clash), Err(ComposeError::IdCollision("x".into())));
    }

    #[test]
    fn compose_many_matches_pairwise() {
        let single = compose_many(&[fork()]).unwrap();
        assert_eq!(single.to_upo(), fork());
        let pair = compose_many(&[fork(), merge()]).unwrap();
        let direct = compose(&fork(), &merge()).unwrap();
        assert_eq!(pair.graph, direct.graph);
        assert_eq!(pair.order, direct.order);
        assert_eq!(pair.provenance, direct.provenance);
        assert!(compose_many(&[]).unwrap().graph.edges().is_empty());
    }

    #[test]
    fn compose_many_tags_failing_stage() {
        let err = compose_many(&[fork(), merge(), merge()]).unwrap_err();
        assert!(matches!(err, ComposeError::AtStage { stage: 2, .. }), "{err:?}");
    }
}
