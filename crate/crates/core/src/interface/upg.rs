//! The UPG text format.
//!
//! ```text
//! upg 1
//! # comment
//! vertex a boundary
//! vertex v
//! edge e1 a v
//! order e1 ...
//! ```
//!
//! One directive per line. Several `order` lines are concatenated. Anything
//! from a token starting with `#` to the end of the line is a comment.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{is_valid_token, EdgeId, GraphError, ProgressiveGraph, VertexId};
use crate::order::EdgeOrder;

pub const HEADER: &str = "upg 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UpgError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{}{source}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Validation {
        line: Option<usize>,
        #[source]
        source: GraphError,
    },
    #[error("line {line}: order {message}")]
    OrderDomainMismatch { line: usize, message: String },
}

impl UpgError {
    pub fn line(&self) -> Option<usize> {
        match *self {
            UpgError::Syntax { line, .. } | UpgError::OrderDomainMismatch { line, .. } => Some(line),
            UpgError::Validation { line, .. } => line,
        }
    }
}

/// 1-based line numbers of the directives that introduced each entity.
#[derive(Debug, Clone, Default)]
pub struct SourceSpans {
    pub vertices: HashMap<VertexId, usize>,
    pub edges: HashMap<EdgeId, usize>,
    pub order: Vec<usize>,
}

impl SourceSpans {
    pub fn vertex(&self, v: &VertexId) -> Option<usize> {
        self.vertices.get(v).copied()
    }

    pub fn edge(&self, e: &EdgeId) -> Option<usize> {
        self.edges.get(e).copied()
    }
}

#[derive(Debug, Clone, Default)]
pub struct UpgDocument {
    pub graph: ProgressiveGraph,
    pub order: Option<EdgeOrder>,
    pub spans: SourceSpans,
}

impl PartialEq for UpgDocument {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph && self.order == other.order
    }
}

impl Eq for UpgDocument {}

impl UpgDocument {
    /// A document without source spans.
    pub fn new(graph: ProgressiveGraph, order: Option<EdgeOrder>) -> Self {
        Self {
            graph,
            order,
            spans: SourceSpans::default(),
        }
    }
}

fn tokens(line: &str) -> Vec<&str> {
    line.split_whitespace().take_while(|t| !t.starts_with('#')).collect()
}

pub fn parse_upg(text: &str) -> Result<UpgDocument, UpgError> {
    let syntax = |line: usize, message: String| UpgError::Syntax { line, message };

    let mut spans = SourceSpans::default();
    let mut vertices = Vec::new();
    let mut boundary = Vec::new();
    let mut edges = Vec::new();
    let mut sequence: Vec<EdgeId> = Vec::new();
    let mut seen_in_order = HashSet::new();
    let mut order_present = false;
    let mut header = false;
    let mut names: HashSet<String> = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        let Some((&directive, args)) = toks.split_first() else {
            continue;
        };
        if !header {
            if toks != ["upg", "1"] {
                return Err(syntax(line, format!("expected header {HEADER:?}")));
            }
            header = true;
            continue;
        }
        let mut claim = |name: &str| {
            if !is_valid_token(name) {
                return Err(UpgError::Validation {
                    line: Some(line),
                    source: GraphError::InvalidId(name.into()),
                });
            }
            if !names.insert(name.to_owned()) {
                return Err(UpgError::Validation {
                    line: Some(line),
                    source: GraphError::DuplicateId(name.into()),
                });
            }
            Ok(())
        };
        match directive {
            "upg" => return Err(syntax(line, "repeated header".into())),
            "vertex" => {
                let (name, is_boundary) = match args {
                    [name] => (name, false),
                    [name, "boundary"] => (name, true),
                    _ => return Err(syntax(line, "expected `vertex NAME [boundary]`".into())),
                };
                claim(name)?;
                let v = VertexId::from(*name);
                spans.vertices.insert(v.clone(), line);
                if is_boundary {
                    boundary.push(v.clone());
                }
                vertices.push(v);
            }
            "edge" => {
                let [name, source, target] = args else {
                    return Err(syntax(line, "expected `edge NAME SRC TGT`".into()));
                };
                claim(name)?;
                let e = EdgeId::from(*name);
                spans.edges.insert(e.clone(), line);
                edges.push((e, VertexId::from(*source), VertexId::from(*target)));
            }
            "order" => {
                order_present = true;
                spans.order.push(line);
                for name in args {
                    if !seen_in_order.insert(*name) {
                        return Err(syntax(line, format!("edge {name} appears twice in the order")));
                    }
                    sequence.push(EdgeId::from(*name));
                }
            }
            other => return Err(syntax(line, format!("unknown directive {other:?}"))),
        }
    }
    if !header {
        return Err(syntax(text.lines().count().max(1), format!("missing header {HEADER:?}")));
    }

    let graph = ProgressiveGraph::build(vertices, edges, boundary).map_err(|source| UpgError::Validation {
        line: error_line(&spans, &source),
        source,
    })?;

    let order = if order_present {
        let first_line = spans.order[0];
        if let Some(stray) = sequence.iter().find(|e| !graph.contains_edge(e)) {
            let line = spans.order.iter().rev().copied().find(|&l| {
                text.lines().nth(l - 1).is_some_and(|raw| tokens(raw).contains(&stray.as_str()))
            });
            return Err(UpgError::OrderDomainMismatch {
                line: line.unwrap_or(first_line),
                message: format!("names unknown edge {stray}"),
            });
        }
        if let Some(missing) = graph.edges().iter().find(|e| !seen_in_order.contains(e.as_str())) {
            return Err(UpgError::OrderDomainMismatch {
                line: first_line,
                message: format!("omits edge {missing}"),
            });
        }
        Some(EdgeOrder::from_sequence(sequence).expect("duplicates rejected above"))
    } else {
        None
    };

    Ok(UpgDocument { graph, order, spans })
}

fn error_line(spans: &SourceSpans, error: &GraphError) -> Option<usize> {
    match error {
        GraphError::DanglingEndpoint { edge, .. } | GraphError::SelfLoop(edge) | GraphError::UnknownEdge(edge) => {
            spans.edge(edge)
        }
        GraphError::BoundaryNotLeaf { vertex, .. } | GraphError::UnknownVertex(vertex) => spans.vertex(vertex),
        GraphError::CycleDetected { cycle } => cycle.iter().filter_map(|v| spans.vertex(v)).min(),
        GraphError::InvalidId(_) | GraphError::DuplicateId(_) => None,
    }
}

/// Canonical text: header, vertices by name, edges by name, then the order
/// on a single line if present.
pub fn serialize_upg(doc: &UpgDocument) -> String {
    let g = &doc.graph;
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for v in g.vertices() {
        let suffix = if g.is_boundary(v).expect("own vertex") { " boundary" } else { "" };
        writeln!(out, "vertex {v}{suffix}").unwrap();
    }
    for (e, s, t) in g.edge_triples() {
        writeln!(out, "edge {e} {s} {t}").unwrap();
    }
    if let Some(order) = &doc.order {
        out.push_str("order");
        for e in order.sequence() {
            write!(out, " {e}").unwrap();
        }
        out.push('\n');
    }
    out
}
