//! Elementary layers and the layer-stack pipeline.
//!
//! A layer is one row of cells read left to right. A wire passes one strand
//! through; a node has `p` strands entering from above and `q` leaving below.
//! Each layer becomes a small progressive graph whose canonical order lists
//! the cells left to right, a node's inputs immediately followed by its
//! outputs. A stack of layers is composed top to bottom.
//!
//! Generated names are `L<layer>.c<cell>` for a wire edge or an unlabelled
//! node, with `.i<p>`/`.o<q>` suffixes for a node's ports and `.top`/`.bot`
//! suffixes for boundary leaves. A labelled node uses its label as the vertex
//! name.

use thiserror::Error;

use crate::compose::{compose_many, ComposeError, ComposedGraph, UpoGraph};
use crate::graph::{is_valid_token, EdgeId, GraphError, ProgressiveGraph, VertexId};
use crate::order::EdgeOrder;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Wire,
    Node {
        inputs: usize,
        outputs: usize,
        label: Option<String>,
    },
}

impl Cell {
    pub fn node(inputs: usize, outputs: usize) -> Self {
        Cell::Node { inputs, outputs, label: None }
    }

    pub fn labelled(inputs: usize, outputs: usize, label: impl Into<String>) -> Self {
        Cell::Node {
            inputs,
            outputs,
            label: Some(label.into()),
        }
    }

    /// `(strands entering from above, strands leaving below)`.
    pub fn arity(&self) -> (usize, usize) {
        match *self {
            Cell::Wire => (1, 1),
            Cell::Node { inputs, outputs, .. } => (inputs, outputs),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LayerSpec {
    pub cells: Vec<Cell>,
}

impl LayerSpec {
    pub fn new(cells: Vec<Cell>) -> Self {
        Self { cells }
    }

    /// `(top width, bottom width)`.
    pub fn widths(&self) -> (usize, usize) {
        self.cells.iter().fold((0, 0), |(top, bottom), c| {
            let (p, q) = c.arity();
            (top + p, bottom + q)
        })
    }
}

/// Layers listed top to bottom.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LayerStack {
    pub layers: Vec<LayerSpec>,
}

impl LayerStack {
    pub fn new(layers: Vec<LayerSpec>) -> Self {
        Self { layers }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayerError {
    #[error("layer {layer}, cell {cell}: {reason}")]
    InvalidCell {
        layer: usize,
        cell: usize,
        reason: String,
    },
    #[error("layer {layer} has bottom width {bottom} but layer {} has top width {top}", layer + 1)]
    WidthMismatch { layer: usize, bottom: usize, top: usize },
    #[error("layer {layer}: {source}")]
    Graph {
        layer: usize,
        #[source]
        source: GraphError,
    },
    #[error(transparent)]
    Compose(#[from] ComposeError),
}

/// The elementary progressive graph of `layer` and its canonical order,
/// with names for layer index 0.
pub fn layer_to_upo(layer: &LayerSpec) -> Result<UpoGraph, LayerError> {
    layer_to_upo_at(layer, 0)
}

/// Like [`layer_to_upo`], naming fresh vertices and edges for layer `index`.
pub fn layer_to_upo_at(layer: &LayerSpec, index: usize) -> Result<UpoGraph, LayerError> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut boundary = Vec::new();
    let mut sequence = Vec::new();

    for (c, cell) in layer.cells.iter().enumerate() {
        let base = format!("L{index}.c{c}");
        let invalid = |reason: String| LayerError::InvalidCell { layer: index, cell: c, reason };
        match cell {
            Cell::Wire => {
                let top = VertexId::new(format!("{base}.top"));
                let bot = VertexId::new(format!("{base}.bot"));
                let wire = EdgeId::new(base);
                vertices.extend([top.clone(), bot.clone()]);
                boundary.extend([top.clone(), bot.clone()]);
                edges.push((wire.clone(), top, bot));
                sequence.push(wire);
            }
            Cell::Node { inputs, outputs, label } => {
                if inputs + outputs == 0 {
                    return Err(invalid("node has no edges".into()));
                }
                let node = match label {
                    Some(l) if !is_valid_token(l) => return Err(invalid(format!("invalid label {l:?}"))),
                    Some(l) => VertexId::new(l.clone()),
                    None => VertexId::new(base.clone()),
                };
                vertices.push(node.clone());
                for p in 0..*inputs {
                    let leaf = VertexId::new(format!("{base}.i{p}.top"));
                    let e = EdgeId::new(format!("{base}.i{p}"));
                    vertices.push(leaf.clone());
                    boundary.push(leaf.clone());
                    edges.push((e.clone(), leaf, node.clone()));
                    sequence.push(e);
                }
                for q in 0..*outputs {
                    let leaf = VertexId::new(format!("{base}.o{q}.bot"));
                    let e = EdgeId::new(format!("{base}.o{q}"));
                    vertices.push(leaf.clone());
                    boundary.push(leaf.clone());
                    edges.push((e.clone(), node.clone(), leaf));
                    sequence.push(e);
                }
            }
        }
    }

    let graph = ProgressiveGraph::build(vertices, edges, boundary)
        .map_err(|source| LayerError::Graph { layer: index, source })?;
    let order = EdgeOrder::from_sequence(sequence).expect("generated edge names are distinct");
    Ok(UpoGraph::new(graph, order))
}

/// Composes the layers of `stack` top to bottom.
pub fn pipeline(stack: &LayerStack) -> Result<ComposedGraph, LayerError> {
    pipeline_from(stack, 0)
}

/// Like [`pipeline`], numbering the layers from `first_index` so that
/// sub-stacks of a larger stack get the same names as in the whole.
pub fn pipeline_from(stack: &LayerStack, first_index: usize) -> Result<ComposedGraph, LayerError> {
    for (k, pair) in stack.layers.windows(2).enumerate() {
        let (bottom, top) = (pair[0].widths().1, pair[1].widths().0);
        if bottom != top {
            return Err(LayerError::WidthMismatch {
                layer: first_index + k,
                bottom,
                top,
            });
        }
    }
    let stages = stack
        .layers
        .iter()
        .enumerate()
        .map(|(k, layer)| layer_to_upo_at(layer, first_index + k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(compose_many(&stages)?)
}
