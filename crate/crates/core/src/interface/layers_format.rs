//! The layer-stack text format.
//!
//! ```text
//! layers 1
//! layer
//!   wire
//!   node 2 1 v
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::is_valid_token;
use crate::layers::{Cell, LayerSpec, LayerStack};

pub const HEADER: &str = "layers 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct LayersFormatError {
    pub line: usize,
    pub message: String,
}

/// A parsed stack and the line of each `layer` directive and cell.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LayerFile {
    pub stack: LayerStack,
    pub layer_lines: Vec<usize>,
    pub cell_lines: Vec<Vec<usize>>,
}

pub fn parse_layers(text: &str) -> Result<LayerFile, LayersFormatError> {
    let err = |line: usize, message: String| LayersFormatError { line, message };
    let mut file = LayerFile::default();
    let mut header = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().take_while(|t| !t.starts_with('#')).collect();
        let Some((&directive, args)) = toks.split_first() else {
            continue;
        };
        if !header {
            if toks != ["layers", "1"] {
                return Err(err(line, format!("expected header {HEADER:?}")));
            }
            header = true;
            continue;
        }
        let cell = match (directive, args) {
            ("layer", []) => {
                file.stack.layers.push(LayerSpec::default());
                file.layer_lines.push(line);
                file.cell_lines.push(Vec::new());
                continue;
            }
            ("wire", []) => Cell::Wire,
            ("node", [p, q, rest @ ..]) if rest.len() <= 1 => {
                let count = |s: &str| s.parse::<usize>().map_err(|_| err(line, format!("bad count {s:?}")));
                let (p, q) = (count(p)?, count(q)?);
                match rest.first() {
                    Some(label) if !is_valid_token(label) => return Err(err(line, format!("invalid label {label:?}"))),
                    Some(label) => Cell::labelled(p, q, *label),
                    None => Cell::node(p, q),
                }
            }
            ("layer" | "wire", _) => return Err(err(line, format!("`{directive}` takes no arguments"))),
            ("node", _) => return Err(err(line, "expected `node P Q [LABEL]`".into())),
            _ => return Err(err(line, format!("unknown directive {directive:?}"))),
        };
        if !raw.starts_with(char::is_whitespace) {
            return Err(err(line, "cells must be indented".into()));
        }
        let Some(layer) = file.stack.layers.last_mut() else {
            return Err(err(line, "cell before the first `layer`".into()));
        };
        layer.cells.push(cell);
        file.cell_lines.last_mut().expect("pushed with layer").push(line);
    }
    if !header {
        return Err(err(text.lines().count().max(1), format!("missing header {HEADER:?}")));
    }
    Ok(file)
}

pub fn serialize_layers(stack: &LayerStack) -> String {
    let mut out = format!("{HEADER}\n");
    for layer in &stack.layers {
        out.push_str("layer\n");
        for cell in &layer.cells {
            match cell {
                Cell::Wire => out.push_str("  wire\n"),
                Cell::Node { inputs, outputs, label } => {
                    write!(out, "  node {inputs} {outputs}").unwrap();
                    if let Some(l) = label {
                        write!(out, " {l}").unwrap();
                    }
                    out.push('\n');
                }
            }
        }
    }
    out
}
