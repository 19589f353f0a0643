//! Graphviz export for inspection.
//!
//! Vertices are grouped into `rank=same` rows by longest path from the
//! sources, and each row is listed by the smallest rank of an incident edge.
//! Nothing here guarantees a planar rendering.

use std::fmt::Write as _;

use crate::graph::ProgressiveGraph;
use crate::interface::upg::UpgDocument;

fn quote(name: &str) -> String {
    let mut out = String::with_capacity(name.len() + 2);
    out.push('"');
    for c in name.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Longest-path depth of each vertex, by vertex index.
fn depths(g: &ProgressiveGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut depth = vec![0; n];
    let mut pending: Vec<usize> = (0..n).map(|v| g.in_of(v).len()).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&v| pending[v] == 0).collect();
    while let Some(v) = ready.pop() {
        for &e in g.out_of(v) {
            let t = g.ends_of(e).1;
            depth[t] = depth[t].max(depth[v] + 1);
            pending[t] -= 1;
            if pending[t] == 0 {
                ready.push(t);
            }
        }
    }
    depth
}

pub fn export_dot(doc: &UpgDocument) -> String {
    let g = &doc.graph;
    let rank_of = |e: usize| doc.order.as_ref().and_then(|o| o.rank(&g.edges()[e]));

    let mut out = String::from("digraph upo {\n  rankdir=TB;\n  node [label=\"\"];\n");
    for (v, name) in g.vertices().iter().enumerate() {
        let shape = if g.boundary_at(v) { "point" } else { "circle" };
        writeln!(out, "  {} [shape={shape}, xlabel={}];", quote(name.as_str()), quote(name.as_str())).unwrap();
    }

    let depth = depths(g);
    let rows = depth.iter().copied().max().map_or(0, |d| d + 1);
    for row in 0..rows {
        let mut members: Vec<(usize, usize)> = (0..g.vertex_count())
            .filter(|&v| depth[v] == row)
            .map(|v| {
                let key = g.out_of(v).iter().chain(g.in_of(v)).filter_map(|&e| rank_of(e)).min();
                (key.unwrap_or(usize::MAX), v)
            })
            .collect();
        members.sort();
        out.push_str("  { rank=same;");
        for (_, v) in members {
            write!(out, " {};", quote(g.vertices()[v].as_str())).unwrap();
        }
        out.push_str(" }\n");
    }

    let mut edges: Vec<usize> = (0..g.edge_count()).collect();
    edges.sort_by_key(|&e| (rank_of(e), e));
    for e in edges {
        let (s, t) = g.ends_of(e);
        let id = g.edges()[e].as_str();
        write!(
            out,
            "  {} -> {} [id={}",
            quote(g.vertices()[s].as_str()),
            quote(g.vertices()[t].as_str()),
            quote(id)
        )
        .unwrap();
        match rank_of(e) {
            Some(r) => write!(out, ", label=\"{r}\", tooltip={}", quote(id)).unwrap(),
            None => write!(out, ", tooltip={}", quote(id)).unwrap(),
        }
        out.push_str("];\n");
    }
    out.push_str("}\n");
    out
}
