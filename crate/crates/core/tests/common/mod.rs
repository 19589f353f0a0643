#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use upo::compose::UpoGraph;
use upo::interface::upg::{parse_upg, UpgDocument};
use upo::layers::{pipeline_from, Cell, LayerSpec, LayerStack};
use upo::{EdgeId, EdgeOrder, ProgressiveGraph, VertexId};

pub const UPG_FIXTURES: &[&str] = &[
    "vee",
    "fork",
    "merge",
    "wire",
    "boxed_example",
    "wire_beside_sink",
    "wire_inside_sink",
    "isolated_vertices",
    "closed_drawing",
];

pub fn fixture_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(file)
}

pub fn fixture_text(file: &str) -> String {
    std::fs::read_to_string(fixture_path(file)).unwrap()
}

pub fn load(name: &str) -> UpgDocument {
    parse_upg(&fixture_text(&format!("{name}.upg"))).unwrap()
}

pub fn load_upo(name: &str) -> UpoGraph {
    let doc = load(name);
    UpoGraph::new(doc.graph, doc.order.expect("fixture has an order"))
}

pub fn graph(vertices: &[&str], edges: &[(&str, &str, &str)], boundary: &[&str]) -> ProgressiveGraph {
    ProgressiveGraph::build(
        vertices.iter().copied().map(VertexId::from),
        edges.iter().map(|&(e, s, t)| (e.into(), s.into(), t.into())),
        boundary.iter().copied().map(VertexId::from),
    )
    .unwrap()
}

pub fn order(names: &[&str]) -> EdgeOrder {
    EdgeOrder::from_sequence(names.iter().copied().map(EdgeId::from)).unwrap()
}

/// A random progressive graph with 1 to `max_edges` edges. Inner vertices
/// `v0..` are only joined from lower to higher index, so the graph is
/// acyclic; every boundary leaf gets a fresh name.
pub fn random_progressive_graph(rng: &mut StdRng, max_edges: usize) -> ProgressiveGraph {
    let inner = rng.gen_range(1..=4usize);
    let m = rng.gen_range(1..=max_edges);
    let mut vertices: Vec<String> = (0..inner).map(|i| format!("v{i}")).collect();
    let mut boundary = Vec::new();
    let mut edges = Vec::new();
    let leaf = |vertices: &mut Vec<String>, boundary: &mut Vec<String>| {
        let name = format!("b{}", boundary.len());
        vertices.push(name.clone());
        boundary.push(name.clone());
        name
    };
    for k in 0..m {
        let kind = rng.gen_range(0..10);
        let (s, t) = match kind {
            0..=4 if inner >= 2 => {
                let i = rng.gen_range(0..inner - 1);
                let j = rng.gen_range(i + 1..inner);
                (format!("v{i}"), format!("v{j}"))
            }
            0..=6 => (leaf(&mut vertices, &mut boundary), format!("v{}", rng.gen_range(0..inner))),
            7..=8 => (format!("v{}", rng.gen_range(0..inner)), leaf(&mut vertices, &mut boundary)),
            _ => (leaf(&mut vertices, &mut boundary), leaf(&mut vertices, &mut boundary)),
        };
        edges.push((EdgeId::new(format!("e{k}")), VertexId::new(s), VertexId::new(t)));
    }
    ProgressiveGraph::build(
        vertices.into_iter().map(VertexId::new),
        edges,
        boundary.into_iter().map(VertexId::new),
    )
    .unwrap()
}

pub fn shuffled(rng: &mut StdRng, g: &ProgressiveGraph) -> EdgeOrder {
    let mut edges = g.edges().to_vec();
    edges.shuffle(rng);
    EdgeOrder::from_sequence(edges).unwrap()
}

/// A random linear extension of edge reachability.
pub fn random_linear_extension(rng: &mut StdRng, g: &ProgressiveGraph) -> EdgeOrder {
    let mut left: Vec<EdgeId> = g.edges().to_vec();
    let mut out = Vec::new();
    while !left.is_empty() {
        let minimal: Vec<usize> = (0..left.len())
            .filter(|&i| !left.iter().any(|f| f != &left[i] && g.edge_reachable(f, &left[i]).unwrap()))
            .collect();
        let pick = *minimal.choose(rng).unwrap();
        out.push(left.remove(pick));
    }
    EdgeOrder::from_sequence(out).unwrap()
}

/// A layer whose top width is `top`.
pub fn random_layer(rng: &mut StdRng, top: usize) -> LayerSpec {
    let mut remaining = top;
    let mut bottom = 0;
    let mut cells = Vec::new();
    loop {
        if remaining == 0 && (cells.len() >= 4 || rng.gen_bool(0.6)) {
            break;
        }
        let cell = if remaining > 0 && rng.gen_bool(0.4) {
            Cell::Wire
        } else {
            let p = rng.gen_range(0..=remaining.min(2));
            let q_max = if bottom >= 3 { 1 } else { 2 };
            let q = rng.gen_range(0..=q_max);
            if p + q == 0 {
                Cell::node(0, 1)
            } else {
                Cell::node(p, q)
            }
        };
        let (p, q) = cell.arity();
        remaining -= p;
        bottom += q;
        cells.push(cell);
    }
    LayerSpec::new(cells)
}

pub fn random_stack(rng: &mut StdRng, top: usize, layers: usize) -> LayerStack {
    let mut width = top;
    let mut out = Vec::new();
    for _ in 0..layers {
        let layer = random_layer(rng, width);
        width = layer.widths().1;
        out.push(layer);
    }
    LayerStack::new(out)
}

pub fn bottom_width(stack: &LayerStack) -> usize {
    stack.layers.last().map_or(0, |l| l.widths().1)
}

/// The pipeline of `stack` with layer names starting at `first_index`.
pub fn stack_upo(stack: &LayerStack, first_index: usize) -> UpoGraph {
    pipeline_from(stack, first_index).unwrap().into_upo()
}

/// `count` stacked UPO-graphs, each fitting onto the previous one, with
/// disjoint generated names.
pub fn random_composable(rng: &mut StdRng, count: usize) -> Vec<UpoGraph> {
    let mut width = rng.gen_range(0..=2);
    let mut next_index = 0;
    let mut out = Vec::new();
    for _ in 0..count {
        let layers = rng.gen_range(1..=2);
        let stack = random_stack(rng, width, layers);
        width = bottom_width(&stack);
        out.push(stack_upo(&stack, next_index));
        next_index += layers;
    }
    out
}

pub mod naive {
    //! Reference checkers written straight from the definitions with rank
    //! sets, independent of the library's checkers.

    use super::*;

    type Ranks = BTreeSet<usize>;

    fn ranks<'a>(o: &EdgeOrder, edges: impl IntoIterator<Item = &'a EdgeId>) -> Ranks {
        edges.into_iter().map(|e| o.rank(e).unwrap()).collect()
    }

    fn hull(set: &Ranks) -> Ranks {
        match (set.first(), set.last()) {
            (Some(&lo), Some(&hi)) => (lo..=hi).collect(),
            _ => Ranks::new(),
        }
    }

    struct Sides {
        incoming: Ranks,
        outgoing: Ranks,
        all: Ranks,
    }

    fn sides(g: &ProgressiveGraph, o: &EdgeOrder, v: &VertexId) -> Sides {
        let view = g.incidence(v).unwrap();
        Sides {
            incoming: ranks(o, &view.in_edges),
            outgoing: ranks(o, &view.out_edges),
            all: ranks(o, &view.all_edges),
        }
    }

    pub fn u1(g: &ProgressiveGraph, o: &EdgeOrder) -> bool {
        g.edges().iter().all(|a| {
            g.edges()
                .iter()
                .all(|b| a == b || !g.edge_reachable(a, b).unwrap() || o.rank(a) < o.rank(b))
        })
    }

    pub fn u2(g: &ProgressiveGraph, o: &EdgeOrder) -> bool {
        g.vertices().iter().all(|v| {
            let s = sides(g, o, v);
            if s.incoming.is_empty() || s.outgoing.is_empty() {
                return true;
            }
            let (hi, ho) = (hull(&s.incoming), hull(&s.outgoing));
            hi.is_disjoint(&ho) && hull(&s.all) == hi.union(&ho).copied().collect()
        })
    }

    pub fn u3(g: &ProgressiveGraph, o: &EdgeOrder) -> bool {
        let all: Vec<Sides> = g.vertices().iter().map(|v| sides(g, o, v)).collect();
        let nests = |a: &Ranks, b: &Ranks| a.is_disjoint(&hull(b)) || hull(a).is_subset(&hull(b));
        all.iter().all(|a| {
            all.iter()
                .all(|b| nests(&a.incoming, &b.incoming) && nests(&a.outgoing, &b.outgoing))
        })
    }

    pub fn q2(g: &ProgressiveGraph, o: &EdgeOrder) -> bool {
        let seq = o.sequence();
        let m = seq.len();
        let src = |e: &EdgeId| g.source(e).unwrap().clone();
        let tgt = |e: &EdgeId| g.target(e).unwrap().clone();
        let inc = |v: &VertexId| ranks(o, &g.incidence(v).unwrap().in_edges);
        let out = |v: &VertexId| ranks(o, &g.incidence(v).unwrap().out_edges);
        for i in 0..m {
            for j in i + 2..m {
                let (e1, e2) = (&seq[i], &seq[j]);
                for e in &seq[i + 1..j] {
                    let in_ok = |v: &VertexId| inc(&tgt(e)).is_subset(&hull(&inc(v)));
                    let out_ok = |v: &VertexId| out(&src(e)).is_subset(&hull(&out(v)));
                    if tgt(e1) == tgt(e2) && !in_ok(&tgt(e1)) {
                        return false;
                    }
                    if src(e1) == src(e2) && !out_ok(&src(e1)) {
                        return false;
                    }
                    if tgt(e1) == src(e2) && !(in_ok(&tgt(e1)) || out_ok(&tgt(e1))) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn check_u(g: &ProgressiveGraph, o: &EdgeOrder) -> bool {
        u1(g, o) && u2(g, o) && u3(g, o)
    }

    pub fn check_q(g: &ProgressiveGraph, o: &EdgeOrder) -> bool {
        u1(g, o) && q2(g, o)
    }

    pub fn admissible(g: &ProgressiveGraph, o: &EdgeOrder) -> bool {
        let (inputs, outputs) = g.domain_codomain();
        let (inputs, outputs) = (ranks(o, &inputs), ranks(o, &outputs));
        g.inner_vertices().all(|v| {
            let s = sides(g, o, v);
            inputs.is_disjoint(&hull(&s.outgoing)) && outputs.is_disjoint(&hull(&s.incoming))
        })
    }
}

/// At every processive vertex the first outgoing edge directly follows the
/// last incoming edge.
pub fn gap_holds(g: &ProgressiveGraph, o: &EdgeOrder) -> bool {
    g.vertices().iter().all(|v| {
        let view = g.incidence(v).unwrap();
        let last_in = view.in_edges.iter().map(|e| o.rank(e).unwrap()).max();
        let first_out = view.out_edges.iter().map(|e| o.rank(e).unwrap()).min();
        match (last_in, first_out) {
            (Some(i), Some(f)) => f == i + 1,
            _ => true,
        }
    })
}

/// Restricting `composite` to the image of `factor` reproduces `factor`.
pub fn preserves(composite: &upo::ComposedGraph, stage: usize, factor: &UpoGraph) -> bool {
    let image = composite.stage_image(stage);
    let mapped: Vec<&EdgeId> = factor.order.sequence().iter().map(|e| &image[e]).collect();
    match composite.order.restrict(mapped.iter().copied()) {
        Ok(r) => r.sequence().iter().eq(mapped.iter().copied()),
        Err(_) => false,
    }
}
