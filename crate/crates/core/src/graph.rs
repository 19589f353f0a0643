//! Progressive graphs: acyclic multigraphs with a distinguished set of
//! boundary leaves.
//!
//! A [`ProgressiveGraph`] is validated once at construction and is immutable
//! afterwards. Vertices and edges are identified by opaque string tokens;
//! internally both are stored sorted by id so that every index-based loop in
//! the crate visits them in a deterministic order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Self {
                Self(name.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

id_type!(
    /// Name of a vertex, unique within its graph.
    VertexId
);
id_type!(
    /// Name of an edge, unique within its graph and disjoint from vertex names.
    EdgeId
);

/// Returns true if `token` can be used as a vertex or edge name.
///
/// Names are nonempty, contain no whitespace, and do not start with `#`
/// (which introduces comments in the text formats).
pub fn is_valid_token(token: &str) -> bool {
    !token.is_empty() && !token.starts_with('#') && !token.chars().any(char::is_whitespace)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid name {0:?}")]
    InvalidId(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("edge {edge} references unknown vertex {vertex}")]
    DanglingEndpoint { edge: EdgeId, vertex: VertexId },
    #[error("edge {0} is a self-loop")]
    SelfLoop(EdgeId),
    #[error("directed cycle through {}", join(.cycle))]
    CycleDetected { cycle: Vec<VertexId> },
    #[error("boundary vertex {vertex} has degree {degree}, expected 1")]
    BoundaryNotLeaf { vertex: VertexId, degree: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// Incoming, outgoing and all incident edges of one vertex, each sorted by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceView {
    pub in_edges: Vec<EdgeId>,
    pub out_edges: Vec<EdgeId>,
    pub all_edges: Vec<EdgeId>,
}

#[derive(Debug, Clone)]
pub struct ProgressiveGraph {
    vertices: Vec<VertexId>,
    vertex_index: HashMap<VertexId, usize>,
    boundary: Vec<bool>,
    edges: Vec<EdgeId>,
    edge_index: HashMap<EdgeId, usize>,
    ends: Vec<(usize, usize)>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
    // reach[a][b]: some directed path starts with edge a and ends with edge b.
    reach: Vec<Vec<bool>>,
}

impl PartialEq for ProgressiveGraph {
    fn eq(&self, other: &Self) -> bool {
        // Everything else is derived from these four.
        self.vertices == other.vertices
            && self.boundary == other.boundary
            && self.edges == other.edges
            && self.ends == other.ends
    }
}

impl Eq for ProgressiveGraph {}

impl Default for ProgressiveGraph {
    fn default() -> Self {
        Self::build(Vec::new(), Vec::new(), Vec::new()).expect("empty graph is valid")
    }
}

impl ProgressiveGraph {
    /// Validates and builds a progressive graph.
    ///
    /// `edges` holds `(id, source, target)` triples. Parallel edges are
    /// allowed; self-loops, directed cycles and boundary vertices of degree
    /// other than one are rejected.
    pub fn build(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (EdgeId, VertexId, VertexId)>,
        boundary: impl IntoIterator<Item = VertexId>,
    ) -> Result<Self, GraphError> {
        let mut vertices: Vec<VertexId> = vertices.into_iter().collect();
        let mut edges: Vec<(EdgeId, VertexId, VertexId)> = edges.into_iter().collect();

        let mut seen = BTreeSet::new();
        for name in vertices
            .iter()
            .map(VertexId::as_str)
            .chain(edges.iter().map(|(e, _, _)| e.as_str()))
        {
            if !is_valid_token(name) {
                return Err(GraphError::InvalidId(name.to_owned()));
            }
            if !seen.insert(name) {
                return Err(GraphError::DuplicateId(name.to_owned()));
            }
        }
        drop(seen);

        vertices.sort();
        edges.sort_by(|a, b| a.0.cmp(&b.0));
        let vertex_index: HashMap<VertexId, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();

        let mut ends = Vec::with_capacity(edges.len());
        for (e, s, t) in &edges {
            let lookup = |v: &VertexId| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| GraphError::DanglingEndpoint {
                        edge: e.clone(),
                        vertex: v.clone(),
                    })
            };
            let (s, t) = (lookup(s)?, lookup(t)?);
            if s == t {
                return Err(GraphError::SelfLoop(e.clone()));
            }
            ends.push((s, t));
        }

        let n = vertices.len();
        let mut incoming = vec![Vec::new(); n];
        let mut outgoing = vec![Vec::new(); n];
        for (i, &(s, t)) in ends.iter().enumerate() {
            outgoing[s].push(i);
            incoming[t].push(i);
        }

        let mut is_boundary = vec![false; n];
        for v in boundary {
            let i = *vertex_index
                .get(&v)
                .ok_or_else(|| GraphError::UnknownVertex(v.clone()))?;
            is_boundary[i] = true;
        }
        for (i, _) in is_boundary.iter().enumerate().filter(|(_, b)| **b) {
            let degree = incoming[i].len() + outgoing[i].len();
            if degree != 1 {
                return Err(GraphError::BoundaryNotLeaf {
                    vertex: vertices[i].clone(),
                    degree,
                });
            }
        }

        let topo = topological_order(n, &ends, &outgoing, &incoming)
            .map_err(|cycle| GraphError::CycleDetected {
                cycle: cycle.into_iter().map(|i| vertices[i].clone()).collect(),
            })?;
        let reach = edge_reachability(&topo, &ends, &outgoing);

        let edge_index = edges
            .iter()
            .enumerate()
            .map(|(i, (e, _, _))| (e.clone(), i))
            .collect();
        Ok(Self {
            vertices,
            vertex_index,
            boundary: is_boundary,
            edges: edges.into_iter().map(|(e, _, _)| e).collect(),
            edge_index,
            ends,
            incoming,
            outgoing,
            reach,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.vertex_index.contains_key(v)
    }

    pub fn contains_edge(&self, e: &EdgeId) -> bool {
        self.edge_index.contains_key(e)
    }

    /// Boundary vertices, sorted by id.
    pub fn boundary(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices
            .iter()
            .zip(&self.boundary)
            .filter_map(|(v, b)| b.then_some(v))
    }

    pub fn inner_vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices
            .iter()
            .zip(&self.boundary)
            .filter_map(|(v, b)| (!b).then_some(v))
    }

    pub fn is_boundary(&self, v: &VertexId) -> Result<bool, GraphError> {
        Ok(self.boundary[self.vertex_idx(v)?])
    }

    pub fn source(&self, e: &EdgeId) -> Result<&VertexId, GraphError> {
        Ok(&self.vertices[self.ends[self.edge_idx(e)?].0])
    }

    pub fn target(&self, e: &EdgeId) -> Result<&VertexId, GraphError> {
        Ok(&self.vertices[self.ends[self.edge_idx(e)?].1])
    }

    /// `(id, source, target)` for every edge, sorted by id.
    pub fn edge_triples(&self) -> impl Iterator<Item = (&EdgeId, &VertexId, &VertexId)> {
        self.edges
            .iter()
            .zip(&self.ends)
            .map(|(e, &(s, t))| (e, &self.vertices[s], &self.vertices[t]))
    }

    pub fn incidence(&self, v: &VertexId) -> Result<IncidenceView, GraphError> {
        let i = self.vertex_idx(v)?;
        let names = |list: &[usize]| list.iter().map(|&e| self.edges[e].clone()).collect();
        let mut all: Vec<usize> = self.incoming[i].iter().chain(&self.outgoing[i]).copied().collect();
        all.sort_unstable();
        Ok(IncidenceView {
            in_edges: names(&self.incoming[i]),
            out_edges: names(&self.outgoing[i]),
            all_edges: names(&all),
        })
    }

    /// A vertex is processive when it is neither a source nor a sink.
    pub fn is_processive(&self, v: &VertexId) -> Result<bool, GraphError> {
        let i = self.vertex_idx(v)?;
        Ok(!self.incoming[i].is_empty() && !self.outgoing[i].is_empty())
    }

    /// True iff a directed path starts with `from` and ends with `to`.
    /// Every edge reaches itself.
    pub fn edge_reachable(&self, from: &EdgeId, to: &EdgeId) -> Result<bool, GraphError> {
        Ok(self.reach[self.edge_idx(from)?][self.edge_idx(to)?])
    }

    /// Input edges (source on the boundary) and output edges (target on the
    /// boundary). A boundary-to-boundary wire belongs to both.
    pub fn domain_codomain(&self) -> (BTreeSet<EdgeId>, BTreeSet<EdgeId>) {
        let mut inputs = BTreeSet::new();
        let mut outputs = BTreeSet::new();
        for (e, &(s, t)) in self.edges.iter().zip(&self.ends) {
            if self.boundary[s] {
                inputs.insert(e.clone());
            }
            if self.boundary[t] {
                outputs.insert(e.clone());
            }
        }
        (inputs, outputs)
    }

    /// Replaces every isolated vertex `u` by a fresh inner edge
    /// `u.e : u.s -> u.t`. Fresh names that would clash get a `~n` suffix.
    pub fn virtualize_isolated(&self) -> ProgressiveGraph {
        let isolated: Vec<usize> = (0..self.vertices.len())
            .filter(|&i| self.incoming[i].is_empty() && self.outgoing[i].is_empty())
            .collect();
        if isolated.is_empty() {
            return self.clone();
        }

        let mut taken: BTreeSet<String> = self
            .vertices
            .iter()
            .map(|v| v.0.clone())
            .chain(self.edges.iter().map(|e| e.0.clone()))
            .collect();
        let mut fresh = |base: String| {
            let mut name = base.clone();
            let mut n = 1;
            while taken.contains(&name) {
                name = format!("{base}~{n}");
                n += 1;
            }
            taken.insert(name.clone());
            name
        };

        let mut vertices = Vec::new();
        let mut boundary = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if !isolated.contains(&i) {
                vertices.push(v.clone());
                if self.boundary[i] {
                    boundary.push(v.clone());
                }
            }
        }
        let mut edges: Vec<(EdgeId, VertexId, VertexId)> = self
            .edge_triples()
            .map(|(e, s, t)| (e.clone(), s.clone(), t.clone()))
            .collect();
        for &i in &isolated {
            let u = &self.vertices[i].0;
            let s = VertexId(fresh(format!("{u}.s")));
            let t = VertexId(fresh(format!("{u}.t")));
            let e = EdgeId(fresh(format!("{u}.e")));
            vertices.push(s.clone());
            vertices.push(t.clone());
            edges.push((e, s, t));
        }
        Self::build(vertices, edges, boundary).expect("virtualizing preserves validity")
    }

    fn vertex_idx(&self, v: &VertexId) -> Result<usize, GraphError> {
        self.vertex_index
            .get(v)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(v.clone()))
    }

    pub(crate) fn edge_idx(&self, e: &EdgeId) -> Result<usize, GraphError> {
        self.edge_index
            .get(e)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(e.clone()))
    }

    // Index-level accessors used by the checkers and the oracle. Edge and
    // vertex indices are positions in the id-sorted `edges()` / `vertices()`.

    pub(crate) fn ends_of(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub(crate) fn in_of(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub(crate) fn out_of(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    pub(crate) fn boundary_at(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub(crate) fn reaches(&self, a: usize, b: usize) -> bool {
        self.reach[a][b]
    }
}

/// Kahn's algorithm; on failure returns the vertices of one directed cycle.
fn topological_order(
    n: usize,
    ends: &[(usize, usize)],
    outgoing: &[Vec<usize>],
    incoming: &[Vec<usize>],
) -> Result<Vec<usize>, Vec<usize>> {
    let mut indegree: Vec<usize> = incoming.iter().map(Vec::len).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).rev().collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        order.push(v);
        for &e in &outgoing[v] {
            let t = ends[e].1;
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push(t);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }

    // Every leftover vertex has a leftover predecessor: walk backwards until
    // a vertex repeats.
    let start = (0..n).find(|&v| indegree[v] > 0).expect("leftover vertex");
    let mut position = BTreeMap::new();
    let mut path = Vec::new();
    let mut v = start;
    while !position.contains_key(&v) {
        position.insert(v, path.len());
        path.push(v);
        v = incoming[v]
            .iter()
            .map(|&e| ends[e].0)
            .find(|&u| indegree[u] > 0)
            .expect("leftover vertex has a leftover predecessor");
    }
    let mut cycle = path.split_off(position[&v]);
    cycle.reverse();
    Err(cycle)
}

fn edge_reachability(
    topo: &[usize],
    ends: &[(usize, usize)],
    outgoing: &[Vec<usize>],
) -> Vec<Vec<bool>> {
    let m = ends.len();
    // from_vertex[v][e]: edge e lies on some path leaving v.
    let mut from_vertex = vec![vec![false; m]; topo.len()];
    for &v in topo.iter().rev() {
        let mut row = vec![false; m];
        for &e in &outgoing[v] {
            row[e] = true;
            let t = ends[e].1;
            for (slot, &r) in row.iter_mut().zip(&from_vertex[t]) {
                *slot |= r;
            }
        }
        from_vertex[v] = row;
    }
    (0..m)
        .map(|e| {
            let mut row = from_vertex[ends[e].1].clone();
            row[e] = true;
            row
        })
        .collect()
}
