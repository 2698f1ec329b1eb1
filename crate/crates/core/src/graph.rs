// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Labeled undirected graphs, the gSpan-style text format, padding and
//! editorial cost of a full vertex mapping.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

/// An interned vertex or edge label. Id 0 is the padding label `⊥`, which
/// is also the label of a non-existent edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Label(pub u32);

impl Label {
    pub const BOTTOM: Label = Label(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_bottom(self) -> bool {
        self.0 == 0
    }
}

/// Bijection between label tokens and positive label ids.
#[derive(Debug, Clone)]
pub struct LabelInterner {
    names: Vec<String>,
    ids: HashMap<String, Label>,
}

impl Default for LabelInterner {
    fn default() -> Self {
        LabelInterner {
            names: vec!["⊥".to_string()],
            ids: HashMap::new(),
        }
    }
}

impl LabelInterner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, token: &str) -> Label {
        if let Some(&label) = self.ids.get(token) {
            return label;
        }
        let label = Label(self.names.len() as u32);
        self.names.push(token.to_string());
        self.ids.insert(token.to_string(), label);
        label
    }

    pub fn get(&self, token: &str) -> Option<Label> {
        self.ids.get(token).copied()
    }

    pub fn name(&self, label: Label) -> &str {
        &self.names[label.index()]
    }

    /// Number of ids handed out, including the reserved `⊥`.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.len() == 1
    }
}

/// Vertex and edge label tables shared by every graph of one parsing session.
#[derive(Debug, Clone, Default)]
pub struct LabelSpace {
    pub vertices: LabelInterner,
    pub edges: LabelInterner,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
}

/// A simple labeled undirected graph with dense vertex ids.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    id: i64,
    labels: Vec<Label>,
    adjacency: Vec<Vec<(usize, Label)>>,
    edge_count: usize,
    original_ids: Vec<i64>,
}

impl PartialEq for Graph {
    /// Structural equality: same labels, same labeled edge set. Header and
    /// original ids are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.edge_count == other.edge_count
            && self.edges().all(|(u, v, l)| other.edge_label(u, v) == Some(l))
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_id(id: i64) -> Self {
        Graph {
            id,
            ..Self::default()
        }
    }

    pub fn id(&self) -> i64 {
        self.id
    }

    pub fn set_id(&mut self, id: i64) {
        self.id = id;
    }

    pub fn add_vertex(&mut self, label: Label) -> usize {
        let original = self.labels.len() as i64;
        self.add_vertex_with_original(label, original)
    }

    fn add_vertex_with_original(&mut self, label: Label, original: i64) -> usize {
        self.labels.push(label);
        self.adjacency.push(Vec::new());
        self.original_ids.push(original);
        self.labels.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, label: Label) -> Result<(), GraphError> {
        let n = self.labels.len();
        if u >= n {
            return Err(GraphError::UnknownVertex(u));
        }
        if v >= n {
            return Err(GraphError::UnknownVertex(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.edge_label(u, v).is_some() {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.adjacency[u].push((v, label));
        self.adjacency[v].push((u, label));
        self.edge_count += 1;
        Ok(())
    }

    /// Removes edge `(u, v)` and returns its label.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> Option<Label> {
        let pos = self.adjacency[u].iter().position(|&(w, _)| w == v)?;
        let (_, label) = self.adjacency[u].swap_remove(pos);
        let back = self.adjacency[v].iter().position(|&(w, _)| w == u)?;
        self.adjacency[v].swap_remove(back);
        self.edge_count -= 1;
        Some(label)
    }

    pub fn set_vertex_label(&mut self, v: usize, label: Label) {
        self.labels[v] = label;
    }

    /// Changes the label of an existing edge. Returns false if absent.
    pub fn set_edge_label(&mut self, u: usize, v: usize, label: Label) -> bool {
        let mut found = false;
        for (a, b) in [(u, v), (v, u)] {
            if let Some(entry) = self.adjacency[a].iter_mut().find(|(w, _)| *w == b) {
                entry.1 = label;
                found = true;
            }
        }
        found
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `|V| + |E|`.
    pub fn size(&self) -> usize {
        self.labels.len() + self.edge_count
    }

    #[inline]
    pub fn label(&self, v: usize) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[(usize, Label)] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn original_id(&self, v: usize) -> i64 {
        self.original_ids[v]
    }

    pub fn edge_label(&self, u: usize, v: usize) -> Option<Label> {
        let (a, b) = if self.adjacency[u].len() <= self.adjacency[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a]
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, l)| l)
    }

    /// Each undirected edge once, as `(u, v, label)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Label)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, adj)| {
            adj.iter()
                .filter(move |&&(v, _)| u < v)
                .map(move |&(v, l)| (u, v, l))
        })
    }

    /// Row-major `|V| x |V|` table of edge labels, `⊥` where no edge exists.
    pub fn edge_label_matrix(&self) -> EdgeLabelMatrix {
        let n = self.vertex_count();
        let mut cells = vec![Label::BOTTOM; n * n];
        for (u, adj) in self.adjacency.iter().enumerate() {
            for &(v, l) in adj {
                cells[u * n + v] = l;
            }
        }
        EdgeLabelMatrix { n, cells }
    }
}

/// Constant-time edge label lookup.
#[derive(Debug, Clone)]
pub struct EdgeLabelMatrix {
    n: usize,
    cells: Vec<Label>,
}

impl EdgeLabelMatrix {
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Label {
        self.cells[u * self.n + v]
    }
}

/// A one-to-one mapping from `V(q)` onto `V(g)` for graphs of equal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullMapping {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl FullMapping {
    /// Returns `None` unless `forward` is a permutation.
    pub fn from_forward(forward: Vec<usize>) -> Option<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (v, &u) in forward.iter().enumerate() {
            if u >= n || inverse[u] != usize::MAX {
                return None;
            }
            inverse[u] = v;
        }
        Some(FullMapping { forward, inverse })
    }

    pub fn identity(n: usize) -> Self {
        let forward: Vec<usize> = (0..n).collect();
        FullMapping {
            inverse: forward.clone(),
            forward,
        }
    }

    #[inline]
    pub fn image(&self, v: usize) -> usize {
        self.forward[v]
    }

    #[inline]
    pub fn preimage(&self, u: usize) -> usize {
        self.inverse[u]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// The mapping read in the opposite direction, from `V(g)` to `V(q)`.
    pub fn inverted(&self) -> FullMapping {
        FullMapping {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }
}

/// Number of edit operations needed to turn `q` into `g` while obeying `f`:
/// vertex relabelings, edge deletions or relabelings, and edge insertions.
pub fn editorial_cost(q: &Graph, g: &Graph, f: &FullMapping) -> u64 {
    assert_eq!(q.vertex_count(), g.vertex_count(), "graphs must be padded");
    assert_eq!(f.len(), q.vertex_count());
    let mut cost = 0u64;
    for v in 0..q.vertex_count() {
        if q.label(v) != g.label(f.image(v)) {
            cost += 1;
        }
    }
    for (v, w, l) in q.edges() {
        if g.edge_label(f.image(v), f.image(w)) != Some(l) {
            cost += 1;
        }
    }
    for (u, x, _) in g.edges() {
        if q.edge_label(f.preimage(u), f.preimage(x)).is_none() {
            cost += 1;
        }
    }
    cost
}

/// The two graphs of a comparison after padding, with `|V(q)| = |V(g)|`.
#[derive(Debug, Clone)]
pub struct PaddedPair {
    pub q: Graph,
    pub g: Graph,
    /// True when `q` came from the second argument.
    pub swapped: bool,
    /// Vertex count of `q` before padding; vertices at or above this index
    /// carry `⊥`.
    pub q_real: usize,
}

/// Picks the graph with fewer vertices as `q` (the first on ties) and pads
/// it with isolated `⊥` vertices up to the order of `g`.
pub fn pad_pair(g1: &Graph, g2: &Graph) -> PaddedPair {
    let swapped = g2.vertex_count() < g1.vertex_count();
    let (small, large) = if swapped { (g2, g1) } else { (g1, g2) };
    let mut q = small.clone();
    let q_real = q.vertex_count();
    for i in q_real..large.vertex_count() {
        q.add_vertex_with_original(Label::BOTTOM, -1 - (i - q_real) as i64);
    }
    PaddedPair {
        q,
        g: large.clone(),
        swapped,
        q_real,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("line outside of a graph")]
    OutsideGraph,
    #[error("vertex line after an edge line")]
    VertexAfterEdge,
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(i64),
    #[error("edge references unknown vertex {0}")]
    UnknownVertex(i64),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(i64, i64),
    #[error("self-loop on vertex {0}")]
    SelfLoop(i64),
    #[error("label token `⊥` is reserved")]
    ReservedLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// Parses every graph in `text`, interning labels into a fresh [`LabelSpace`].
pub fn parse_graphs(text: &str) -> Result<(Vec<Graph>, LabelSpace), ParseError> {
    let mut space = LabelSpace::default();
    let graphs = parse_graphs_with(text, &mut space)?;
    Ok((graphs, space))
}

/// Parses every graph in `text`, interning labels into `space` so that
/// graphs read from several sources share label ids.
pub fn parse_graphs_with(text: &str, space: &mut LabelSpace) -> Result<Vec<Graph>, ParseError> {
    struct Open {
        graph: Graph,
        ids: HashMap<i64, usize>,
        seen_edge: bool,
    }

    let mut out = Vec::new();
    let mut current: Option<Open> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |kind| ParseError { line, kind };
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "t" => {
                if tokens.len() != 3 || tokens[1] != "#" {
                    return Err(err(ParseErrorKind::Malformed(trimmed.to_string())));
                }
                let id: i64 = tokens[2]
                    .parse()
                    .map_err(|_| err(ParseErrorKind::Malformed(trimmed.to_string())))?;
                if let Some(open) = current.take() {
                    out.push(open.graph);
                }
                current = Some(Open {
                    graph: Graph::with_id(id),
                    ids: HashMap::new(),
                    seen_edge: false,
                });
            }
            "v" => {
                let open = current.as_mut().ok_or_else(|| err(ParseErrorKind::OutsideGraph))?;
                if tokens.len() != 3 {
                    return Err(err(ParseErrorKind::Malformed(trimmed.to_string())));
                }
                if open.seen_edge {
                    return Err(err(ParseErrorKind::VertexAfterEdge));
                }
                let vid: i64 = tokens[1]
                    .parse()
                    .map_err(|_| err(ParseErrorKind::Malformed(trimmed.to_string())))?;
                if open.ids.contains_key(&vid) {
                    return Err(err(ParseErrorKind::DuplicateVertex(vid)));
                }
                if tokens[2] == "⊥" {
                    return Err(err(ParseErrorKind::ReservedLabel));
                }
                let label = space.vertices.intern(tokens[2]);
                let dense = open.graph.add_vertex_with_original(label, vid);
                open.ids.insert(vid, dense);
            }
            "e" => {
                let open = current.as_mut().ok_or_else(|| err(ParseErrorKind::OutsideGraph))?;
                if tokens.len() != 4 {
                    return Err(err(ParseErrorKind::Malformed(trimmed.to_string())));
                }
                let parse_id = |s: &str| {
                    s.parse::<i64>()
                        .map_err(|_| err(ParseErrorKind::Malformed(trimmed.to_string())))
                };
                let a = parse_id(tokens[1])?;
                let b = parse_id(tokens[2])?;
                let u = *open
                    .ids
                    .get(&a)
                    .ok_or_else(|| err(ParseErrorKind::UnknownVertex(a)))?;
                let v = *open
                    .ids
                    .get(&b)
                    .ok_or_else(|| err(ParseErrorKind::UnknownVertex(b)))?;
                if tokens[3] == "⊥" {
                    return Err(err(ParseErrorKind::ReservedLabel));
                }
                let label = space.edges.intern(tokens[3]);
                open.graph.add_edge(u, v, label).map_err(|e| {
                    err(match e {
                        GraphError::SelfLoop(_) => ParseErrorKind::SelfLoop(a),
                        GraphError::DuplicateEdge(..) => ParseErrorKind::DuplicateEdge(a, b),
                        GraphError::UnknownVertex(_) => ParseErrorKind::UnknownVertex(b),
                    })
                })?;
                open.seen_edge = true;
            }
            t if t.starts_with('#') && current.is_none() => {}
            _ => return Err(err(ParseErrorKind::Malformed(trimmed.to_string()))),
        }
    }
    if let Some(open) = current.take() {
        out.push(open.graph);
    }
    Ok(out)
}

/// Writes `graphs` in the same text format [`parse_graphs`] reads, using the
/// original vertex ids.
pub fn write_graphs<W: Write>(out: &mut W, graphs: &[Graph], space: &LabelSpace) -> io::Result<()> {
    for graph in graphs {
        writeln!(out, "t # {}", graph.id)?;
        for v in 0..graph.vertex_count() {
            writeln!(
                out,
                "v {} {}",
                graph.original_id(v),
                space.vertices.name(graph.label(v))
            )?;
        }
        for (u, v, l) in graph.edges() {
            writeln!(
                out,
                "e {} {} {}",
                graph.original_id(u),
                graph.original_id(v),
                space.edges.name(l)
            )?;
        }
    }
    Ok(())
}

pub fn graphs_to_string(graphs: &[Graph], space: &LabelSpace) -> String {
    let mut buf = Vec::new();
    write_graphs(&mut buf, graphs, space).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("labels are valid UTF-8")
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bottom() {
            f.write_str("⊥")
        } else {
            write!(f, "#{}", self.0)
        }
    }
}
