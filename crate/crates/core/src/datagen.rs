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

//! Seeded random graphs and random edit perturbations.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Label, LabelInterner, LabelSpace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub edge_density: f64,
    pub vertex_labels: usize,
    pub edge_labels: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        GenSpec {
            n,
            edge_density: 0.20,
            vertex_labels: 5,
            edge_labels: 2,
            seed,
        }
    }

    pub fn edge_target(&self) -> usize {
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        ((self.edge_density * pairs as f64).round() as usize).min(pairs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbSpec {
    pub x: usize,
    pub seed: u64,
    /// Alphabet sizes that relabels draw from.
    pub vertex_labels: usize,
    pub edge_labels: usize,
}

impl PerturbSpec {
    pub fn new(x: usize, seed: u64) -> Self {
        PerturbSpec {
            x,
            seed,
            vertex_labels: 5,
            edge_labels: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EditOp {
    EdgeInsert,
    EdgeDelete,
    VertexRelabel,
    EdgeRelabel,
    VertexInsert,
}

/// Token of the `k`-th vertex label: `A`..`Z`, then `V26`, `V27`, ...
pub fn vertex_label_token(k: usize) -> String {
    if k < 26 {
        char::from(b'A' + k as u8).to_string()
    } else {
        format!("V{k}")
    }
}

/// Token of the `k`-th edge label: `a`..`z`, then `e26`, `e27`, ...
pub fn edge_label_token(k: usize) -> String {
    if k < 26 {
        char::from(b'a' + k as u8).to_string()
    } else {
        format!("e{k}")
    }
}

fn alphabet(interner: &mut LabelInterner, size: usize, token: fn(usize) -> String) -> Vec<Label> {
    (0..size).map(|k| interner.intern(&token(k))).collect()
}

/// Decodes the `index`-th unordered pair of `0..n` in row-major order of
/// the strict upper triangle.
fn pair_at(mut index: usize, n: usize) -> (usize, usize) {
    let mut u = 0;
    loop {
        let row = n - 1 - u;
        if index < row {
            return (u, u + 1 + index);
        }
        index -= row;
        u += 1;
    }
}

pub fn gen_random_graph(spec: &GenSpec, space: &mut LabelSpace) -> Graph {
    assert!(spec.n >= 1, "graph needs at least one vertex");
    assert!(
        spec.edge_density > 0.0 && spec.edge_density <= 1.0,
        "edge density must be in (0, 1]"
    );
    assert!(spec.vertex_labels >= 1 && spec.edge_labels >= 1);
    let vl = alphabet(&mut space.vertices, spec.vertex_labels, vertex_label_token);
    let el = alphabet(&mut space.edges, spec.edge_labels, edge_label_token);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut g = Graph::new();
    for _ in 0..spec.n {
        g.add_vertex(vl[rng.gen_range(0..vl.len())]);
    }
    let pairs = spec.n * (spec.n - 1) / 2;
    let mut picked = sample(&mut rng, pairs, spec.edge_target()).into_vec();
    picked.sort_unstable();
    for index in picked {
        let (u, v) = pair_at(index, spec.n);
        g.add_edge(u, v, el[rng.gen_range(0..el.len())])
            .expect("sampled pairs are distinct");
    }
    g
}

/// Applies `spec.x` random edits to a copy of `g`. Returns the new graph and
/// the operations performed.
pub fn perturb_with_log(g: &Graph, spec: &PerturbSpec, space: &mut LabelSpace) -> (Graph, Vec<EditOp>) {
    let vl = alphabet(&mut space.vertices, spec.vertex_labels, vertex_label_token);
    let el = alphabet(&mut space.edges, spec.edge_labels, edge_label_token);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = g.clone();
    let mut log = Vec::with_capacity(spec.x);
    for _ in 0..spec.x {
        let n = out.vertex_count();
        let m = out.edge_count();
        let mut ops = Vec::with_capacity(5);
        if m < n * n.saturating_sub(1) / 2 {
            ops.push(EditOp::EdgeInsert);
        }
        if m > 0 {
            ops.push(EditOp::EdgeDelete);
        }
        if n > 0 && relabel_possible(&vl, out.labels().iter().copied()) {
            ops.push(EditOp::VertexRelabel);
        }
        if m > 0 && relabel_possible(&el, out.edges().map(|(_, _, l)| l)) {
            ops.push(EditOp::EdgeRelabel);
        }
        ops.push(EditOp::VertexInsert);
        let op = ops[rng.gen_range(0..ops.len())];
        match op {
            EditOp::EdgeInsert => {
                let free: Vec<(usize, usize)> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .filter(|&(u, v)| out.edge_label(u, v).is_none())
                    .collect();
                let (u, v) = free[rng.gen_range(0..free.len())];
                out.add_edge(u, v, el[rng.gen_range(0..el.len())]).expect("pair is free");
            }
            EditOp::EdgeDelete => {
                let edges: Vec<_> = out.edges().collect();
                let (u, v, _) = edges[rng.gen_range(0..edges.len())];
                out.remove_edge(u, v);
            }
            EditOp::VertexRelabel => {
                let targets: Vec<usize> = (0..n).filter(|&v| vl.iter().any(|&l| l != out.label(v))).collect();
                let v = targets[rng.gen_range(0..targets.len())];
                let current = out.label(v);
                let other: Vec<Label> = vl.iter().copied().filter(|&l| l != current).collect();
                out.set_vertex_label(v, other[rng.gen_range(0..other.len())]);
            }
            EditOp::EdgeRelabel => {
                let edges: Vec<_> = out
                    .edges()
                    .filter(|&(_, _, cur)| el.iter().any(|&l| l != cur))
                    .collect();
                let (u, v, current) = edges[rng.gen_range(0..edges.len())];
                let other: Vec<Label> = el.iter().copied().filter(|&l| l != current).collect();
                out.set_edge_label(u, v, other[rng.gen_range(0..other.len())]);
            }
            EditOp::VertexInsert => {
                out.add_vertex(vl[rng.gen_range(0..vl.len())]);
            }
        }
        log.push(op);
    }
    (out, log)
}

pub fn perturb(g: &Graph, spec: &PerturbSpec, space: &mut LabelSpace) -> Graph {
    perturb_with_log(g, spec, space).0
}

fn relabel_possible(alphabet: &[Label], mut current: impl Iterator<Item = Label>) -> bool {
    current.any(|cur| alphabet.iter().any(|&l| l != cur))
}
