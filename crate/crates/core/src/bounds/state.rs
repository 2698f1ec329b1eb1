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

use serde::{Deserialize, Serialize};

use crate::graph::{pad_pair, EdgeLabelMatrix, FullMapping, Graph, Label};
use crate::multiset::LabelBalance;
use crate::order::compute_order;

pub const UNMAPPED: usize = usize::MAX;

/// How the vertices of `q` are ordered for mapping.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderPolicy {
    /// Infrequent labels first, keeping the prefix connected.
    #[default]
    Frequency,
    /// Vertex id order.
    Identity,
    /// An explicit permutation of the padded `q`.
    Custom(Vec<usize>),
}

/// A padded graph pair with its matching order. Immutable during a search.
#[derive(Debug, Clone)]
pub struct Instance {
    pub q: Graph,
    pub g: Graph,
    /// True when `q` is the second graph handed to [`Instance::new`].
    pub swapped: bool,
    /// Vertices of `q` below this index are real, the rest are padding.
    pub q_real: usize,
    order: Vec<usize>,
    q_edges: EdgeLabelMatrix,
    g_edges: EdgeLabelMatrix,
    vertex_labels: usize,
    edge_labels: usize,
}

impl Instance {
    pub fn new(g1: &Graph, g2: &Graph, policy: &OrderPolicy) -> Self {
        let pair = pad_pair(g1, g2);
        let order = match policy {
            OrderPolicy::Frequency => compute_order(&pair.q, &pair.g),
            OrderPolicy::Identity => (0..pair.q.vertex_count()).collect(),
            OrderPolicy::Custom(order) => {
                let mut sorted = order.clone();
                sorted.sort_unstable();
                assert!(
                    sorted.iter().copied().eq(0..pair.q.vertex_count()),
                    "custom order must be a permutation of the padded vertices"
                );
                order.clone()
            }
        };
        let label_bound = |labels: &mut dyn Iterator<Item = Label>| {
            labels.map(|l| l.index()).max().unwrap_or(0) + 1
        };
        let vertex_labels = label_bound(&mut pair.q.labels().iter().chain(pair.g.labels()).copied());
        let edge_labels = label_bound(
            &mut pair
                .q
                .edges()
                .chain(pair.g.edges())
                .map(|(_, _, l)| l),
        );
        Instance {
            q_edges: pair.q.edge_label_matrix(),
            g_edges: pair.g.edge_label_matrix(),
            q: pair.q,
            g: pair.g,
            swapped: pair.swapped,
            q_real: pair.q_real,
            order,
            vertex_labels,
            edge_labels,
        }
    }

    /// Number of vertices on each side after padding.
    #[inline]
    pub fn n(&self) -> usize {
        self.q.vertex_count()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    #[inline]
    pub fn q_edge(&self, v: usize, w: usize) -> Label {
        self.q_edges.get(v, w)
    }

    #[inline]
    pub fn g_edge(&self, u: usize, x: usize) -> Label {
        self.g_edges.get(u, x)
    }

    pub(crate) fn vertex_label_count(&self) -> usize {
        self.vertex_labels
    }

    pub(crate) fn edge_label_count(&self) -> usize {
        self.edge_labels
    }
}

/// Label multisets of the unmapped remainder, maintained incrementally.
/// Left side is `q`, right side is `g`.
#[derive(Debug, Clone)]
pub struct RemainderProfile {
    vertex: LabelBalance,
    /// Inner and cross edges.
    edge: LabelBalance,
    inner: LabelBalance,
    /// Cross edges grouped by their anchored endpoint, indexed by the
    /// `q` vertex of the anchor.
    cross: Vec<LabelBalance>,
    cross_sum: usize,
}

impl RemainderProfile {
    fn new(inst: &Instance) -> Self {
        let mut p = RemainderProfile {
            vertex: LabelBalance::new(inst.vertex_label_count()),
            edge: LabelBalance::new(inst.edge_label_count()),
            inner: LabelBalance::new(inst.edge_label_count()),
            cross: vec![LabelBalance::new(inst.edge_label_count()); inst.n()],
            cross_sum: 0,
        };
        for &l in inst.q.labels() {
            p.vertex.add_left(l);
        }
        for &l in inst.g.labels() {
            p.vertex.add_right(l);
        }
        for (_, _, l) in inst.q.edges() {
            p.edge.add_left(l);
            p.inner.add_left(l);
        }
        for (_, _, l) in inst.g.edges() {
            p.edge.add_right(l);
            p.inner.add_right(l);
        }
        p
    }

    #[inline]
    fn update_cross(&mut self, anchor: usize, op: impl FnOnce(&mut LabelBalance)) {
        let before = self.cross[anchor].upsilon();
        op(&mut self.cross[anchor]);
        self.cross_sum = self.cross_sum + self.cross[anchor].upsilon() - before;
    }

    pub fn vertex_upsilon(&self) -> usize {
        self.vertex.upsilon()
    }

    pub fn edge_upsilon(&self) -> usize {
        self.edge.upsilon()
    }

    pub fn inner_upsilon(&self) -> usize {
        self.inner.upsilon()
    }

    /// Sum over anchors of the cross-edge multiset distance.
    pub fn cross_upsilon(&self) -> usize {
        self.cross_sum
    }

    pub fn free_edges(&self) -> (usize, usize) {
        (self.edge.left(), self.edge.right())
    }

    pub fn label_set(&self) -> usize {
        self.vertex.upsilon() + self.edge.upsilon()
    }

    pub fn anchored_label_set(&self) -> usize {
        self.vertex.upsilon() + self.inner.upsilon() + self.cross_sum
    }
}

/// A prefix of the matching order mapped into `g`, with its anchored cost
/// and remainder profile. Extended and retracted one vertex at a time.
#[derive(Debug, Clone)]
pub struct PartialMapping<'a> {
    inst: &'a Instance,
    q_to_g: Vec<usize>,
    g_to_q: Vec<usize>,
    images: Vec<usize>,
    costs: Vec<u64>,
    profile: RemainderProfile,
}

impl<'a> PartialMapping<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        let n = inst.n();
        PartialMapping {
            inst,
            q_to_g: vec![UNMAPPED; n],
            g_to_q: vec![UNMAPPED; n],
            images: Vec::with_capacity(n),
            costs: Vec::with_capacity(n),
            profile: RemainderProfile::new(inst),
        }
    }

    /// Maps the order prefix to `images`, level by level.
    pub fn from_images(inst: &'a Instance, images: &[usize]) -> Self {
        let mut pm = PartialMapping::new(inst);
        for &u in images {
            pm.push(u);
        }
        pm
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    /// Number of mapped vertices.
    #[inline]
    pub fn level(&self) -> usize {
        self.images.len()
    }

    pub fn is_full(&self) -> bool {
        self.level() == self.inst.n()
    }

    /// The next `q` vertex to map.
    #[inline]
    pub fn next_vertex(&self) -> usize {
        self.inst.order[self.level()]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn image(&self, v: usize) -> usize {
        self.q_to_g[v]
    }

    #[inline]
    pub fn preimage(&self, u: usize) -> usize {
        self.g_to_q[u]
    }

    #[inline]
    pub fn is_used(&self, u: usize) -> bool {
        self.g_to_q[u] != UNMAPPED
    }

    /// `g` vertices not yet used, ascending.
    pub fn unused(&self) -> Vec<usize> {
        (0..self.inst.n()).filter(|&u| !self.is_used(u)).collect()
    }

    /// `q` vertices not yet mapped, ascending.
    pub fn free_q(&self) -> Vec<usize> {
        (0..self.inst.n())
            .filter(|&v| self.q_to_g[v] == UNMAPPED)
            .collect()
    }

    /// Editorial cost of the mapped part restricted to the induced subgraphs.
    #[inline]
    pub fn anchored_cost(&self) -> u64 {
        self.costs.last().copied().unwrap_or(0)
    }

    pub fn profile(&self) -> &RemainderProfile {
        &self.profile
    }

    /// Increase of the anchored cost caused by mapping the next vertex to `u`.
    pub fn anchored_delta(&self, u: usize) -> u64 {
        let inst = self.inst;
        let v = self.next_vertex();
        let (mut d1, mut d2, mut c1, mut c2) = (0u64, 0u64, 0u64, 0u64);
        for &(w, l) in inst.q.neighbors(v) {
            let x = self.q_to_g[w];
            if x == UNMAPPED {
                continue;
            }
            d1 += 1;
            let lg = inst.g_edge(u, x);
            if !lg.is_bottom() {
                if lg == l {
                    c2 += 1;
                } else {
                    c1 += 1;
                }
            }
        }
        for &(x, _) in inst.g.neighbors(u) {
            if self.g_to_q[x] != UNMAPPED {
                d2 += 1;
            }
        }
        d1 + d2 - 2 * c2 - c1 + u64::from(inst.q.label(v) != inst.g.label(u))
    }

    /// Maps the next vertex to the unused `u`.
    pub fn push(&mut self, u: usize) {
        debug_assert!(!self.is_used(u));
        let v = self.next_vertex();
        let cost = self.anchored_cost() + self.anchored_delta(u);
        self.anchor_q_side(v);
        self.anchor_g_side(v, u);
        self.q_to_g[v] = u;
        self.g_to_q[u] = v;
        self.images.push(u);
        self.costs.push(cost);
    }

    /// Undoes the last [`push`](Self::push).
    pub fn pop(&mut self) -> Option<usize> {
        let u = self.images.pop()?;
        self.costs.pop();
        let v = self.g_to_q[u];
        self.q_to_g[v] = UNMAPPED;
        self.g_to_q[u] = UNMAPPED;
        self.release_g_side(v, u);
        self.release_q_side(v);
        Some(u)
    }

    /// Pops and pushes until the mapped images equal `images`.
    pub fn sync_to(&mut self, images: &[usize]) {
        let common = self
            .images
            .iter()
            .zip(images)
            .take_while(|(a, b)| a == b)
            .count();
        while self.level() > common {
            self.pop();
        }
        for &u in &images[common..] {
            self.push(u);
        }
    }

    /// The full mapping formed by the mapped prefix and `rest`, a list of
    /// `(q vertex, g vertex)` pairs covering the free vertices.
    pub fn complete_with(&self, rest: &[(usize, usize)]) -> FullMapping {
        let mut forward = self.q_to_g.clone();
        for &(v, u) in rest {
            forward[v] = u;
        }
        FullMapping::from_forward(forward).expect("completion must be a bijection")
    }

    // Removes `v` from the free part of q: its edges to free vertices turn
    // into cross edges of the new anchor, its edges to anchors leave the
    // remainder.
    pub(crate) fn anchor_q_side(&mut self, v: usize) {
        let inst = self.inst;
        let p = &mut self.profile;
        p.vertex.remove_left(inst.q.label(v));
        for &(w, l) in inst.q.neighbors(v) {
            if self.q_to_g[w] == UNMAPPED {
                p.inner.remove_left(l);
                p.update_cross(v, |b| b.add_left(l));
            } else {
                p.edge.remove_left(l);
                p.update_cross(w, |b| b.remove_left(l));
            }
        }
    }

    pub(crate) fn release_q_side(&mut self, v: usize) {
        let inst = self.inst;
        let p = &mut self.profile;
        p.vertex.add_left(inst.q.label(v));
        for &(w, l) in inst.q.neighbors(v) {
            if self.q_to_g[w] == UNMAPPED {
                p.inner.add_left(l);
                p.update_cross(v, |b| b.remove_left(l));
            } else {
                p.edge.add_left(l);
                p.update_cross(w, |b| b.add_left(l));
            }
        }
    }

    pub(crate) fn anchor_g_side(&mut self, v: usize, u: usize) {
        let inst = self.inst;
        let p = &mut self.profile;
        p.vertex.remove_right(inst.g.label(u));
        for &(x, l) in inst.g.neighbors(u) {
            let a = self.g_to_q[x];
            if a == UNMAPPED {
                p.inner.remove_right(l);
                p.update_cross(v, |b| b.add_right(l));
            } else {
                p.edge.remove_right(l);
                p.update_cross(a, |b| b.remove_right(l));
            }
        }
    }

    pub(crate) fn release_g_side(&mut self, v: usize, u: usize) {
        let inst = self.inst;
        let p = &mut self.profile;
        p.vertex.add_right(inst.g.label(u));
        for &(x, l) in inst.g.neighbors(u) {
            let a = self.g_to_q[x];
            if a == UNMAPPED {
                p.inner.add_right(l);
                p.update_cross(v, |b| b.remove_right(l));
            } else {
                p.edge.add_right(l);
                p.update_cross(a, |b| b.add_right(l));
            }
        }
    }
}
