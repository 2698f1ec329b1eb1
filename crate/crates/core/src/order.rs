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

//! Greedy mapping order: vertices whose labels are rare in `g` first, each
//! next vertex adjacent to the ones already ordered when possible.

use crate::graph::{Graph, Label};

/// Per-vertex and per-label edge weights of `q`, scaled to integers.
///
/// A weight is `1 - frequency in g`; vertex weights are multiplied by
/// `max(|E(g)|, 1)` and edge weights by `|V(g)|`, so that both share the
/// denominator `|V(g)| * max(|E(g)|, 1)` and compare exactly.
#[derive(Debug, Clone)]
pub struct InfrequencyWeights {
    pub vertex: Vec<u64>,
    edge_by_label: Vec<u64>,
    edge_default: u64,
}

impl InfrequencyWeights {
    pub fn new(q: &Graph, g: &Graph) -> Self {
        let nv = g.vertex_count().max(1) as u64;
        let ne = g.edge_count().max(1) as u64;
        let label_len = |it: &mut dyn Iterator<Item = Label>| it.map(|l| l.index() + 1).max().unwrap_or(0);
        let vlen = label_len(&mut q.labels().iter().chain(g.labels()).copied());
        let elen = label_len(&mut q.edges().chain(g.edges()).map(|(_, _, l)| l));

        let mut vcount = vec![0u64; vlen];
        for &l in g.labels() {
            vcount[l.index()] += 1;
        }
        let mut ecount = vec![0u64; elen];
        for (_, _, l) in g.edges() {
            ecount[l.index()] += 1;
        }
        let vertex = q
            .labels()
            .iter()
            .map(|l| (nv - vcount[l.index()]) * ne)
            .collect();
        let edge_by_label = ecount.iter().map(|&c| (ne - c) * nv).collect();
        InfrequencyWeights {
            vertex,
            edge_by_label,
            edge_default: ne * nv,
        }
    }

    pub fn edge(&self, label: Label) -> u64 {
        self.edge_by_label
            .get(label.index())
            .copied()
            .unwrap_or(self.edge_default)
    }
}

/// Mapping order of `V(q)` against `g`. Padding vertices (label `⊥`) come
/// last in id order. Ties go to the lowest vertex id.
pub fn compute_order(q: &Graph, g: &Graph) -> Vec<usize> {
    let n = q.vertex_count();
    let w = InfrequencyWeights::new(q, g);
    let real: Vec<usize> = (0..n).filter(|&v| !q.label(v).is_bottom()).collect();
    let mut placed = vec![false; n];
    // Weight of edges from each vertex into the ordered prefix; `None` when
    // the vertex has no neighbor there yet.
    let mut link: Vec<Option<u64>> = vec![None; n];
    let mut order = Vec::with_capacity(n);

    for _ in 0..real.len() {
        let connected = real
            .iter()
            .copied()
            .filter(|&v| !placed[v])
            .filter_map(|v| link[v].map(|s| (w.vertex[v] + s, v)))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let next = match connected {
            Some((_, v)) => v,
            None => real
                .iter()
                .copied()
                .filter(|&v| !placed[v])
                .map(|v| {
                    let s: u64 = q.neighbors(v).iter().map(|&(_, l)| w.edge(l)).sum();
                    (w.vertex[v] + s, v)
                })
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .map(|(_, v)| v)
                .expect("an unplaced vertex remains"),
        };
        placed[next] = true;
        order.push(next);
        for &(x, l) in q.neighbors(next) {
            if !placed[x] {
                *link[x].get_or_insert(0) += w.edge(l);
            }
        }
    }
    order.extend((0..n).filter(|&v| q.label(v).is_bottom()));
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let mut q = Graph::new();
        q.add_vertex(Label(1));
        assert_eq!(compute_order(&q, &q), vec![0]);
    }

    #[test]
    fn rare_label_first() {
        let mut q = Graph::new();
        let mut g = Graph::new();
        for l in [1, 1, 2, 1] {
            q.add_vertex(Label(l));
        }
        for _ in 0..4 {
            g.add_vertex(Label(1));
        }
        assert_eq!(compute_order(&q, &g)[0], 2);
    }

    #[test]
    fn prefix_stays_connected() {
        // Path 0-1-2-3 plus an isolated vertex 4 with the rarest label.
        let mut q = Graph::new();
        for l in [1, 1, 1, 1, 3] {
            q.add_vertex(Label(l));
        }
        for i in 1..4 {
            q.add_edge(i - 1, i, Label(1)).unwrap();
        }
        let mut g = q.clone();
        g.set_vertex_label(4, Label(1));
        let order = compute_order(&q, &g);
        assert_eq!(order[0], 4);
        for k in 2..order.len() {
            let v = order[k];
            assert!(order[1..k].iter().any(|&p| q.edge_label(p, v).is_some()));
        }
    }

    #[test]
    fn padding_goes_last() {
        let mut q = Graph::new();
        q.add_vertex(Label::BOTTOM);
        q.add_vertex(Label(2));
        let order = compute_order(&q, &q);
        assert_eq!(order, vec![1, 0]);
    }
}
