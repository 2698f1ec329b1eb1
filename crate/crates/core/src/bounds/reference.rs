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

//! Slow from-scratch evaluation of every bound, for cross-checking the
//! incremental code. A mapping is given as the images of an order prefix.

use super::state::Instance;
use super::{BoundKind, BoundValue};
use crate::assignment::{solve, CostMatrix};
use crate::graph::Label;
use crate::multiset::{multiset_edit_distance as upsilon, Multiset};

const NONE: usize = usize::MAX;

struct View {
    q_to_g: Vec<usize>,
    g_to_q: Vec<usize>,
}

impl View {
    fn new(inst: &Instance, images: &[usize]) -> Self {
        let n = inst.n();
        let mut q_to_g = vec![NONE; n];
        let mut g_to_q = vec![NONE; n];
        for (level, &u) in images.iter().enumerate() {
            let v = inst.order()[level];
            assert_eq!(g_to_q[u], NONE, "images must be distinct");
            q_to_g[v] = u;
            g_to_q[u] = v;
        }
        View { q_to_g, g_to_q }
    }

    fn q_free(&self, v: usize) -> bool {
        self.q_to_g[v] == NONE
    }

    fn g_free(&self, u: usize) -> bool {
        self.g_to_q[u] == NONE
    }
}

/// Editorial cost restricted to the subgraphs induced by the mapped vertices.
pub fn anchored_cost(inst: &Instance, images: &[usize]) -> u64 {
    let view = View::new(inst, images);
    let (q, g) = (&inst.q, &inst.g);
    let mut cost = 0;
    for v in 0..inst.n() {
        if !view.q_free(v) && q.label(v) != g.label(view.q_to_g[v]) {
            cost += 1;
        }
    }
    for (a, b, l) in q.edges() {
        if view.q_free(a) || view.q_free(b) {
            continue;
        }
        if g.edge_label(view.q_to_g[a], view.q_to_g[b]) != Some(l) {
            cost += 1;
        }
    }
    for (x, y, _) in g.edges() {
        if view.g_free(x) || view.g_free(y) {
            continue;
        }
        if q.edge_label(view.g_to_q[x], view.g_to_q[y]).is_none() {
            cost += 1;
        }
    }
    cost
}

/// Vertex-label distance plus edge-label distance of the remainders.
pub fn label_set_remainder(inst: &Instance, images: &[usize]) -> u64 {
    let view = View::new(inst, images);
    let (q, g) = (&inst.q, &inst.g);
    let qv: Multiset = (0..inst.n()).filter(|&v| view.q_free(v)).map(|v| q.label(v)).collect();
    let gv: Multiset = (0..inst.n()).filter(|&u| view.g_free(u)).map(|u| g.label(u)).collect();
    let qe: Multiset = q
        .edges()
        .filter(|&(a, b, _)| view.q_free(a) || view.q_free(b))
        .map(|(_, _, l)| l)
        .collect();
    let ge: Multiset = g
        .edges()
        .filter(|&(a, b, _)| view.g_free(a) || view.g_free(b))
        .map(|(_, _, l)| l)
        .collect();
    (upsilon(&qv, &gv) + upsilon(&qe, &ge)) as u64
}

/// Like [`label_set_remainder`] but with cross edges compared per anchor.
pub fn anchored_label_set_remainder(inst: &Instance, images: &[usize]) -> u64 {
    let view = View::new(inst, images);
    let (q, g) = (&inst.q, &inst.g);
    let qv: Multiset = (0..inst.n()).filter(|&v| view.q_free(v)).map(|v| q.label(v)).collect();
    let gv: Multiset = (0..inst.n()).filter(|&u| view.g_free(u)).map(|u| g.label(u)).collect();
    let qi: Multiset = q
        .edges()
        .filter(|&(a, b, _)| view.q_free(a) && view.q_free(b))
        .map(|(_, _, l)| l)
        .collect();
    let gi: Multiset = g
        .edges()
        .filter(|&(a, b, _)| view.g_free(a) && view.g_free(b))
        .map(|(_, _, l)| l)
        .collect();
    let mut total = upsilon(&qv, &gv) + upsilon(&qi, &gi);
    for v in 0..inst.n() {
        if view.q_free(v) {
            continue;
        }
        let u = view.q_to_g[v];
        let qc: Multiset = q
            .neighbors(v)
            .iter()
            .filter(|&&(w, _)| view.q_free(w))
            .map(|&(_, l)| l)
            .collect();
        let gc: Multiset = g
            .neighbors(u)
            .iter()
            .filter(|&&(x, _)| view.g_free(x))
            .map(|&(_, l)| l)
            .collect();
        total += upsilon(&qc, &gc);
    }
    total as u64
}

/// Free-by-free cost matrix in half-units, built from multisets and an
/// explicit scan over all anchors. Also returns the row and column vertices
/// (ascending) and the star divisor.
pub fn assignment_matrix(
    kind: BoundKind,
    inst: &Instance,
    images: &[usize],
) -> (CostMatrix, Vec<usize>, Vec<usize>, i64) {
    assert!(kind.uses_assignment());
    let view = View::new(inst, images);
    let (q, g) = (&inst.q, &inst.g);
    let rows: Vec<usize> = (0..inst.n()).filter(|&v| view.q_free(v)).collect();
    let cols: Vec<usize> = (0..inst.n()).filter(|&u| view.g_free(u)).collect();
    let anchors: Vec<usize> = (0..inst.n()).filter(|&v| !view.q_free(v)).collect();
    let anchored = kind.is_anchored();
    let star = matches!(kind, BoundKind::Sm | BoundKind::SmAnchored);

    let edges_q = |v: usize, inner_only: bool| -> Multiset {
        q.neighbors(v)
            .iter()
            .filter(|&&(w, _)| !inner_only || view.q_free(w))
            .map(|&(_, l)| l)
            .collect()
    };
    let edges_g = |u: usize, inner_only: bool| -> Multiset {
        g.neighbors(u)
            .iter()
            .filter(|&&(x, _)| !inner_only || view.g_free(x))
            .map(|&(_, l)| l)
            .collect()
    };
    let mut m = CostMatrix::new(rows.len());
    for (i, &v) in rows.iter().enumerate() {
        for (j, &u) in cols.iter().enumerate() {
            let mut cost = 2 * i64::from(q.label(v) != g.label(u));
            cost += upsilon(&edges_q(v, anchored), &edges_g(u, anchored)) as i64;
            if anchored {
                for &a in &anchors {
                    let lq = q.edge_label(v, a).unwrap_or(Label::BOTTOM);
                    let lg = g.edge_label(u, view.q_to_g[a]).unwrap_or(Label::BOTTOM);
                    cost += 2 * i64::from(lq != lg);
                }
            }
            if star {
                let nq: Multiset = q
                    .neighbors(v)
                    .iter()
                    .filter(|&&(w, _)| view.q_free(w))
                    .map(|&(w, _)| q.label(w))
                    .collect();
                let ng: Multiset = g
                    .neighbors(u)
                    .iter()
                    .filter(|&&(x, _)| view.g_free(x))
                    .map(|&(x, _)| g.label(x))
                    .collect();
                cost += 2 * upsilon(&nq, &ng) as i64;
            }
            m.set(i, j, cost);
        }
    }
    let dq = rows.iter().map(|&v| q.degree(v)).max().unwrap_or(0) as i64;
    let dg = cols.iter().map(|&u| g.degree(u)).max().unwrap_or(0) as i64;
    let divisor = 4.max(dq + 1).max(dg + 1);
    (m, rows, cols, divisor)
}

fn scale(kind: BoundKind, half_units: i64, divisor: i64) -> BoundValue {
    if matches!(kind, BoundKind::Sm | BoundKind::SmAnchored) {
        BoundValue::ratio(half_units, 2 * divisor)
    } else {
        BoundValue::halves(half_units)
    }
}

fn plus(a: u64, b: BoundValue) -> BoundValue {
    BoundValue::ratio(a as i64 * b.denominator() + b.numerator(), b.denominator())
}

/// The remainder estimate of `kind` for the mapping, without the anchored
/// part. `BMaN` has the `BMa` remainder.
pub fn remainder_bound(kind: BoundKind, inst: &Instance, images: &[usize]) -> BoundValue {
    match kind {
        BoundKind::Ls => BoundValue::integer(label_set_remainder(inst, images) as i64),
        BoundKind::LsAnchored => BoundValue::integer(anchored_label_set_remainder(inst, images) as i64),
        _ => {
            let kind = if kind == BoundKind::BmAnchoredNaive {
                BoundKind::BmAnchored
            } else {
                kind
            };
            let (m, _, _, d) = assignment_matrix(kind, inst, images);
            let total = solve(&m).expect("feasible").total_cost;
            scale(kind, total, d)
        }
    }
}

/// Bound of the child `images ∪ {next ↦ u}`, each evaluated on its own.
pub fn child_bound(kind: BoundKind, inst: &Instance, images: &[usize], u: usize) -> BoundValue {
    let mut child = images.to_vec();
    child.push(u);
    match kind {
        BoundKind::Ls | BoundKind::LsAnchored | BoundKind::BmAnchoredNaive => {
            plus(anchored_cost(inst, &child), remainder_bound(kind, inst, &child))
        }
        _ => {
            let (m, rows, cols, d) = assignment_matrix(kind, inst, images);
            let v = inst.order()[images.len()];
            let row = rows.iter().position(|&r| r == v).expect("next vertex is free");
            let col = cols.iter().position(|&c| c == u).expect("candidate is unused");
            let total = solve(&m.pinned(row, col)).expect("feasible").total_cost;
            plus(anchored_cost(inst, images), scale(kind, total, d))
        }
    }
}
