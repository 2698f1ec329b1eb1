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

use super::state::{PartialMapping, UNMAPPED};
use super::{BoundKind, BoundValue};
use crate::assignment::{forbidden_walk, solve, CostMatrix, INFEASIBLE};
use crate::graph::{editorial_cost, FullMapping, Label};

/// Local view of a free vertex relative to a partial mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStructure {
    pub label: Label,
    /// Labels of all incident edges, sorted.
    pub edges: Vec<Label>,
    /// Labels of edges to free vertices, sorted.
    pub inner_edges: Vec<Label>,
    /// `(g vertex of the anchor, edge label)` for every anchored neighbor,
    /// sorted by anchor. Anchors without an edge are implicit `⊥` entries.
    pub anchors: Vec<(usize, Label)>,
    /// Labels of free neighbors, sorted.
    pub free_neighbors: Vec<Label>,
}

impl VertexStructure {
    /// Structure of the free `q` vertex `v`.
    pub fn of_q(pm: &PartialMapping<'_>, v: usize) -> Self {
        let q = &pm.instance().q;
        let mut s = VertexStructure::empty(q.label(v));
        for &(w, l) in q.neighbors(v) {
            s.edges.push(l);
            match pm.image(w) {
                UNMAPPED => {
                    s.inner_edges.push(l);
                    s.free_neighbors.push(q.label(w));
                }
                x => s.anchors.push((x, l)),
            }
        }
        s.normalize();
        s
    }

    /// Structure of the unused `g` vertex `u`.
    pub fn of_g(pm: &PartialMapping<'_>, u: usize) -> Self {
        let g = &pm.instance().g;
        let mut s = VertexStructure::empty(g.label(u));
        for &(x, l) in g.neighbors(u) {
            s.edges.push(l);
            if pm.is_used(x) {
                s.anchors.push((x, l));
            } else {
                s.inner_edges.push(l);
                s.free_neighbors.push(g.label(x));
            }
        }
        s.normalize();
        s
    }

    fn empty(label: Label) -> Self {
        VertexStructure {
            label,
            edges: Vec::new(),
            inner_edges: Vec::new(),
            anchors: Vec::new(),
            free_neighbors: Vec::new(),
        }
    }

    fn normalize(&mut self) {
        self.edges.sort_unstable();
        self.inner_edges.sort_unstable();
        self.anchors.sort_unstable();
        self.free_neighbors.sort_unstable();
    }
}

// Multiset edit distance of two sorted label lists.
fn sorted_upsilon(a: &[Label], b: &[Label]) -> i64 {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    (a.len().max(b.len()) - common) as i64
}

// Number of anchors whose edge label differs between the two sides,
// counting a missing edge as `⊥`.
fn anchor_mismatches(a: &[(usize, Label)], b: &[(usize, Label)]) -> i64 {
    let (mut i, mut j) = (0, 0);
    let (mut same, mut differ) = (0i64, 0i64);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a[i].1 == b[j].1 {
                    same += 1;
                } else {
                    differ += 1;
                }
                i += 1;
                j += 1;
            }
        }
    }
    a.len() as i64 + b.len() as i64 - 2 * same - differ
}

fn lambda_half_units(kind: BoundKind, v: &VertexStructure, u: &VertexStructure) -> i64 {
    let relabel = 2 * i64::from(v.label != u.label);
    let branch = if kind.is_anchored() {
        sorted_upsilon(&v.inner_edges, &u.inner_edges) + 2 * anchor_mismatches(&v.anchors, &u.anchors)
    } else {
        sorted_upsilon(&v.edges, &u.edges)
    };
    let star = if kind.is_star() {
        2 * sorted_upsilon(&v.free_neighbors, &u.free_neighbors)
    } else {
        0
    };
    relabel + branch + star
}

/// Cost of mapping free `v` to free `u` under an assignment-based bound.
/// `BMaN` uses the `BMa` cost.
///
/// # Panics
/// For the label-set kinds, which have no per-pair cost.
pub fn lambda_cost(kind: BoundKind, v: &VertexStructure, u: &VertexStructure) -> BoundValue {
    assert!(kind.uses_assignment(), "{kind} has no per-vertex cost");
    BoundValue::halves(lambda_half_units(kind, v, u))
}

/// The free-by-free cost matrix (half-units) with its row and column
/// vertices, both ascending.
#[derive(Debug, Clone)]
pub struct AssignmentMatrix {
    pub matrix: CostMatrix,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl AssignmentMatrix {
    pub fn row_of(&self, v: usize) -> usize {
        self.rows.binary_search(&v).expect("vertex is free")
    }

    pub fn col_of(&self, u: usize) -> usize {
        self.cols.binary_search(&u).expect("vertex is unused")
    }
}

pub fn assignment_matrix(kind: BoundKind, pm: &PartialMapping<'_>) -> AssignmentMatrix {
    let rows = pm.free_q();
    let cols = pm.unused();
    let qs: Vec<VertexStructure> = rows.iter().map(|&v| VertexStructure::of_q(pm, v)).collect();
    let gs: Vec<VertexStructure> = cols.iter().map(|&u| VertexStructure::of_g(pm, u)).collect();
    let mut matrix = CostMatrix::new(rows.len());
    for (i, vs) in qs.iter().enumerate() {
        for (j, us) in gs.iter().enumerate() {
            matrix.set(i, j, lambda_half_units(kind, vs, us));
        }
    }
    AssignmentMatrix { matrix, rows, cols }
}

/// `max(4, Δ+1)` over the free parts of both graphs, where Δ is the largest
/// degree of a free vertex counting its cross edges.
pub fn star_divisor(pm: &PartialMapping<'_>) -> i64 {
    let inst = pm.instance();
    let dq = pm.free_q().into_iter().map(|v| inst.q.degree(v)).max().unwrap_or(0);
    let dg = pm.unused().into_iter().map(|u| inst.g.degree(u)).max().unwrap_or(0);
    4.max(dq as i64 + 1).max(dg as i64 + 1)
}

/// Turns a remainder assignment total (half-units) into a bound value on
/// top of `anchored`.
fn assemble(kind: BoundKind, anchored: u64, half_units: i64, divisor: i64) -> BoundValue {
    let anchored = anchored as i64;
    if kind.is_star() {
        BoundValue::ratio(2 * divisor * anchored + half_units, 2 * divisor)
    } else {
        BoundValue::halves(2 * anchored + half_units)
    }
}

/// Lower bound on the cost of completing `pm`, excluding the anchored part.
pub fn remainder_bound(kind: BoundKind, pm: &PartialMapping<'_>) -> BoundValue {
    match kind {
        BoundKind::Ls => BoundValue::integer(pm.profile().label_set() as i64),
        BoundKind::LsAnchored => BoundValue::integer(pm.profile().anchored_label_set() as i64),
        _ => {
            if pm.is_full() {
                return BoundValue::ZERO;
            }
            let am = assignment_matrix(kind, pm);
            let total = solve(&am.matrix).expect("unrestricted matrix is feasible").total_cost;
            assemble(kind, 0, total, star_divisor(pm))
        }
    }
}

/// Lower bound on the cost of every full extension of `pm`: the anchored
/// cost plus [`remainder_bound`].
pub fn mapping_bound(kind: BoundKind, pm: &PartialMapping<'_>) -> BoundValue {
    let anchored = pm.anchored_cost();
    let rest = remainder_bound(kind, pm);
    BoundValue::ratio(anchored as i64 * rest.denominator() + rest.numerator(), rest.denominator())
}

/// How many children [`price_children`] has to price.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pricing {
    /// Only the best one (lowest bound, then lowest vertex id).
    Best,
    /// Every candidate.
    All,
}

/// Bounds of `pm ∪ {next ↦ u}` for the candidates `u`. With
/// [`Pricing::Best`] the result holds the single best child.
pub fn price_children(
    kind: BoundKind,
    pm: &mut PartialMapping<'_>,
    candidates: &[usize],
    pricing: Pricing,
) -> Vec<(usize, BoundValue)> {
    if candidates.is_empty() {
        return Vec::new();
    }
    let mut priced = match kind {
        BoundKind::Ls | BoundKind::LsAnchored => price_label_set(kind, pm, candidates),
        BoundKind::BmAnchoredNaive => candidates
            .iter()
            .map(|&u| {
                pm.push(u);
                let bound = naive_child(pm);
                pm.pop();
                (u, bound)
            })
            .collect(),
        _ => return price_by_assignment(kind, pm, candidates, pricing),
    };
    if pricing == Pricing::Best {
        let best = *priced
            .iter()
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("candidates are not empty");
        priced.clear();
        priced.push(best);
    }
    priced
}

fn naive_child(pm: &PartialMapping<'_>) -> BoundValue {
    let rem = remainder_bound(BoundKind::BmAnchored, pm);
    BoundValue::ratio(
        pm.anchored_cost() as i64 * rem.denominator() + rem.numerator(),
        rem.denominator(),
    )
}

// The q side of anchoring the next vertex is shared by all candidates and
// applied once; each candidate then adjusts only the counters touched by
// its own edges, and restores them.
fn price_label_set(
    kind: BoundKind,
    pm: &mut PartialMapping<'_>,
    candidates: &[usize],
) -> Vec<(usize, BoundValue)> {
    let inst = pm.instance();
    let v = pm.next_vertex();
    let mut anchor_label = vec![Label::BOTTOM; inst.n()];
    let mut d1 = 0i64;
    for &(w, l) in inst.q.neighbors(v) {
        let x = pm.image(w);
        if x != UNMAPPED {
            anchor_label[x] = l;
            d1 += 1;
        }
    }
    let base = pm.anchored_cost() as i64;
    pm.anchor_q_side(v);
    let mut out = Vec::with_capacity(candidates.len());
    for &u in candidates {
        let (mut d2, mut c1, mut c2) = (0i64, 0i64, 0i64);
        for &(x, l) in inst.g.neighbors(u) {
            if pm.is_used(x) {
                d2 += 1;
                let lq = anchor_label[x];
                if !lq.is_bottom() {
                    if lq == l {
                        c2 += 1;
                    } else {
                        c1 += 1;
                    }
                }
            }
        }
        let delta = d1 + d2 - 2 * c2 - c1 + i64::from(inst.q.label(v) != inst.g.label(u));
        pm.anchor_g_side(v, u);
        let rem = match kind {
            BoundKind::Ls => pm.profile().label_set(),
            _ => pm.profile().anchored_label_set(),
        };
        pm.release_g_side(v, u);
        out.push((u, BoundValue::integer(base + delta + rem as i64)));
    }
    pm.release_q_side(v);
    out
}

// One solve with the next vertex restricted to the candidates, then a walk
// that forbids its matched column each step, yielding the pinned optimum
// of every candidate in non-decreasing order.
fn price_by_assignment(
    kind: BoundKind,
    pm: &mut PartialMapping<'_>,
    candidates: &[usize],
    pricing: Pricing,
) -> Vec<(usize, BoundValue)> {
    let mut am = assignment_matrix(kind, pm);
    let row = am.row_of(pm.next_vertex());
    let mut allowed = vec![false; am.cols.len()];
    for &u in candidates {
        allowed[am.col_of(u)] = true;
    }
    for (j, &ok) in allowed.iter().enumerate() {
        if !ok {
            am.matrix.set(row, j, INFEASIBLE);
        }
    }
    let divisor = if kind.is_star() { star_divisor(pm) } else { 1 };
    let anchored = pm.anchored_cost();
    let state = solve(&am.matrix).expect("candidate row has a feasible cell");
    let mut walk = forbidden_walk(&state, &am.matrix, row);
    let mut out = Vec::with_capacity(candidates.len());
    match pricing {
        Pricing::All => {
            for (j, cost) in walk {
                out.push((am.cols[j], assemble(kind, anchored, cost, divisor)));
            }
        }
        Pricing::Best => {
            let (j, best) = walk.next().expect("at least one candidate");
            let mut pick = am.cols[j];
            for (j, cost) in walk {
                if cost != best {
                    break;
                }
                pick = pick.min(am.cols[j]);
            }
            out.push((pick, assemble(kind, anchored, best, divisor)));
        }
    }
    out
}

/// Completes `pm ∪ {next ↦ u}` with an optimal assignment of the remaining
/// vertices and returns the full mapping with its editorial cost. The
/// assignment is solved from scratch so the result depends only on the
/// mapping, not on how the search reached it. `None` for label-set kinds.
pub fn heuristic_full_mapping(
    kind: BoundKind,
    pm: &mut PartialMapping<'_>,
    u: usize,
) -> Option<(FullMapping, u64)> {
    if !kind.uses_assignment() {
        return None;
    }
    let inst = pm.instance();
    let full = if kind == BoundKind::BmAnchoredNaive {
        pm.push(u);
        let am = assignment_matrix(BoundKind::BmAnchored, pm);
        let st = solve(&am.matrix).expect("unrestricted matrix is feasible");
        let rest: Vec<(usize, usize)> = am
            .rows
            .iter()
            .zip(&st.row_match)
            .map(|(&v, &j)| (v, am.cols[j]))
            .collect();
        let full = pm.complete_with(&rest);
        pm.pop();
        full
    } else {
        let am = assignment_matrix(kind, pm);
        let pinned = am.matrix.pinned(am.row_of(pm.next_vertex()), am.col_of(u));
        let st = solve(&pinned).expect("pinned matrix is feasible");
        let rest: Vec<(usize, usize)> = am
            .rows
            .iter()
            .zip(&st.row_match)
            .map(|(&v, &j)| (v, am.cols[j]))
            .collect();
        pm.complete_with(&rest)
    };
    let cost = editorial_cost(&inst.q, &inst.g, &full);
    Some((full, cost))
}
