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

//! Exhaustive enumeration, for checking the search on small graphs. Shares
//! nothing with the bound code beyond the editorial cost.

use thiserror::Error;

use crate::assignment::{CostMatrix, INFEASIBLE};
use crate::graph::{editorial_cost, pad_pair, FullMapping, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimit {
    pub max_vertices: usize,
}

impl Default for OracleLimit {
    fn default() -> Self {
        OracleLimit { max_vertices: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{vertices} vertices exceed the enumeration limit of {limit}")]
pub struct TooLarge {
    pub vertices: usize,
    pub limit: usize,
}

impl OracleLimit {
    fn check(&self, vertices: usize) -> Result<(), TooLarge> {
        if vertices > self.max_vertices {
            Err(TooLarge {
                vertices,
                limit: self.max_vertices,
            })
        } else {
            Ok(())
        }
    }
}

/// Rearranges `items` into the next permutation in lexicographic order.
/// Returns false, leaving the slice sorted, after the last one.
pub fn next_permutation(items: &mut [usize]) -> bool {
    let n = items.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        items.reverse();
        return false;
    }
    let mut j = n - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

/// Minimum editorial cost over all bijections of the padded pair, with one
/// mapping attaining it (the first in lexicographic order).
pub fn brute_force_ged_with_mapping(
    g1: &Graph,
    g2: &Graph,
    limit: OracleLimit,
) -> Result<(u64, FullMapping), TooLarge> {
    let pair = pad_pair(g1, g2);
    brute_force_extension_min_with_mapping(&pair.q, &pair.g, &[], limit)
}

pub fn brute_force_ged(g1: &Graph, g2: &Graph, limit: OracleLimit) -> Result<u64, TooLarge> {
    brute_force_ged_with_mapping(g1, g2, limit).map(|(cost, _)| cost)
}

/// Minimum editorial cost over the full mappings of the equal-order `q`
/// and `g` that contain every `(q vertex, g vertex)` pair of `fixed`.
pub fn brute_force_extension_min(
    q: &Graph,
    g: &Graph,
    fixed: &[(usize, usize)],
    limit: OracleLimit,
) -> Result<u64, TooLarge> {
    brute_force_extension_min_with_mapping(q, g, fixed, limit).map(|(cost, _)| cost)
}

pub fn brute_force_extension_min_with_mapping(
    q: &Graph,
    g: &Graph,
    fixed: &[(usize, usize)],
    limit: OracleLimit,
) -> Result<(u64, FullMapping), TooLarge> {
    let n = q.vertex_count();
    assert_eq!(n, g.vertex_count(), "graphs must be padded");
    limit.check(n)?;
    let mut forward = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for &(v, u) in fixed {
        assert!(forward[v] == usize::MAX && !used[u], "fixed pairs must be injective");
        forward[v] = u;
        used[u] = true;
    }
    let free_q: Vec<usize> = (0..n).filter(|&v| forward[v] == usize::MAX).collect();
    let mut free_g: Vec<usize> = (0..n).filter(|&u| !used[u]).collect();
    let mut best: Option<(u64, FullMapping)> = None;
    loop {
        for (&v, &u) in free_q.iter().zip(&free_g) {
            forward[v] = u;
        }
        let f = FullMapping::from_forward(forward.clone()).expect("bijection");
        let cost = editorial_cost(q, g, &f);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, f));
        }
        if !next_permutation(&mut free_g) {
            break;
        }
    }
    Ok(best.expect("at least one mapping"))
}

/// Minimum-cost perfect matching by trying every permutation. `None` if
/// every permutation hits an infeasible cell.
pub fn brute_force_assignment(m: &CostMatrix) -> Option<i64> {
    let n = m.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = None;
    loop {
        let mut total = 0i64;
        let mut feasible = true;
        for (i, &j) in perm.iter().enumerate() {
            let c = m.get(i, j);
            if c == INFEASIBLE {
                feasible = false;
                break;
            }
            total += c;
        }
        if feasible && best.is_none_or(|b| total < b) {
            best = Some(total);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best
}

/// Edit distance by mapping the smaller graph injectively into the larger
/// one without padding: unmatched vertices of the larger graph are inserted
/// together with all their edges.
pub fn brute_force_injection_ged(g1: &Graph, g2: &Graph, limit: OracleLimit) -> Result<u64, TooLarge> {
    let (small, large) = if g2.vertex_count() < g1.vertex_count() {
        (g2, g1)
    } else {
        (g1, g2)
    };
    let (k, n) = (small.vertex_count(), large.vertex_count());
    limit.check(n)?;
    let mut best = u64::MAX;
    let mut image = vec![usize::MAX; k];
    let mut used = vec![false; n];
    injections(small, large, 0, &mut image, &mut used, &mut best);
    Ok(best)
}

fn injections(
    small: &Graph,
    large: &Graph,
    v: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    best: &mut u64,
) {
    let n = large.vertex_count();
    if v == small.vertex_count() {
        let mut preimage = vec![usize::MAX; n];
        for (a, &u) in image.iter().enumerate() {
            preimage[u] = a;
        }
        let mut cost = (n - small.vertex_count()) as u64;
        for (a, &u) in image.iter().enumerate() {
            cost += u64::from(small.label(a) != large.label(u));
        }
        for (a, b, l) in small.edges() {
            cost += u64::from(large.edge_label(image[a], image[b]) != Some(l));
        }
        for (x, y, _) in large.edges() {
            let present = preimage[x] != usize::MAX
                && preimage[y] != usize::MAX
                && small.edge_label(preimage[x], preimage[y]).is_some();
            cost += u64::from(!present);
        }
        *best = (*best).min(cost);
        return;
    }
    for u in 0..n {
        if used[u] {
            continue;
        }
        used[u] = true;
        image[v] = u;
        injections(small, large, v + 1, image, used, best);
        used[u] = false;
    }
}
