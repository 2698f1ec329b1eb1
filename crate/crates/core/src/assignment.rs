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

//! Minimum-cost perfect matching on square matrices (Hungarian method with
//! dual potentials), plus re-optimization after forbidding one cell.

use thiserror::Error;

/// Marks a cell that may not be used by any matching.
pub const INFEASIBLE: i64 = i64::MAX;

const UNMATCHED: usize = usize::MAX;

/// Square cost matrix. Callers in this crate store half-units (twice the
/// real cost) so that every value is an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMatrix {
    n: usize,
    costs: Vec<i64>,
}

impl CostMatrix {
    pub fn new(n: usize) -> Self {
        CostMatrix {
            n,
            costs: vec![0; n * n],
        }
    }

    /// # Panics
    /// If the rows are not all of length `rows.len()`.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = CostMatrix::new(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "cost matrix must be square");
            m.costs[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.costs[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, cost: i64) {
        debug_assert!(cost >= 0);
        self.costs[i * self.n + j] = cost;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.costs[i * self.n..(i + 1) * self.n]
    }

    /// Copy of the matrix in which `row` may only use `col`.
    pub fn pinned(&self, row: usize, col: usize) -> CostMatrix {
        let mut m = self.clone();
        for j in 0..self.n {
            if j != col {
                m.set(row, j, INFEASIBLE);
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no perfect matching of finite cost exists")]
pub struct Infeasible;

/// An optimal matching together with the dual potentials certifying it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentState {
    pub row_match: Vec<usize>,
    pub col_match: Vec<usize>,
    pub row_potential: Vec<i64>,
    pub col_potential: Vec<i64>,
    pub total_cost: i64,
}

impl AssignmentState {
    fn empty(n: usize) -> Self {
        AssignmentState {
            row_match: vec![UNMATCHED; n],
            col_match: vec![UNMATCHED; n],
            row_potential: vec![0; n],
            col_potential: vec![0; n],
            total_cost: 0,
        }
    }

    fn recompute_total(&mut self, m: &CostMatrix) {
        self.total_cost = self
            .row_match
            .iter()
            .enumerate()
            .map(|(i, &j)| m.get(i, j))
            .sum();
    }

    /// `row_potential[i] + col_potential[j] <= cost[i][j]` on every finite
    /// cell, with equality on matched cells.
    pub fn is_dual_feasible(&self, m: &CostMatrix) -> bool {
        let n = m.dim();
        for i in 0..n {
            for j in 0..n {
                let c = m.get(i, j);
                if c == INFEASIBLE {
                    continue;
                }
                let reduced = c - self.row_potential[i] - self.col_potential[j];
                if reduced < 0 || (self.row_match[i] == j && reduced != 0) {
                    return false;
                }
            }
        }
        true
    }
}

/// Minimum-cost perfect matching in O(n³).
pub fn solve(m: &CostMatrix) -> Result<AssignmentState, Infeasible> {
    let n = m.dim();
    let mut state = AssignmentState::empty(n);
    let mut scratch = Scratch::new(n);
    for row in 0..n {
        if !augment(m, &mut state, &mut scratch, row, None) {
            return Err(Infeasible);
        }
    }
    state.recompute_total(m);
    Ok(state)
}

/// Prices every feasible column of `row` by repeatedly forbidding the
/// column `row` is matched to and re-augmenting from `row`. Yields
/// `(column, min total cost with row pinned to column)` in non-decreasing
/// cost order; infeasible columns are omitted.
pub fn resolve_forbidden(state: &AssignmentState, m: &CostMatrix, row: usize) -> Vec<(usize, i64)> {
    forbidden_walk(state, m, row).collect()
}

/// Lazy form of [`resolve_forbidden`]; each step costs O(n²).
pub fn forbidden_walk<'m>(state: &AssignmentState, m: &'m CostMatrix, row: usize) -> ForbiddenWalk<'m> {
    let n = m.dim();
    ForbiddenWalk {
        state: state.clone(),
        matrix: m,
        row,
        forbidden: vec![false; n],
        scratch: Scratch::new(n),
        done: n == 0,
    }
}

pub struct ForbiddenWalk<'m> {
    state: AssignmentState,
    matrix: &'m CostMatrix,
    row: usize,
    forbidden: Vec<bool>,
    scratch: Scratch,
    done: bool,
}

impl ForbiddenWalk<'_> {
    /// The current optimal matching, before the column last yielded is
    /// forbidden.
    pub fn state(&self) -> &AssignmentState {
        &self.state
    }
}

impl Iterator for ForbiddenWalk<'_> {
    type Item = (usize, i64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let st = &mut self.state;
        let col = st.row_match[self.row];
        let item = (col, st.total_cost);
        self.forbidden[col] = true;
        st.row_match[self.row] = UNMATCHED;
        st.col_match[col] = UNMATCHED;
        if augment(self.matrix, st, &mut self.scratch, self.row, Some(&self.forbidden)) {
            st.recompute_total(self.matrix);
        } else {
            self.done = true;
        }
        Some(item)
    }
}

struct Scratch {
    min_slack: Vec<i64>,
    way: Vec<usize>,
    used: Vec<bool>,
    // Row owning each column; index n is the virtual source column.
    owner: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            min_slack: vec![0; n + 1],
            way: vec![0; n + 1],
            used: vec![false; n + 1],
            owner: vec![0; n + 1],
        }
    }
}

/// Shortest augmenting path from the free `start` row with reduced costs.
/// Column index `n` is a virtual source column owning `start`. Requires
/// feasible potentials and tight matched cells; preserves both. Returns
/// false, leaving the state untouched, when no finite path exists.
fn augment(
    m: &CostMatrix,
    st: &mut AssignmentState,
    sc: &mut Scratch,
    start: usize,
    forbidden: Option<&[bool]>,
) -> bool {
    let n = m.dim();
    let root = n;
    for j in 0..n {
        sc.owner[j] = st.col_match[j];
    }
    sc.owner[root] = start;
    sc.min_slack.fill(i64::MAX);
    sc.used.fill(false);
    let mut col = root;
    let saved_rows = st.row_potential.clone();
    let saved_cols = st.col_potential.clone();
    loop {
        sc.used[col] = true;
        let i = sc.owner[col];
        let mut delta = i64::MAX;
        let mut next = UNMATCHED;
        for j in 0..n {
            if sc.used[j] {
                continue;
            }
            let c = m.get(i, j);
            let blocked = c == INFEASIBLE || (i == start && forbidden.is_some_and(|f| f[j]));
            if !blocked {
                let reduced = c - st.row_potential[i] - st.col_potential[j];
                if reduced < sc.min_slack[j] {
                    sc.min_slack[j] = reduced;
                    sc.way[j] = col;
                }
            }
            if sc.min_slack[j] < delta {
                delta = sc.min_slack[j];
                next = j;
            }
        }
        if next == UNMATCHED {
            st.row_potential = saved_rows;
            st.col_potential = saved_cols;
            return false;
        }
        for j in 0..=n {
            if sc.used[j] {
                let r = sc.owner[j];
                st.row_potential[r] += delta;
                if j < n {
                    st.col_potential[j] -= delta;
                }
            } else if sc.min_slack[j] != i64::MAX {
                sc.min_slack[j] -= delta;
            }
        }
        col = next;
        if sc.owner[col] == UNMATCHED {
            break;
        }
    }
    // Flip the alternating path back to the root.
    while col != root {
        let prev = sc.way[col];
        let r = sc.owner[prev];
        st.row_match[r] = col;
        st.col_match[col] = r;
        col = prev;
    }
    true
}
