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

//! Branch-and-bound over the tree of partial mappings.
//!
//! Each popped node is extended by generating its best not yet generated
//! sibling and its best child. Nodes whose bound reaches the upper bound
//! are dropped. Best-first order gives the A*-style search, deepest-first
//! order the depth-first one; both share everything else.

mod arena;
mod frontier;

use std::fmt;
use std::rc::Rc;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bounds::{
    heuristic_full_mapping, price_children, BoundKind, BoundValue, Instance, OrderPolicy,
    PartialMapping, Pricing,
};
use crate::graph::{FullMapping, Graph};
use arena::{Arena, Node, SiblingList, NIL};
use frontier::{BestFirst, DepthFirst, Entry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "astar")]
    BestFirst,
    #[serde(rename = "dfs")]
    DepthFirst,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::BestFirst, Strategy::DepthFirst];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::BestFirst => "astar",
            Strategy::DepthFirst => "dfs",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "astar" | "best-first" => Ok(Strategy::BestFirst),
            "dfs" | "depth-first" => Ok(Strategy::DepthFirst),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Compute,
    /// Decide whether the distance is at most `tau`.
    Verify { tau: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub bound: BoundKind,
    /// Price all children at once and hand out siblings from that list.
    pub expand_all: bool,
    pub mode: Mode,
    pub order: OrderPolicy,
    pub time_limit: Duration,
    /// Cap on the estimated bytes held by stored nodes and the queue.
    pub memory_limit: u64,
    /// Record the level and bound of every extended node.
    pub trace: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: Strategy::BestFirst,
            bound: BoundKind::BmAnchored,
            expand_all: false,
            mode: Mode::Compute,
            order: OrderPolicy::Frequency,
            time_limit: Duration::from_secs(3600),
            memory_limit: 16 << 30,
            trace: false,
        }
    }
}

impl SearchConfig {
    pub fn new(strategy: Strategy, bound: BoundKind) -> Self {
        SearchConfig {
            strategy,
            bound,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Timeout,
    OutOfMemory,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Timeout => "timeout",
            Status::OutOfMemory => "out_of_memory",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Nodes extended, i.e. popped and not pruned.
    pub extensions: u64,
    pub pushed: u64,
    pub popped: u64,
    pub peak_live_nodes: u64,
    pub peak_queue: u64,
    pub upper_bound_updates: u64,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub level: u32,
    pub bound: BoundValue,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub status: Status,
    /// The distance, in compute mode when the search finished.
    pub distance: Option<u64>,
    /// The verdict, in verify mode when the search finished.
    pub verified: Option<bool>,
    /// Proven lower bound on the distance.
    pub lower_bound: u64,
    /// Cost of the best full mapping found, if any.
    pub upper_bound: Option<u64>,
    /// Best full mapping found, over the padded pair.
    pub witness: Option<FullMapping>,
    pub swapped: bool,
    pub q_real: usize,
    pub stats: SearchStats,
    pub trace: Vec<TraceEntry>,
}

impl SearchResult {
    /// The witness as vertex pairs `(first graph, second graph)` in the
    /// argument order of the call; `None` marks an inserted vertex.
    pub fn vertex_pairs(&self) -> Option<Vec<(Option<usize>, Option<usize>)>> {
        let f = self.witness.as_ref()?;
        let pairs = (0..f.len())
            .map(|v| {
                let q_side = (v < self.q_real).then_some(v);
                let g_side = Some(f.image(v));
                if self.swapped {
                    (g_side, q_side)
                } else {
                    (q_side, g_side)
                }
            })
            .collect();
        Some(pairs)
    }
}

/// Exact graph edit distance between `g1` and `g2`.
pub fn ged_compute(g1: &Graph, g2: &Graph, cfg: &SearchConfig) -> SearchResult {
    let cfg = SearchConfig {
        mode: Mode::Compute,
        ..cfg.clone()
    };
    let inst = Instance::new(g1, g2, &cfg.order);
    run(&inst, &cfg)
}

/// Whether the edit distance between `g1` and `g2` is at most `tau`.
pub fn ged_verify(g1: &Graph, g2: &Graph, tau: u64, cfg: &SearchConfig) -> SearchResult {
    let cfg = SearchConfig {
        mode: Mode::Verify { tau },
        ..cfg.clone()
    };
    let inst = Instance::new(g1, g2, &cfg.order);
    run(&inst, &cfg)
}

enum Frontier {
    Best(BestFirst),
    Depth(DepthFirst),
}

impl Frontier {
    fn push(&mut self, e: Entry) {
        match self {
            Frontier::Best(q) => q.push(e),
            Frontier::Depth(q) => q.push(e),
        }
    }

    fn pop(&mut self) -> Option<Entry> {
        match self {
            Frontier::Best(q) => q.pop(),
            Frontier::Depth(q) => q.pop(),
        }
    }

    fn len(&self) -> usize {
        match self {
            Frontier::Best(q) => q.len(),
            Frontier::Depth(q) => q.len(),
        }
    }

    fn min_ceil(&self) -> Option<i64> {
        match self {
            Frontier::Best(q) => q.min_ceil(),
            Frontier::Depth(q) => q.min_ceil(),
        }
    }

    fn drain(&mut self) -> Vec<u32> {
        match self {
            Frontier::Best(q) => q.drain(),
            Frontier::Depth(q) => q.drain(),
        }
    }
}

enum Stop {
    Finished,
    Verified,
    Limit(Status),
}

struct Engine<'a> {
    inst: &'a Instance,
    cfg: &'a SearchConfig,
    pm: PartialMapping<'a>,
    arena: Arena,
    frontier: Frontier,
    seq: u64,
    upper: u64,
    witness: Option<FullMapping>,
    stats: SearchStats,
    trace: Vec<TraceEntry>,
    path: Vec<usize>,
}

/// Runs the search on a prepared instance.
pub fn run(inst: &Instance, cfg: &SearchConfig) -> SearchResult {
    let start = Instant::now();
    let n = inst.n();
    let upper = match cfg.mode {
        Mode::Compute => u64::MAX,
        Mode::Verify { tau } => tau.saturating_add(1),
    };
    let frontier = match cfg.strategy {
        Strategy::BestFirst => Frontier::Best(BestFirst::default()),
        Strategy::DepthFirst => Frontier::Depth(DepthFirst::new(n.max(1))),
    };
    let mut engine = Engine {
        inst,
        cfg,
        pm: PartialMapping::new(inst),
        arena: Arena::default(),
        frontier,
        seq: 0,
        upper,
        witness: None,
        stats: SearchStats::default(),
        trace: Vec::new(),
        path: Vec::with_capacity(n),
    };
    let stop = if n == 0 {
        engine.offer(0, FullMapping::identity(0)).unwrap_or(Stop::Finished)
    } else {
        engine.search(start)
    };
    engine.finish(stop, start)
}

impl<'a> Engine<'a> {
    fn search(&mut self, start: Instant) -> Stop {
        let root = self.arena.alloc(Node::new(NIL, NIL, NIL, 0, BoundValue::ZERO));
        self.enqueue(root);
        while let Some(entry) = self.frontier.pop() {
            self.stats.popped += 1;
            let x = entry.node;
            if self.exhausted(entry.bound) {
                self.arena.release(x);
                if matches!(self.frontier, Frontier::Best(_)) {
                    // Everything left is at least as bad.
                    for id in self.frontier.drain() {
                        self.arena.release(id);
                    }
                }
                continue;
            }
            let stop = self.extend(x);
            self.arena.release(x);
            if let Some(stop) = stop {
                return stop;
            }
            self.stats.peak_live_nodes = self.stats.peak_live_nodes.max(self.arena.peak() as u64);
            if start.elapsed() > self.cfg.time_limit {
                return Stop::Limit(Status::Timeout);
            }
            if self.memory_bytes() > self.cfg.memory_limit {
                return Stop::Limit(Status::OutOfMemory);
            }
        }
        Stop::Finished
    }

    fn exhausted(&self, bound: BoundValue) -> bool {
        bound.ceil() as u64 >= self.upper
    }

    fn memory_bytes(&self) -> u64 {
        (self.arena.bytes() + self.frontier.len() * std::mem::size_of::<Entry>()) as u64
    }

    fn enqueue(&mut self, id: u32) {
        let node = self.arena.get(id);
        let entry = Entry {
            bound: node.bound,
            level: node.level,
            seq: self.seq,
            node: id,
        };
        self.seq += 1;
        self.frontier.push(entry);
        self.stats.pushed += 1;
        self.stats.peak_queue = self.stats.peak_queue.max(self.frontier.len() as u64);
    }

    /// Records a full mapping of cost `cost` if it improves the upper bound.
    /// Returns `Some` when the search can stop.
    fn offer(&mut self, cost: u64, mapping: FullMapping) -> Option<Stop> {
        if cost >= self.upper {
            return None;
        }
        self.upper = cost;
        self.witness = Some(mapping);
        self.stats.upper_bound_updates += 1;
        if matches!(self.cfg.mode, Mode::Verify { .. }) {
            return Some(Stop::Verified);
        }
        if let Frontier::Best(q) = &mut self.frontier {
            for id in q.prune(cost as i64) {
                self.arena.release(id);
            }
        }
        None
    }

    fn extend(&mut self, x: u32) -> Option<Stop> {
        self.stats.extensions += 1;
        let node = self.arena.get(x).clone();
        if self.cfg.trace {
            self.trace.push(TraceEntry {
                level: node.level,
                bound: node.bound,
            });
        }
        let level = node.level as usize;
        let mut path = std::mem::take(&mut self.path);
        self.arena.path(x, &mut path);

        if level >= 1 {
            self.pm.sync_to(&path[..level - 1]);
            let next = match &node.siblings {
                Some(list) => list
                    .get(node.cursor as usize)
                    .map(|&(u, b)| (u as usize, b, Some((Rc::clone(list), node.cursor + 1)))),
                None => {
                    let candidates = self.ungenerated_siblings(x);
                    price_children(self.cfg.bound, &mut self.pm, &candidates, Pricing::Best)
                        .first()
                        .map(|&(u, b)| (u, b, None))
                }
            };
            if let Some((u, bound, list)) = next {
                let bound = bound.max(node.bound);
                if !self.exhausted(bound) {
                    let prev = if list.is_some() { NIL } else { x };
                    let mut sibling = Node::new(node.parent, prev, u as u32, node.level, bound);
                    if let Some((list, cursor)) = list {
                        sibling.siblings = Some(list);
                        sibling.cursor = cursor;
                    }
                    let id = self.arena.alloc(sibling);
                    self.enqueue(id);
                    if let Some(stop) = self.improve_upper(u) {
                        self.path = path;
                        return Some(stop);
                    }
                }
            }
        }

        self.pm.sync_to(&path);
        self.path = path;
        let n = self.inst.n();
        if level + 1 == n {
            let u = self.pm.unused()[0];
            let cost = self.pm.anchored_cost() + self.pm.anchored_delta(u);
            let mapping = self.pm.complete_with(&[(self.pm.next_vertex(), u)]);
            return self.offer(cost, mapping);
        }
        let candidates = self.pm.unused();
        let (best, rest) = if self.cfg.expand_all {
            let mut all = price_children(self.cfg.bound, &mut self.pm, &candidates, Pricing::All);
            all.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
            let rest: SiblingList = all[1..].iter().map(|&(u, b)| (u as u32, b)).collect();
            (all[0], Some(rest))
        } else {
            let best = price_children(self.cfg.bound, &mut self.pm, &candidates, Pricing::Best);
            (best[0], None)
        };
        let bound = best.1.max(node.bound);
        if self.exhausted(bound) {
            return None;
        }
        let mut child = Node::new(x, NIL, best.0 as u32, node.level + 1, bound);
        child.siblings = rest;
        let id = self.arena.alloc(child);
        self.enqueue(id);
        self.improve_upper(best.0)
    }

    // g vertices the node's predecessors at this level have not taken yet.
    // Assumes the mapping is synced to the parent.
    fn ungenerated_siblings(&self, x: u32) -> Vec<usize> {
        let mut taken = vec![false; self.inst.n()];
        let mut cur = x;
        while cur != NIL {
            let node = self.arena.get(cur);
            taken[node.image as usize] = true;
            cur = node.prev;
        }
        self.pm.unused().into_iter().filter(|&u| !taken[u]).collect()
    }

    // Completes the freshly pushed `mapping ∪ {next ↦ u}` heuristically.
    fn improve_upper(&mut self, u: usize) -> Option<Stop> {
        let (mapping, cost) = heuristic_full_mapping(self.cfg.bound, &mut self.pm, u)?;
        self.offer(cost, mapping)
    }

    fn finish(mut self, stop: Stop, start: Instant) -> SearchResult {
        let upper = (self.upper != u64::MAX && self.witness.is_some()).then_some(self.upper);
        let (status, distance, verified, lower) = match (stop, self.cfg.mode) {
            (Stop::Finished, Mode::Compute) => {
                let d = upper.expect("a full mapping is always reached");
                (Status::Ok, Some(d), None, d)
            }
            (Stop::Finished, Mode::Verify { tau }) => (Status::Ok, None, Some(false), tau + 1),
            (Stop::Verified, _) => (Status::Ok, None, Some(true), 0),
            (Stop::Limit(status), mode) => {
                let cap = match mode {
                    Mode::Compute => self.upper,
                    Mode::Verify { tau } => tau + 1,
                };
                let pending = self.frontier.min_ceil().map_or(cap, |c| c.max(0) as u64);
                let lower = pending.min(cap);
                // The limit may strike after the bounds have already met.
                match (mode, upper) {
                    (Mode::Compute, Some(d)) if lower >= d => (Status::Ok, Some(d), None, d),
                    (Mode::Verify { tau }, _) if lower > tau => (Status::Ok, None, Some(false), lower),
                    _ => (status, None, None, lower),
                }
            }
        };
        for id in self.frontier.drain() {
            self.arena.release(id);
        }
        self.stats.peak_live_nodes = self.stats.peak_live_nodes.max(self.arena.peak() as u64);
        self.stats.elapsed = start.elapsed();
        SearchResult {
            status,
            distance,
            verified,
            lower_bound: lower,
            upper_bound: upper,
            witness: self.witness,
            swapped: self.inst.swapped,
            q_real: self.inst.q_real,
            stats: self.stats,
            trace: self.trace,
        }
    }
}
