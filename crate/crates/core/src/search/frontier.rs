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

//! Queues of nodes waiting to be extended.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use crate::bounds::BoundValue;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Entry {
    pub bound: BoundValue,
    pub level: u32,
    pub seq: u64,
    pub node: u32,
}

impl Entry {
    fn ceil(&self) -> i64 {
        self.bound.ceil()
    }
}

// Max-heap order: smallest bound, then deepest level, then oldest entry.
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .cmp(&self.bound)
            .then(self.level.cmp(&other.level))
            .then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

/// Best-first: lowest bound first. Entries made useless by a better upper
/// bound are left in place and dropped at pop time, or in one sweep once
/// they make up more than half the heap.
#[derive(Debug, Default)]
pub(crate) struct BestFirst {
    heap: BinaryHeap<Entry>,
    by_ceil: BTreeMap<i64, usize>,
}

impl BestFirst {
    pub fn push(&mut self, e: Entry) {
        *self.by_ceil.entry(e.ceil()).or_insert(0) += 1;
        self.heap.push(e);
    }

    pub fn pop(&mut self) -> Option<Entry> {
        let e = self.heap.pop()?;
        self.forget(e.ceil());
        Some(e)
    }

    fn forget(&mut self, ceil: i64) {
        let c = self.by_ceil.get_mut(&ceil).expect("tracked entry");
        *c -= 1;
        if *c == 0 {
            self.by_ceil.remove(&ceil);
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn min_ceil(&self) -> Option<i64> {
        self.by_ceil.keys().next().copied()
    }

    /// Called after the upper bound drops to `upper`. Returns the nodes
    /// removed by a sweep, if one ran.
    pub fn prune(&mut self, upper: i64) -> Vec<u32> {
        let stale: usize = self.by_ceil.range(upper..).map(|(_, &c)| c).sum();
        if stale * 2 <= self.heap.len() {
            return Vec::new();
        }
        let mut removed = Vec::with_capacity(stale);
        let entries = std::mem::take(&mut self.heap).into_vec();
        let mut kept = Vec::with_capacity(entries.len() - stale);
        for e in entries {
            if e.ceil() >= upper {
                removed.push(e.node);
            } else {
                kept.push(e);
            }
        }
        self.by_ceil.retain(|&c, _| c < upper);
        self.heap = BinaryHeap::from(kept);
        removed
    }

    pub fn drain(&mut self) -> Vec<u32> {
        self.by_ceil.clear();
        self.heap.drain().map(|e| e.node).collect()
    }
}

/// Depth-first: at most one pending node per level, the deepest popped
/// first.
#[derive(Debug)]
pub(crate) struct DepthFirst {
    slots: Vec<Option<Entry>>,
    len: usize,
}

impl DepthFirst {
    pub fn new(levels: usize) -> Self {
        DepthFirst {
            slots: vec![None; levels],
            len: 0,
        }
    }

    pub fn push(&mut self, e: Entry) {
        let slot = &mut self.slots[e.level as usize];
        assert!(slot.is_none(), "depth-first slot {} already taken", e.level);
        *slot = Some(e);
        self.len += 1;
    }

    pub fn pop(&mut self) -> Option<Entry> {
        let e = self.slots.iter_mut().rev().find_map(Option::take)?;
        self.len -= 1;
        Some(e)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn min_ceil(&self) -> Option<i64> {
        self.slots.iter().flatten().map(Entry::ceil).min()
    }

    pub fn drain(&mut self) -> Vec<u32> {
        self.len = 0;
        self.slots.iter_mut().filter_map(Option::take).map(|e| e.node).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(num: i64, level: u32, seq: u64) -> Entry {
        Entry {
            bound: BoundValue::halves(num),
            level,
            seq,
            node: seq as u32,
        }
    }

    #[test]
    fn best_first_order() {
        let mut q = BestFirst::default();
        q.push(entry(4, 1, 0));
        q.push(entry(4, 3, 1));
        q.push(entry(2, 1, 2));
        q.push(entry(4, 3, 3));
        let order: Vec<u64> = std::iter::from_fn(|| q.pop()).map(|e| e.seq).collect();
        assert_eq!(order, vec![2, 1, 3, 0]);
    }

    #[test]
    fn sweep_when_mostly_stale() {
        let mut q = BestFirst::default();
        for (i, num) in [2, 6, 8, 10].into_iter().enumerate() {
            q.push(entry(num, 1, i as u64));
        }
        assert!(q.prune(5).is_empty());
        let removed = q.prune(3);
        assert_eq!(removed.len(), 3);
        assert_eq!(q.len(), 1);
        assert_eq!(q.min_ceil(), Some(1));
    }

    #[test]
    fn depth_first_pops_deepest() {
        let mut q = DepthFirst::new(4);
        q.push(entry(0, 0, 0));
        q.push(entry(0, 2, 1));
        q.push(entry(0, 1, 2));
        assert_eq!(q.pop().unwrap().level, 2);
        assert_eq!(q.pop().unwrap().level, 1);
        assert_eq!(q.len(), 1);
    }
}
