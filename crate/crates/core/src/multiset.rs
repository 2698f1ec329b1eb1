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

//! Label multisets and their edit distance.

use std::collections::BTreeMap;

use crate::graph::Label;

/// A multiset of labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multiset {
    counts: BTreeMap<Label, u32>,
    total: usize,
}

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: Label) {
        self.insert_n(label, 1);
    }

    pub fn insert_n(&mut self, label: Label, n: u32) {
        if n == 0 {
            return;
        }
        *self.counts.entry(label).or_insert(0) += n;
        self.total += n as usize;
    }

    /// Removes one copy of `label`; returns false if there was none.
    pub fn remove(&mut self, label: Label) -> bool {
        match self.counts.get_mut(&label) {
            Some(c) => {
                *c -= 1;
                if *c == 0 {
                    self.counts.remove(&label);
                }
                self.total -= 1;
                true
            }
            None => false,
        }
    }

    pub fn count(&self, label: Label) -> u32 {
        self.counts.get(&label).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, u32)> + '_ {
        self.counts.iter().map(|(&l, &c)| (l, c))
    }

    /// Size of the multiset intersection.
    pub fn intersection_size(&self, other: &Multiset) -> usize {
        let (small, large) = if self.counts.len() <= other.counts.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .counts
            .iter()
            .map(|(l, &c)| c.min(large.count(*l)) as usize)
            .sum()
    }

    /// Multiset sum `self ⊎ other`.
    pub fn union_sum(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        for (l, c) in other.iter() {
            out.insert_n(l, c);
        }
        out
    }
}

impl FromIterator<Label> for Multiset {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for l in iter {
            m.insert(l);
        }
        m
    }
}

/// `max(|s1|, |s2|) - |s1 ∩ s2|`: the number of insertions, deletions and
/// substitutions needed to turn one multiset into the other.
pub fn multiset_edit_distance(s1: &Multiset, s2: &Multiset) -> usize {
    s1.len().max(s2.len()) - s1.intersection_size(s2)
}

/// Two label multisets over a dense label range, kept as a surplus table
/// (`right - left` per label) with a running intersection size. Each
/// add/remove costs O(1).
#[derive(Debug, Clone, Default)]
pub struct LabelBalance {
    surplus: Vec<i32>,
    left: usize,
    right: usize,
    common: usize,
}

impl LabelBalance {
    pub fn new(labels: usize) -> Self {
        LabelBalance {
            surplus: vec![0; labels],
            ..Self::default()
        }
    }

    #[inline]
    pub fn add_left(&mut self, label: Label) {
        let s = &mut self.surplus[label.index()];
        if *s > 0 {
            self.common += 1;
        }
        *s -= 1;
        self.left += 1;
    }

    #[inline]
    pub fn add_right(&mut self, label: Label) {
        let s = &mut self.surplus[label.index()];
        if *s < 0 {
            self.common += 1;
        }
        *s += 1;
        self.right += 1;
    }

    #[inline]
    pub fn remove_left(&mut self, label: Label) {
        let s = &mut self.surplus[label.index()];
        *s += 1;
        if *s > 0 {
            self.common -= 1;
        }
        self.left -= 1;
    }

    #[inline]
    pub fn remove_right(&mut self, label: Label) {
        let s = &mut self.surplus[label.index()];
        *s -= 1;
        if *s < 0 {
            self.common -= 1;
        }
        self.right -= 1;
    }

    #[inline]
    pub fn upsilon(&self) -> usize {
        self.left.max(self.right) - self.common
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn common(&self) -> usize {
        self.common
    }
}
