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

//! Reference-counted storage for search-tree nodes.

use std::rc::Rc;

use crate::bounds::BoundValue;

pub(crate) const NIL: u32 = u32::MAX;

/// Remaining children of one parent, best first, shared by the siblings
/// generated from it.
pub(crate) type SiblingList = Rc<[(u32, BoundValue)]>;

/// One partial mapping. Only the image of the last mapped vertex is stored;
/// the rest is recovered through `parent`.
#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub parent: u32,
    /// The sibling this one was generated from.
    pub prev: u32,
    pub image: u32,
    pub level: u32,
    pub bound: BoundValue,
    pub siblings: Option<SiblingList>,
    /// Index into `siblings` of the next sibling to generate.
    pub cursor: u32,
    refs: u32,
}

impl Node {
    pub fn new(parent: u32, prev: u32, image: u32, level: u32, bound: BoundValue) -> Self {
        Node {
            parent,
            prev,
            image,
            level,
            bound,
            siblings: None,
            cursor: 0,
            refs: 0,
        }
    }
}

/// A node stays alive while it is queued or referenced as a parent or
/// predecessor sibling.
#[derive(Debug, Default)]
pub(crate) struct Arena {
    nodes: Vec<Node>,
    free: Vec<u32>,
    live: usize,
    peak: usize,
    sibling_entries: usize,
}

impl Arena {
    /// Stores `node` with one reference held by the caller, and takes a
    /// reference on its parent and predecessor.
    pub fn alloc(&mut self, mut node: Node) -> u32 {
        node.refs = 1;
        for link in [node.parent, node.prev] {
            if link != NIL {
                self.nodes[link as usize].refs += 1;
            }
        }
        if let Some(list) = &node.siblings {
            if Rc::strong_count(list) == 1 {
                self.sibling_entries += list.len();
            }
        }
        self.live += 1;
        self.peak = self.peak.max(self.live);
        match self.free.pop() {
            Some(id) => {
                self.nodes[id as usize] = node;
                id
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        }
    }

    pub fn release(&mut self, id: u32) {
        let mut stack = vec![id];
        while let Some(id) = stack.pop() {
            let node = &mut self.nodes[id as usize];
            node.refs -= 1;
            if node.refs > 0 {
                continue;
            }
            if let Some(list) = node.siblings.take() {
                if Rc::strong_count(&list) == 1 {
                    self.sibling_entries -= list.len();
                }
            }
            for link in [node.parent, node.prev] {
                if link != NIL {
                    stack.push(link);
                }
            }
            self.free.push(id);
            self.live -= 1;
        }
    }

    #[inline]
    pub fn get(&self, id: u32) -> &Node {
        &self.nodes[id as usize]
    }

    /// Images of the mapped prefix of `id`, from the first level down.
    pub fn path(&self, id: u32, out: &mut Vec<usize>) {
        out.clear();
        let mut cur = id;
        while cur != NIL {
            let node = &self.nodes[cur as usize];
            if node.level == 0 {
                break;
            }
            out.push(node.image as usize);
            cur = node.parent;
        }
        out.reverse();
    }

    #[cfg(test)]
    pub fn live(&self) -> usize {
        self.live
    }

    pub fn peak(&self) -> usize {
        self.peak
    }

    /// Rough heap footprint of the stored nodes and sibling lists.
    pub fn bytes(&self) -> usize {
        self.live * std::mem::size_of::<Node>()
            + self.sibling_entries * std::mem::size_of::<(u32, BoundValue)>()
    }
}
