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

//! Exact graph edit distance under unit edit costs, by best-first or
//! depth-first branch and bound over vertex mappings.

pub mod assignment;
pub mod bounds;
pub mod datagen;
pub mod graph;
pub mod multiset;
pub mod oracle;
pub mod order;
pub mod search;

pub use bounds::{BoundKind, BoundValue, OrderPolicy};
pub use graph::{
    editorial_cost, pad_pair, parse_graphs, parse_graphs_with, write_graphs, FullMapping, Graph,
    Label, LabelSpace, ParseError,
};
pub use search::{
    ged_compute, ged_verify, Mode, SearchConfig, SearchResult, SearchStats, Status, Strategy,
};
