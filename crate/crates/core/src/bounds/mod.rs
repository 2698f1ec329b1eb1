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

//! Lower bounds on the cost of completing a partial mapping.
//!
//! Every bound has the shape `anchored cost + remainder estimate`. The
//! label-set bounds price a child by anchoring the new vertex; the
//! assignment bounds (except `BMaN`) leave it free and pin its row in the
//! cost matrix instead, which lets a single solve price all siblings.

mod branch;
pub mod reference;
mod state;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use branch::{
    assignment_matrix, heuristic_full_mapping, lambda_cost, mapping_bound, price_children, remainder_bound,
    star_divisor, AssignmentMatrix, Pricing, VertexStructure,
};
pub use state::{Instance, OrderPolicy, PartialMapping, RemainderProfile, UNMAPPED};

/// The lower-bound estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    /// Label multisets of the remainder.
    #[serde(rename = "LS")]
    Ls,
    /// Label multisets with cross edges grouped per anchor.
    #[serde(rename = "LSa")]
    LsAnchored,
    /// Assignment over branch structures.
    #[serde(rename = "BM")]
    Bm,
    /// Assignment over anchor-refined branch structures.
    #[serde(rename = "BMa")]
    BmAnchored,
    /// `BMa` recomputed from scratch for every child.
    #[serde(rename = "BMaN")]
    BmAnchoredNaive,
    /// Assignment over star structures.
    #[serde(rename = "SM")]
    Sm,
    /// Assignment over anchor-refined star structures.
    #[serde(rename = "SMa")]
    SmAnchored,
}

impl BoundKind {
    pub const ALL: [BoundKind; 7] = [
        BoundKind::Ls,
        BoundKind::LsAnchored,
        BoundKind::Bm,
        BoundKind::BmAnchored,
        BoundKind::BmAnchoredNaive,
        BoundKind::Sm,
        BoundKind::SmAnchored,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Ls => "LS",
            BoundKind::LsAnchored => "LSa",
            BoundKind::Bm => "BM",
            BoundKind::BmAnchored => "BMa",
            BoundKind::BmAnchoredNaive => "BMaN",
            BoundKind::Sm => "SM",
            BoundKind::SmAnchored => "SMa",
        }
    }

    /// Whether the bound is computed from a vertex assignment, which also
    /// yields a full mapping usable as an upper bound.
    pub fn uses_assignment(self) -> bool {
        !matches!(self, BoundKind::Ls | BoundKind::LsAnchored)
    }

    pub(crate) fn is_star(self) -> bool {
        matches!(self, BoundKind::Sm | BoundKind::SmAnchored)
    }

    pub(crate) fn is_anchored(self) -> bool {
        matches!(
            self,
            BoundKind::LsAnchored
                | BoundKind::BmAnchored
                | BoundKind::BmAnchoredNaive
                | BoundKind::SmAnchored
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown bound kind `{s}`"))
    }
}

/// An exact non-negative rational lower bound. Denominators are 1, 2 or
/// `2d` for the star bounds.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundValue {
    num: i64,
    den: i64,
}

impl BoundValue {
    pub const ZERO: BoundValue = BoundValue { num: 0, den: 1 };

    pub fn integer(value: i64) -> Self {
        BoundValue { num: value, den: 1 }
    }

    /// `half_units / 2`.
    pub fn halves(half_units: i64) -> Self {
        BoundValue::ratio(half_units, 2)
    }

    /// # Panics
    /// If `den` is not positive.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        BoundValue { num, den }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn denominator(self) -> i64 {
        self.den
    }

    /// Smallest integer not below the value. Editorial costs are integers,
    /// so a bound of 3.5 proves a cost of at least 4.
    pub fn ceil(self) -> i64 {
        self.num.div_euclid(self.den) + i64::from(self.num.rem_euclid(self.den) != 0)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for BoundValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BoundValue {}

impl PartialOrd for BoundValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BoundValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (i128::from(self.num) * i128::from(other.den)).cmp(&(i128::from(other.num) * i128::from(self.den)))
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num % self.den == 0 {
            write!(f, "{}", self.num / self.den)
        } else {
            write!(f, "{}", self.to_f64())
        }
    }
}
