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

//! One search run as reported on the command line.

use std::io::Write;

use anyhow::Result;
use ged_core::search::{Mode, SearchConfig, SearchResult};
use ged_core::{Graph, Status};
use serde::Serialize;

/// Comment line that opens every CSV output. Bump the version whenever the
/// column list changes.
pub const CSV_VERSION_LINE: &str = "# ged-records v1";

pub const CSV_COLUMNS: [&str; 17] = [
    "kind",
    "pair",
    "strategy",
    "bound",
    "expand_all",
    "tau",
    "distance",
    "verified",
    "lower_bound",
    "upper_bound",
    "extensions",
    "pushed",
    "popped",
    "peak_live_nodes",
    "elapsed_ms",
    "status",
    "count",
];

/// Exact distance, or the proven interval when the search stopped early.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Distance {
    Exact(u64),
    Interval { lower: u64, upper: Option<u64> },
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distance::Exact(d) => write!(f, "{d}"),
            Distance::Interval { lower, upper: Some(u) } => write!(f, "[{lower},{u}]"),
            Distance::Interval { lower, upper: None } => write!(f, "[{lower},inf]"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub pair: String,
    pub strategy: String,
    pub bound: String,
    pub expand_all: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<u64>,
    /// Absent for a finished verification, which reports `verified` instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<Distance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    pub lower_bound: u64,
    pub upper_bound: Option<u64>,
    pub extensions: u64,
    pub pushed: u64,
    pub popped: u64,
    pub peak_live_nodes: u64,
    pub elapsed_ms: f64,
    pub status: Status,
    /// Vertex pairs `[first, second]` by file vertex id; `null` marks an
    /// inserted vertex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mapping: Option<Vec<(Option<i64>, Option<i64>)>>,
}

impl Record {
    pub fn new(pair: String, cfg: &SearchConfig, r: &SearchResult, g1: &Graph, g2: &Graph, with_mapping: bool) -> Self {
        let tau = match cfg.mode {
            Mode::Verify { tau } => Some(tau),
            Mode::Compute => None,
        };
        let distance = match (r.status, tau) {
            (Status::Ok, Some(_)) => None,
            (Status::Ok, None) => r.distance.map(Distance::Exact),
            _ => Some(Distance::Interval {
                lower: r.lower_bound,
                upper: r.upper_bound,
            }),
        };
        let mapping = if with_mapping && tau.is_none() {
            r.vertex_pairs().map(|pairs| {
                pairs
                    .into_iter()
                    .map(|(a, b)| (a.map(|v| g1.original_id(v)), b.map(|u| g2.original_id(u))))
                    .collect()
            })
        } else {
            None
        };
        Record {
            pair,
            strategy: cfg.strategy.to_string(),
            bound: cfg.bound.to_string(),
            expand_all: cfg.expand_all,
            tau,
            distance,
            verified: r.verified,
            lower_bound: r.lower_bound,
            upper_bound: r.upper_bound,
            extensions: r.stats.extensions,
            pushed: r.stats.pushed,
            popped: r.stats.popped,
            peak_live_nodes: r.stats.peak_live_nodes,
            elapsed_ms: r.stats.elapsed.as_micros() as f64 / 1000.0,
            status: r.status,
            mapping,
        }
    }

    pub fn csv_row(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        vec![
            "record".to_string(),
            self.pair.clone(),
            self.strategy.clone(),
            self.bound.clone(),
            self.expand_all.to_string(),
            opt(self.tau.map(|t| t.to_string())),
            opt(self.distance.map(|d| d.to_string())),
            opt(self.verified.map(|v| v.to_string())),
            self.lower_bound.to_string(),
            opt(self.upper_bound.map(|u| u.to_string())),
            self.extensions.to_string(),
            self.pushed.to_string(),
            self.popped.to_string(),
            self.peak_live_nodes.to_string(),
            format!("{:.3}", self.elapsed_ms),
            self.status.to_string(),
            "1".to_string(),
        ]
    }

    pub fn write_text<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "pair:            {}", self.pair)?;
        writeln!(out, "configuration:   {}-{}{}", self.strategy, self.bound, if self.expand_all { " expand-all" } else { "" })?;
        writeln!(out, "status:          {}", self.status)?;
        if let Some(tau) = self.tau {
            writeln!(out, "threshold:       {tau}")?;
        }
        if let Some(v) = self.verified {
            writeln!(out, "verified:        {v}")?;
        }
        if let Some(d) = self.distance {
            writeln!(out, "distance:        {d}")?;
        }
        writeln!(out, "extensions:      {}", self.extensions)?;
        writeln!(out, "pushed/popped:   {}/{}", self.pushed, self.popped)?;
        writeln!(out, "peak live nodes: {}", self.peak_live_nodes)?;
        writeln!(out, "elapsed:         {:.3} ms", self.elapsed_ms)?;
        if let Some(mapping) = &self.mapping {
            let show = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
            let pairs: Vec<String> = mapping.iter().map(|&(a, b)| format!("{}>{}", show(a), show(b))).collect();
            writeln!(out, "mapping:         {}", pairs.join(" "))?;
        }
        Ok(())
    }
}

pub fn csv_writer<W: Write>(mut out: W) -> Result<csv::Writer<W>> {
    writeln!(out, "{CSV_VERSION_LINE}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    Ok(w)
}
