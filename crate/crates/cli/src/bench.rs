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

//! Batch runs over a manifest of pairs and a matrix of configurations.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ged_core::search::{ged_compute, ged_verify, Mode, SearchConfig};
use ged_core::{Graph, Status};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::input::GraphStore;
use crate::record::{csv_writer, Record};

/// One line of a pair manifest. Paths are relative to the manifest file.
#[derive(Debug, Clone, Deserialize)]
pub struct ManifestRow {
    pub id: String,
    pub first: PathBuf,
    pub first_index: usize,
    pub second: PathBuf,
    pub second_index: usize,
    /// Threshold for a verification query; empty for a distance query.
    #[serde(default, deserialize_with = "csv::invalid_option")]
    pub tau: Option<u64>,
}

pub const MANIFEST_HEADER: [&str; 6] = ["id", "first", "first_index", "second", "second_index", "tau"];

pub struct Pair {
    pub id: String,
    pub first: Graph,
    pub second: Graph,
    pub tau: Option<u64>,
}

pub fn read_manifest(path: &Path) -> Result<Vec<Pair>> {
    let base = path.parent().unwrap_or(Path::new(""));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read manifest {}", path.display()))?;
    let mut store = GraphStore::default();
    let mut pairs = Vec::new();
    for (line, row) in reader.deserialize::<ManifestRow>().enumerate() {
        let row = row.with_context(|| format!("manifest {} entry {}", path.display(), line + 1))?;
        pairs.push(Pair {
            first: store.graph(&base.join(&row.first), row.first_index)?,
            second: store.graph(&base.join(&row.second), row.second_index)?,
            id: row.id,
            tau: row.tau,
        });
    }
    Ok(pairs)
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    pub strategy: String,
    pub bound: String,
    pub expand_all: bool,
    pub count: usize,
    /// Runs that hit the time or memory limit; their time counts as the
    /// time limit.
    pub incomplete: usize,
    pub mean_elapsed_ms: f64,
    pub mean_extensions: f64,
    pub mean_pushed: f64,
    pub mean_popped: f64,
    pub mean_peak_live_nodes: f64,
}

impl Aggregate {
    fn csv_row(&self) -> Vec<String> {
        let mut row = vec![String::new(); crate::record::CSV_COLUMNS.len()];
        row[0] = "aggregate".into();
        row[1] = "*".into();
        row[2] = self.strategy.clone();
        row[3] = self.bound.clone();
        row[4] = self.expand_all.to_string();
        row[10] = format!("{:.3}", self.mean_extensions);
        row[11] = format!("{:.3}", self.mean_pushed);
        row[12] = format!("{:.3}", self.mean_popped);
        row[13] = format!("{:.3}", self.mean_peak_live_nodes);
        row[14] = format!("{:.3}", self.mean_elapsed_ms);
        row[15] = if self.incomplete == 0 { "ok".into() } else { format!("incomplete:{}", self.incomplete) };
        row[16] = self.count.to_string();
        row
    }
}

/// Runs every configuration on every pair. Records come back pair-major
/// in manifest order whatever the number of jobs.
pub fn run(pairs: &[Pair], configs: &[SearchConfig], jobs: usize) -> Result<Vec<Record>> {
    let work: Vec<(&Pair, &SearchConfig)> = pairs.iter().flat_map(|p| configs.iter().map(move |c| (p, c))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    Ok(pool.install(|| {
        work.par_iter()
            .map(|&(p, cfg)| {
                let cfg = SearchConfig {
                    mode: p.tau.map_or(Mode::Compute, |tau| Mode::Verify { tau }),
                    ..cfg.clone()
                };
                let r = match p.tau {
                    Some(tau) => ged_verify(&p.first, &p.second, tau, &cfg),
                    None => ged_compute(&p.first, &p.second, &cfg),
                };
                Record::new(p.id.clone(), &cfg, &r, &p.first, &p.second, false)
            })
            .collect()
    }))
}

/// Per-configuration means, in configuration order.
pub fn aggregate(records: &[Record], configs: &[SearchConfig]) -> Vec<Aggregate> {
    configs
        .iter()
        .map(|cfg| {
            let group: Vec<&Record> = records
                .iter()
                .filter(|r| {
                    r.strategy == cfg.strategy.to_string()
                        && r.bound == cfg.bound.to_string()
                        && r.expand_all == cfg.expand_all
                })
                .collect();
            let cap_ms = cfg.time_limit.as_secs_f64() * 1000.0;
            let mean = |f: &dyn Fn(&Record) -> f64| {
                if group.is_empty() {
                    0.0
                } else {
                    group.iter().map(|r| f(r)).sum::<f64>() / group.len() as f64
                }
            };
            Aggregate {
                strategy: cfg.strategy.to_string(),
                bound: cfg.bound.to_string(),
                expand_all: cfg.expand_all,
                count: group.len(),
                incomplete: group.iter().filter(|r| r.status != Status::Ok).count(),
                mean_elapsed_ms: mean(&|r| if r.status == Status::Ok { r.elapsed_ms } else { cap_ms }),
                mean_extensions: mean(&|r| r.extensions as f64),
                mean_pushed: mean(&|r| r.pushed as f64),
                mean_popped: mean(&|r| r.popped as f64),
                mean_peak_live_nodes: mean(&|r| r.peak_live_nodes as f64),
            }
        })
        .collect()
}

pub fn write_json<W: Write>(out: &mut W, records: &[Record], aggregates: &[Aggregate]) -> Result<()> {
    #[derive(Serialize)]
    struct Report<'a> {
        records: &'a [Record],
        aggregates: &'a [Aggregate],
    }
    serde_json::to_writer_pretty(&mut *out, &Report { records, aggregates })?;
    writeln!(out)?;
    Ok(())
}

pub fn write_csv<W: Write>(out: W, records: &[Record], aggregates: &[Aggregate]) -> Result<()> {
    let mut w = csv_writer(out)?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    for a in aggregates {
        w.write_record(a.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_text<W: Write>(out: &mut W, records: &[Record], aggregates: &[Aggregate]) -> Result<()> {
    writeln!(
        out,
        "{:<12} {:<6} {:<5} {:>14} {:>12} {:>12} {:<10}",
        "pair", "search", "bound", "result", "extensions", "elapsed_ms", "status"
    )?;
    for r in records {
        let result = match (r.distance, r.verified) {
            (Some(d), _) => d.to_string(),
            (None, Some(v)) => v.to_string(),
            (None, None) => String::new(),
        };
        let bound = if r.expand_all { format!("{}*", r.bound) } else { r.bound.clone() };
        writeln!(
            out,
            "{:<12} {:<6} {:<5} {:>14} {:>12} {:>12.3} {:<10}",
            r.pair, r.strategy, bound, result, r.extensions, r.elapsed_ms, r.status
        )?;
    }
    writeln!(out)?;
    writeln!(
        out,
        "{:<6} {:<5} {:>6} {:>10} {:>16} {:>16}",
        "search", "bound", "runs", "incomplete", "mean extensions", "mean elapsed_ms"
    )?;
    for a in aggregates {
        let bound = if a.expand_all { format!("{}*", a.bound) } else { a.bound.clone() };
        writeln!(
            out,
            "{:<6} {:<5} {:>6} {:>10} {:>16.1} {:>16.3}",
            a.strategy, bound, a.count, a.incomplete, a.mean_extensions, a.mean_elapsed_ms
        )?;
    }
    Ok(())
}
