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

mod bench;
mod input;
mod record;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ged_core::datagen::{gen_random_graph, perturb, GenSpec, PerturbSpec};
use ged_core::oracle::{brute_force_ged_with_mapping, OracleLimit, TooLarge};
use ged_core::search::{ged_compute, ged_verify, Mode, SearchConfig, Strategy};
use ged_core::{pad_pair, write_graphs, BoundKind, Graph, LabelSpace, OrderPolicy, Status};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use record::{csv_writer, Record};

/// Exit codes.
const EXIT_OK: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;
const EXIT_MEMORY: u8 = 4;
const EXIT_ORACLE_REFUSED: u8 = 5;

#[derive(Parser)]
#[command(name = "ged", version, about = "Exact graph edit distance computation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the edit distance of a pair of graphs.
    Compute {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether the edit distance of a pair is at most a threshold.
    Verify {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        tau: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a matrix of configurations over a manifest of pairs.
    Bench(BenchArgs),
    /// Generate random graphs, optionally with perturbed copies.
    Gen(GenArgs),
    /// Edit distance by exhaustive enumeration (small graphs only).
    Oracle {
        #[command(flatten)]
        pair: PairArgs,
        /// Largest vertex count, after padding, the enumeration accepts.
        #[arg(long, default_value_t = OracleLimit::default().max_vertices)]
        max_vertices: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct PairArgs {
    /// One file holding both graphs, or two files.
    #[arg(required = true, num_args = 1..=2)]
    inputs: Vec<PathBuf>,
    /// Graph indices within the file(s) [default: 0 1 for one file, 0 0 for two].
    #[arg(long, num_args = 2, value_names = ["FIRST", "SECOND"])]
    pair: Option<Vec<usize>>,
}

#[derive(Args, Clone)]
struct LimitArgs {
    /// Wall-clock limit per search, in seconds.
    #[arg(long, default_value_t = 3600.0)]
    time_limit: f64,
    /// Memory limit per search, in bytes with an optional K, M or G suffix.
    #[arg(long, default_value = "16G", value_parser = parse_size)]
    memory_limit: u64,
    #[arg(long, value_enum, default_value_t = OrderArg::Frequency)]
    order: OrderArg,
    /// Price all children at once and keep them for the siblings.
    #[arg(long)]
    expand_all: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value = "astar")]
    strategy: Strategy,
    #[arg(long, default_value = "BMa")]
    bound: BoundKind,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// CSV manifest with columns id,first,first_index,second,second_index,tau.
    manifest: PathBuf,
    /// Comma-separated search strategies.
    #[arg(long, value_delimiter = ',', default_value = "astar,dfs")]
    strategies: Vec<Strategy>,
    /// Comma-separated bound kinds.
    #[arg(long, value_delimiter = ',', default_value = "LS,LSa,BM,BMa,BMaN,SM,SMa")]
    bounds: Vec<BoundKind>,
    #[command(flatten)]
    limits: LimitArgs,
    /// Number of searches run at once.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct GenArgs {
    /// Vertices per generated graph.
    #[arg(long)]
    n: usize,
    /// Number of base graphs.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.20)]
    density: f64,
    #[arg(long, default_value_t = 5)]
    vertex_labels: usize,
    #[arg(long, default_value_t = 2)]
    edge_labels: usize,
    /// Follow every base graph with copies perturbed by this many edits.
    #[arg(long)]
    perturb: Option<usize>,
    /// Perturbed copies per base graph.
    #[arg(long, default_value_t = 10)]
    copies: usize,
    /// Write the graphs here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write a bench manifest pairing each base graph with its copies.
    #[arg(long, requires_all = ["output", "perturb"])]
    manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Frequency,
    Identity,
}

fn parse_size(s: &str) -> Result<u64, String> {
    let t = s.trim().trim_end_matches(['B', 'b']).trim_end_matches('i');
    let (digits, scale) = match t.char_indices().last() {
        Some((i, 'K' | 'k')) => (&t[..i], 1u64 << 10),
        Some((i, 'M' | 'm')) => (&t[..i], 1 << 20),
        Some((i, 'G' | 'g')) => (&t[..i], 1 << 30),
        Some((i, 'T' | 't')) => (&t[..i], 1 << 40),
        _ => (t, 1),
    };
    let value: u64 = digits.trim().parse().map_err(|_| format!("invalid size `{s}`"))?;
    value.checked_mul(scale).ok_or_else(|| format!("size `{s}` is too large"))
}

impl LimitArgs {
    fn config(&self, strategy: Strategy, bound: BoundKind) -> Result<SearchConfig> {
        if !(self.time_limit.is_finite() && self.time_limit >= 0.0) {
            bail!("time limit must be a non-negative number of seconds");
        }
        Ok(SearchConfig {
            strategy,
            bound,
            expand_all: self.expand_all,
            mode: Mode::Compute,
            order: match self.order {
                OrderArg::Frequency => OrderPolicy::Frequency,
                OrderArg::Identity => OrderPolicy::Identity,
            },
            time_limit: Duration::from_secs_f64(self.time_limit),
            memory_limit: self.memory_limit,
            trace: false,
        })
    }
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Ok => EXIT_OK,
        Status::Timeout => EXIT_TIMEOUT,
        Status::OutOfMemory => EXIT_MEMORY,
    }
}

fn pair_label(pair: &PairArgs) -> String {
    let names: Vec<String> = pair.inputs.iter().map(|p| p.display().to_string()).collect();
    match &pair.pair {
        Some(ix) => format!("{}[{},{}]", names.join(","), ix[0], ix[1]),
        None => names.join(","),
    }
}

fn emit_record(record: &Record, format: Format) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, record)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv_writer(&mut out)?;
            w.write_record(record.csv_row())?;
            w.flush()?;
        }
        Format::Text => record.write_text(&mut out)?,
    }
    Ok(())
}

fn cmd_search(pair: &PairArgs, search: &SearchArgs, tau: Option<u64>, format: Format) -> Result<u8> {
    let (g1, g2) = input::load_pair(&pair.inputs, pair.pair.as_deref())?;
    let mut cfg = search.limits.config(search.strategy, search.bound)?;
    let result = match tau {
        Some(tau) => {
            cfg.mode = Mode::Verify { tau };
            ged_verify(&g1, &g2, tau, &cfg)
        }
        None => ged_compute(&g1, &g2, &cfg),
    };
    emit_record(&Record::new(pair_label(pair), &cfg, &result, &g1, &g2, true), format)?;
    Ok(match (result.status, result.verified) {
        (Status::Ok, Some(false)) => EXIT_FALSE,
        (status, _) => status_code(status),
    })
}

fn cmd_bench(args: &BenchArgs) -> Result<u8> {
    let pairs = bench::read_manifest(&args.manifest)?;
    let mut configs = Vec::new();
    for &strategy in &args.strategies {
        for &bound in &args.bounds {
            configs.push(args.limits.config(strategy, bound)?);
        }
    }
    let records = bench::run(&pairs, &configs, args.jobs)?;
    let aggregates = bench::aggregate(&records, &configs);
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match args.format {
        Format::Json => bench::write_json(&mut out, &records, &aggregates)?,
        Format::Csv => bench::write_csv(&mut out, &records, &aggregates)?,
        Format::Text => bench::write_text(&mut out, &records, &aggregates)?,
    }
    out.flush()?;
    let worst = records.iter().map(|r| status_code(r.status)).max().unwrap_or(EXIT_OK);
    Ok(worst)
}

fn manifest_path_for(graphs: &Path, manifest: &Path) -> Result<PathBuf> {
    let same_dir = graphs.parent().map(|p| p.canonicalize().ok()) == manifest.parent().map(|p| p.canonicalize().ok());
    if same_dir {
        Ok(PathBuf::from(graphs.file_name().context("graph output has no file name")?))
    } else {
        Ok(graphs.canonicalize()?)
    }
}

fn cmd_gen(args: &GenArgs) -> Result<u8> {
    if args.n == 0 {
        bail!("--n must be at least 1");
    }
    if !(args.density > 0.0 && args.density <= 1.0) {
        bail!("--density must be in (0, 1]");
    }
    if args.vertex_labels == 0 || args.edge_labels == 0 {
        bail!("label alphabets must not be empty");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut space = LabelSpace::default();
    let mut graphs: Vec<Graph> = Vec::new();
    let mut pairs = Vec::new();
    for b in 0..args.count {
        let spec = GenSpec {
            n: args.n,
            edge_density: args.density,
            vertex_labels: args.vertex_labels,
            edge_labels: args.edge_labels,
            seed: rng.next_u64(),
        };
        let mut base = gen_random_graph(&spec, &mut space);
        let base_index = graphs.len();
        base.set_id(base_index as i64);
        graphs.push(base.clone());
        if let Some(x) = args.perturb {
            for c in 0..args.copies {
                let p = PerturbSpec {
                    x,
                    seed: rng.next_u64(),
                    vertex_labels: args.vertex_labels,
                    edge_labels: args.edge_labels,
                };
                let mut copy = perturb(&base, &p, &mut space);
                copy.set_id(graphs.len() as i64);
                pairs.push((format!("g{b}-p{c}"), base_index, graphs.len()));
                graphs.push(copy);
            }
        }
    }
    match &args.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?);
            write_graphs(&mut out, &graphs, &space)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            write_graphs(&mut out, &graphs, &space)?;
            out.flush()?;
        }
    }
    if let (Some(manifest), Some(output)) = (&args.manifest, &args.output) {
        let graphs_ref = manifest_path_for(output, manifest)?;
        let mut w = csv::Writer::from_path(manifest).with_context(|| format!("cannot create {}", manifest.display()))?;
        w.write_record(bench::MANIFEST_HEADER)?;
        for (id, i, j) in pairs {
            let file = graphs_ref.display().to_string();
            w.write_record([id, file.clone(), i.to_string(), file, j.to_string(), String::new()])?;
        }
        w.flush()?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct OracleReport {
    pair: String,
    distance: u64,
    mapping: Vec<(Option<i64>, Option<i64>)>,
}

fn cmd_oracle(pair: &PairArgs, max_vertices: usize, format: Format) -> Result<u8> {
    let (g1, g2) = input::load_pair(&pair.inputs, pair.pair.as_deref())?;
    let (distance, f) = brute_force_ged_with_mapping(&g1, &g2, OracleLimit { max_vertices })?;
    let padded = pad_pair(&g1, &g2);
    let mapping: Vec<(Option<i64>, Option<i64>)> = (0..f.len())
        .map(|v| {
            let q_side = (v < padded.q_real).then_some(v);
            let g_side = Some(f.image(v));
            let (a, b) = if padded.swapped { (g_side, q_side) } else { (q_side, g_side) };
            (a.map(|a| g1.original_id(a)), b.map(|b| g2.original_id(b)))
        })
        .collect();
    let report = OracleReport {
        pair: pair_label(pair),
        distance,
        mapping,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "pair,distance")?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record([report.pair.clone(), report.distance.to_string()])?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "distance: {}", report.distance)?;
            let show = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
            let pairs: Vec<String> = report.mapping.iter().map(|&(a, b)| format!("{}>{}", show(a), show(b))).collect();
            writeln!(out, "mapping:  {}", pairs.join(" "))?;
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Compute { pair, search, format } => cmd_search(pair, search, None, *format),
        Command::Verify {
            pair,
            search,
            tau,
            format,
        } => cmd_search(pair, search, Some(*tau), *format),
        Command::Bench(args) => cmd_bench(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Oracle {
            pair,
            max_vertices,
            format,
        } => cmd_oracle(pair, *max_vertices, *format),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<TooLarge>().is_some() {
                ExitCode::from(EXIT_ORACLE_REFUSED)
            } else {
                ExitCode::from(EXIT_USAGE)
            }
        }
    }
}
