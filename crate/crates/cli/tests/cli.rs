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

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ged(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ged"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

const TRIANGLE_AND_PATH: &str = "t # 0\nv 0 A\nv 1 A\nv 2 B\ne 0 1 a\ne 1 2 a\ne 0 2 b\nt # 1\nv 0 A\nv 1 A\nv 2 B\ne 0 1 a\ne 1 2 a\n";

fn write(dir: &TempDir, name: &str, text: &str) {
    fs::write(dir.path().join(name), text).unwrap();
}

/// Generates two base graphs with `copies` perturbed copies each, plus the
/// matching manifest.
fn generated(dir: &TempDir, n: usize, x: usize, copies: usize, seed: u64) {
    let out = ged(
        dir.path(),
        &[
            "gen", "--n", &n.to_string(), "--count", "2", "--seed", &seed.to_string(), "--perturb", &x.to_string(),
            "--copies", &copies.to_string(), "--output", "graphs.txt", "--manifest", "pairs.csv",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn compute_identical_graphs() {
    let dir = TempDir::new().unwrap();
    write(&dir, "g.txt", TRIANGLE_AND_PATH);
    let out = ged(dir.path(), &["compute", "g.txt", "--pair", "0", "0", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["distance"], 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["mapping"].as_array().unwrap().len(), 3);
}

#[test]
fn compute_across_two_files_shares_labels() {
    let dir = TempDir::new().unwrap();
    write(&dir, "a.txt", "t # 0\nv 0 X\nv 1 Y\ne 0 1 q\n");
    write(&dir, "b.txt", "t # 7\nv 5 Y\nv 9 X\ne 5 9 q\n");
    let out = ged(dir.path(), &["compute", "a.txt", "b.txt", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["distance"], 0);
    let mapping = v["mapping"].as_array().unwrap();
    assert!(mapping.contains(&serde_json::json!([0, 9])));
    assert!(mapping.contains(&serde_json::json!([1, 5])));
}

#[test]
fn strategies_agree() {
    let dir = TempDir::new().unwrap();
    generated(&dir, 9, 3, 3, 5);
    for pair in [["0", "1"], ["0", "3"], ["4", "6"]] {
        let mut seen = Vec::new();
        for strategy in ["astar", "dfs"] {
            for bound in ["LS", "BMa", "SMa"] {
                let out = ged(
                    dir.path(),
                    &["compute", "graphs.txt", "--pair", pair[0], pair[1], "--strategy", strategy, "--bound", bound, "--format", "json"],
                );
                assert_eq!(code(&out), 0);
                seen.push(json(&out)["distance"].as_u64().unwrap());
            }
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]), "{seen:?}");
    }
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    write(&dir, "bad.txt", "t # 0\nv 0 A\ne 0 5 a\n");
    let out = ged(dir.path(), &["compute", "bad.txt", "--pair", "0", "0"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("edge references unknown vertex"), "{err}");
    assert_eq!(code(&ged(dir.path(), &["compute", "missing.txt"])), 2);
    assert_eq!(code(&ged(dir.path(), &["compute", "bad.txt", "--strategy", "bfs"])), 2);
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    write(&dir, "g.txt", TRIANGLE_AND_PATH);
    assert_eq!(code(&ged(dir.path(), &["verify", "g.txt", "--pair", "1", "1", "--tau", "0"])), 0);
    let oracle = json(&ged(dir.path(), &["oracle", "g.txt", "--format", "json"]));
    let d = oracle["distance"].as_u64().unwrap();
    assert_eq!(d, 1);
    let below = ged(dir.path(), &["verify", "g.txt", "--tau", &(d - 1).to_string(), "--format", "json"]);
    assert_eq!(code(&below), 1);
    assert_eq!(json(&below)["verified"], false);
    // Deleting and reinserting everything: 3 + 3 vertices, 3 + 2 edges.
    assert_eq!(code(&ged(dir.path(), &["verify", "g.txt", "--tau", "11"])), 0);
}

#[test]
fn oracle_matches_compute_and_refuses_large_pairs() {
    let dir = TempDir::new().unwrap();
    generated(&dir, 6, 2, 2, 9);
    for pair in [["0", "1"], ["0", "2"], ["3", "5"]] {
        let a = json(&ged(dir.path(), &["oracle", "graphs.txt", "--pair", pair[0], pair[1], "--format", "json"]));
        let b = json(&ged(dir.path(), &["compute", "graphs.txt", "--pair", pair[0], pair[1], "--format", "json"]));
        assert_eq!(a["distance"], b["distance"]);
    }
    let out = ged(dir.path(), &["oracle", "graphs.txt", "--max-vertices", "4"]);
    assert_eq!(code(&out), 5);
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = ["gen", "--n", "12", "--count", "3", "--seed", "17", "--perturb", "2", "--copies", "2"];
    let a = ged(dir.path(), &args);
    let b = ged(dir.path(), &args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.matches("t # ").count(), 9);
    // round(0.2 * 66) edges in each base graph.
    let first: Vec<&str> = text.split("t # 1").next().unwrap().lines().filter(|l| l.starts_with("e ")).collect();
    assert_eq!(first.len(), 13);
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# ged-records v1"));
    let body = lines.collect::<Vec<_>>().join("\n");
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn bench_records_and_aggregates() {
    let dir = TempDir::new().unwrap();
    generated(&dir, 10, 3, 1, 21);
    let args = ["bench", "pairs.csv", "--strategies", "astar,dfs", "--bounds", "BMa"];
    let out = ged(dir.path(), &args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let records: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == "record").collect();
    let aggregates: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == "aggregate").collect();
    assert_eq!(records.len(), 4);
    assert_eq!(aggregates.len(), 2);
    assert_eq!(records.iter().map(|r| r[1].as_str()).collect::<Vec<_>>(), ["g0-p0", "g0-p0", "g1-p0", "g1-p0"]);
    for agg in aggregates {
        let group: Vec<&&Vec<String>> = records.iter().filter(|r| r[2] == agg[2]).collect();
        let mean = |col: usize| group.iter().map(|r| r[col].parse::<f64>().unwrap()).sum::<f64>() / group.len() as f64;
        assert!((agg[10].parse::<f64>().unwrap() - mean(10)).abs() < 1e-3);
        assert!((agg[14].parse::<f64>().unwrap() - mean(14)).abs() < 1e-2);
        assert_eq!(agg[16], "2");
    }

    let json_out = json(&ged(dir.path(), &["bench", "pairs.csv", "--bounds", "LS,BMa", "--format", "json", "--jobs", "4"]));
    let parallel: Vec<(String, String, String, u64)> = json_out["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["pair"].as_str().unwrap().to_string(),
                r["strategy"].as_str().unwrap().to_string(),
                r["bound"].as_str().unwrap().to_string(),
                r["extensions"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(parallel.len(), 8);
    assert_eq!(parallel[0].0, "g0-p0");
    assert_eq!(parallel[7].0, "g1-p0");
    let serial = json(&ged(dir.path(), &["bench", "pairs.csv", "--bounds", "LS,BMa", "--format", "json", "--jobs", "1"]));
    let serial_ext: Vec<u64> = serial["records"].as_array().unwrap().iter().map(|r| r["extensions"].as_u64().unwrap()).collect();
    assert_eq!(parallel.iter().map(|p| p.3).collect::<Vec<_>>(), serial_ext);
    assert_eq!(json_out["aggregates"].as_array().unwrap().len(), 4);
}

#[test]
fn bench_verification_rows() {
    let dir = TempDir::new().unwrap();
    write(&dir, "g.txt", TRIANGLE_AND_PATH);
    write(&dir, "m.csv", "id,first,first_index,second,second_index,tau\nlow,g.txt,0,g.txt,1,0\nhigh,g.txt,0,g.txt,1,1\n");
    let out = ged(dir.path(), &["bench", "m.csv", "--strategies", "dfs", "--bounds", "LSa", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let verdicts: Vec<bool> = v["records"].as_array().unwrap().iter().map(|r| r["verified"].as_bool().unwrap()).collect();
    assert_eq!(verdicts, [false, true]);
}

#[test]
fn bench_rejects_bad_manifest() {
    let dir = TempDir::new().unwrap();
    write(&dir, "m.csv", "id,first\nx,g.txt\n");
    assert_eq!(code(&ged(dir.path(), &["bench", "m.csv"])), 2);
}

#[test]
fn limits_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    generated(&dir, 16, 6, 1, 3);
    let timed = ged(dir.path(), &["compute", "graphs.txt", "--bound", "LS", "--strategy", "dfs", "--time-limit", "0", "--format", "json"]);
    assert_eq!(code(&timed), 3);
    let v = json(&timed);
    assert_eq!(v["status"], "timeout");
    let lower = v["distance"]["lower"].as_u64().unwrap();
    let exact = json(&ged(dir.path(), &["compute", "graphs.txt", "--format", "json"]))["distance"].as_u64().unwrap();
    assert!(lower <= exact);
    let starved = ged(dir.path(), &["compute", "graphs.txt", "--bound", "LS", "--memory-limit", "1K"]);
    assert_eq!(code(&starved), 4);
}
