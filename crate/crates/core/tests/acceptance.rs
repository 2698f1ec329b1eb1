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

//! Acceptance checks. Runs without the libtest harness so that the one-line
//! verdict of every criterion is always printed; exits non-zero if any fail.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ged_core::assignment::{solve, CostMatrix, INFEASIBLE};
use ged_core::bounds::{
    mapping_bound, price_children, reference, remainder_bound, BoundKind, BoundValue, Instance,
    OrderPolicy, PartialMapping, Pricing,
};
use ged_core::oracle::{brute_force_assignment, brute_force_extension_min, brute_force_ged, OracleLimit};
use ged_core::search::{ged_compute, ged_verify, SearchConfig, Status, Strategy};
use ged_core::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(failures: &[String], summary: String) -> Verdict {
    let mut detail = summary;
    if let Some(first) = failures.first() {
        detail = format!("{detail}; {} failures, first: {first}", failures.len());
    }
    Verdict {
        passed: failures.is_empty(),
        detail,
    }
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut runs = 0;
    for seed in 0..200 {
        let (g1, g2) = common::small_pair(10_000 + seed, 7);
        let expected = brute_force_ged(&g1, &g2, OracleLimit::default()).unwrap();
        for cfg in common::all_configs() {
            runs += 1;
            let r = ged_compute(&g1, &g2, &cfg);
            if r.distance != Some(expected) {
                failures.push(format!(
                    "seed {seed} {}-{}: {:?} != {expected}",
                    cfg.strategy, cfg.bound, r.distance
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        failures.push(format!("took {elapsed:?}"));
    }
    verdict(&failures, format!("{runs} searches in {:.2}s", elapsed.as_secs_f64()))
}

/// Random instances on at most seven vertices with a random mapped prefix.
fn sampled_states(count: u64, salt: u64) -> Vec<(Instance, Vec<usize>)> {
    (0..count)
        .map(|i| {
            let seed = salt + i;
            let (g1, g2) = common::small_pair(seed, 7);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let inst = Instance::new(&g1, &g2, &OrderPolicy::Frequency);
            let n = inst.n();
            let level = if n == 0 { 0 } else { rng.gen_range(0..n) };
            let mut images: Vec<usize> = (0..n).collect();
            images.shuffle(&mut rng);
            images.truncate(level);
            (inst, images)
        })
        .collect()
}

fn fixed_pairs(inst: &Instance, images: &[usize]) -> Vec<(usize, usize)> {
    images.iter().enumerate().map(|(i, &u)| (inst.order()[i], u)).collect()
}

fn admissibility() -> Verdict {
    let mut failures = Vec::new();
    let mut checks = 0;
    for (i, (inst, images)) in sampled_states(1000, 20_000).iter().enumerate() {
        let best = brute_force_extension_min(&inst.q, &inst.g, &fixed_pairs(inst, images), OracleLimit::default())
            .unwrap();
        let pm = PartialMapping::from_images(inst, images);
        for kind in BoundKind::ALL {
            checks += 1;
            let b = mapping_bound(kind, &pm);
            if b > BoundValue::integer(best as i64) {
                failures.push(format!("sample {i} {kind}: {b} > {best}"));
            }
        }
    }
    verdict(&failures, format!("{checks} bound evaluations"))
}

fn dominance() -> Verdict {
    let mut failures = Vec::new();
    let mut conditional = 0;
    for (i, (inst, images)) in sampled_states(1000, 20_000).iter().enumerate() {
        let mut pm = PartialMapping::from_images(inst, images);
        let b = |k| mapping_bound(k, &pm);
        let chain = [
            (BoundKind::BmAnchored, BoundKind::LsAnchored),
            (BoundKind::LsAnchored, BoundKind::Ls),
            (BoundKind::BmAnchored, BoundKind::Bm),
            (BoundKind::SmAnchored, BoundKind::Sm),
        ];
        for (hi, lo) in chain {
            if b(hi) < b(lo) {
                failures.push(format!("sample {i}: {hi} {} < {lo} {}", b(hi), b(lo)));
            }
        }
        let bma = remainder_bound(BoundKind::BmAnchored, &pm);
        if bma >= BoundValue::integer((inst.n() - images.len()) as i64) {
            conditional += 1;
            let sma = remainder_bound(BoundKind::SmAnchored, &pm);
            if bma < sma {
                failures.push(format!("sample {i}: BMa remainder {bma} < SMa remainder {sma}"));
            }
        }
        if pm.is_full() {
            continue;
        }
        let candidates = pm.unused();
        let mut naive = price_children(BoundKind::BmAnchoredNaive, &mut pm, &candidates, Pricing::All);
        let mut pinned = price_children(BoundKind::BmAnchored, &mut pm, &candidates, Pricing::All);
        naive.sort_by_key(|c| c.0);
        pinned.sort_by_key(|c| c.0);
        for (a, b) in naive.iter().zip(&pinned) {
            if a.0 != b.0 || a.1 < b.1 {
                failures.push(format!("sample {i} child {}: BMaN {} < BMa {}", a.0, a.1, b.1));
            }
        }
    }
    verdict(&failures, format!("1000 samples, {conditional} met the star condition"))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> CostMatrix {
    let n = rng.gen_range(1..=7);
    let mut m = CostMatrix::new(n);
    for i in 0..n {
        for j in 0..n {
            let c = if rng.gen_bool(0.1) { INFEASIBLE } else { rng.gen_range(0..30) };
            m.set(i, j, c);
        }
    }
    m
}

fn fast_path() -> Verdict {
    let mut failures = Vec::new();
    let mut children = 0;
    for (i, (inst, images)) in sampled_states(500, 40_000).iter().enumerate() {
        let mut pm = PartialMapping::from_images(inst, images);
        if pm.is_full() {
            continue;
        }
        let candidates = pm.unused();
        for kind in BoundKind::ALL {
            for (u, b) in price_children(kind, &mut pm, &candidates, Pricing::All) {
                children += 1;
                let expected = reference::child_bound(kind, inst, images, u);
                if b != expected {
                    failures.push(format!("state {i} {kind} child {u}: {b} != {expected}"));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for k in 0..500 {
        let m = random_matrix(&mut rng);
        let fast = solve(&m).ok().map(|st| st.total_cost);
        let slow = brute_force_assignment(&m);
        if fast != slow {
            failures.push(format!("matrix {k}: {fast:?} != {slow:?}"));
        }
    }
    verdict(&failures, format!("{children} child bounds, 500 matrices"))
}

fn perturbed_batch(n: usize, count: u64, salt: u64) -> Vec<(Graph, Graph)> {
    (0..count)
        .map(|i| common::generated_pair(n, 1 + (i % 5) as usize, salt + i))
        .collect()
}

fn mean_extensions(pairs: &[(Graph, Graph)], cfg: &SearchConfig) -> f64 {
    let total: u64 = pairs
        .iter()
        .map(|(g1, g2)| {
            let r = ged_compute(g1, g2, cfg);
            assert_eq!(r.status, Status::Ok);
            r.stats.extensions
        })
        .sum();
    total as f64 / pairs.len() as f64
}

fn search_space_ordering() -> Verdict {
    const SLACK: f64 = 1.05;
    let start = Instant::now();
    let pairs = perturbed_batch(14, 100, 50_000);
    let mut means = Vec::new();
    for bound in BoundKind::ALL {
        let astar = mean_extensions(&pairs, &SearchConfig::new(Strategy::BestFirst, bound));
        let dfs = mean_extensions(&pairs, &SearchConfig::new(Strategy::DepthFirst, bound));
        means.push((bound, astar, dfs));
    }
    let mut failures = Vec::new();
    let astar = |k: BoundKind| means.iter().find(|m| m.0 == k).unwrap().1;
    if astar(BoundKind::BmAnchored) > SLACK * astar(BoundKind::LsAnchored) {
        failures.push("BMa above LSa".to_string());
    }
    if astar(BoundKind::LsAnchored) > SLACK * astar(BoundKind::Ls) {
        failures.push("LSa above LS".to_string());
    }
    for &(bound, a, d) in &means {
        if a > SLACK * d {
            failures.push(format!("{bound}: best-first {a:.1} above depth-first {d:.1}"));
        }
    }
    let table: Vec<String> = means
        .iter()
        .map(|(b, a, d)| format!("{b} {a:.1}/{d:.1}"))
        .collect();
    verdict(
        &failures,
        format!(
            "mean extensions best-first/depth-first: {} ({:.1}s)",
            table.join(", "),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn verification_equivalence() -> Verdict {
    let mut failures = Vec::new();
    let mut dissimilar = 0;
    let mut similar = 0;
    let mut seed = 60_000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    while dissimilar < 100 {
        seed += 1;
        let (g1, g2) = common::small_pair(seed, 8);
        let d = brute_force_ged(&g1, &g2, OracleLimit::default()).unwrap();
        if d == 0 {
            continue;
        }
        dissimilar += 1;
        let tau = rng.gen_range(0..d);
        for bound in BoundKind::ALL {
            let a = ged_verify(&g1, &g2, tau, &SearchConfig::new(Strategy::BestFirst, bound));
            let b = ged_verify(&g1, &g2, tau, &SearchConfig::new(Strategy::DepthFirst, bound));
            if a.verified != Some(false) || b.verified != Some(false) {
                failures.push(format!("seed {seed} {bound}: accepted tau {tau} below {d}"));
            }
            if a.stats.extensions != b.stats.extensions {
                failures.push(format!(
                    "seed {seed} {bound} tau {tau}: extensions {} vs {}",
                    a.stats.extensions, b.stats.extensions
                ));
            }
        }
    }
    for i in 0..100 {
        let (g1, g2) = common::generated_pair(10, 1 + i % 5, 70_000 + i as u64);
        let tau = rng.gen_range(0..6);
        for cfg in common::all_configs() {
            similar += 1;
            let d = ged_compute(&g1, &g2, &cfg).distance.unwrap();
            let v = ged_verify(&g1, &g2, tau, &cfg).verified.unwrap();
            if v != (d <= tau) {
                failures.push(format!("pair {i} {}-{} tau {tau}: verify {v}, distance {d}", cfg.strategy, cfg.bound));
            }
        }
    }
    verdict(&failures, format!("{dissimilar} dissimilar queries x 7 bounds, {similar} mixed queries"))
}

fn desk_scale() -> Verdict {
    let cfg = SearchConfig::new(Strategy::BestFirst, BoundKind::BmAnchored);
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for i in 0..20 {
        let (g1, g2) = common::generated_pair(30, 5, 80_000 + i);
        let start = Instant::now();
        let r = ged_compute(&g1, &g2, &cfg);
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        if r.status != Status::Ok || elapsed > Duration::from_secs(60) {
            failures.push(format!("pair {i}: {} after {elapsed:?}", r.status));
        }
    }
    verdict(&failures, format!("slowest pair {:.3}s", slowest.as_secs_f64()))
}

fn structural_invariants() -> Verdict {
    let mut failures = Vec::new();
    let mut pairs = perturbed_batch(10, 40, 90_000);
    pairs.extend((0..40).map(|i| common::small_pair(91_000 + i, 7)));
    for (i, (g1, g2)) in pairs.iter().enumerate() {
        for base in common::all_configs() {
            let cfg = SearchConfig {
                trace: true,
                ..base.clone()
            };
            let r = ged_compute(g1, g2, &cfg);
            let d = r.distance.unwrap();
            let n = g1.vertex_count().max(g2.vertex_count()) as u64;
            let tag = format!("pair {i} {}-{}", cfg.strategy, cfg.bound);
            if cfg.strategy == Strategy::DepthFirst && r.stats.peak_queue > n.max(1) {
                failures.push(format!("{tag}: queue peaked at {} > {n}", r.stats.peak_queue));
            }
            if cfg.strategy == Strategy::BestFirst {
                if let Some(t) = r.trace.iter().find(|t| t.bound > BoundValue::integer(d as i64)) {
                    failures.push(format!("{tag}: extended a node with bound {} > {d}", t.bound));
                }
            }
            if r.stats.pushed > 2 * r.stats.popped + 1 {
                failures.push(format!("{tag}: pushed {} popped {}", r.stats.pushed, r.stats.popped));
            }
            let all = ged_compute(g1, g2, &SearchConfig { expand_all: true, ..base });
            if all.distance != r.distance || all.stats.extensions != r.stats.extensions {
                failures.push(format!(
                    "{tag}: expand-all {:?}/{} vs {d}/{}",
                    all.distance, all.stats.extensions, r.stats.extensions
                ));
            }
        }
    }
    verdict(&failures, format!("{} pairs x 14 configurations", pairs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("admissibility", admissibility),
        ("dominance chain", dominance),
        ("fast-path equivalence", fast_path),
        ("search-space ordering", search_space_ordering),
        ("verification equivalence", verification_equivalence),
        ("desk-scale performance", desk_scale),
        ("structural invariants", structural_invariants),
    ];
    let mut all_passed = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        all_passed &= v.passed;
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {}: {name}: {}", i + 1, v.detail);
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
